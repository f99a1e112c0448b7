#!/usr/bin/env python3
"""
Pruebas de composición, PSQ, integridad de objetos y reporte de métricas.
"""
import csv
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.alignment import AlignedPair
from src.errores import ClasificadorErrores, InvalidReportError, PartitionViolationError
from src.imaging import CostMap
from src.metrics import CAMPOS_CSV, MetricsReport, compose, object_integrity, psq, score, seam_energy
from src.seams import Label, find_seam


def _par(target, reference, fin_t=None, inicio_r=None):
    alto, ancho = target.shape[:2]
    valid_t = np.ones((alto, ancho), dtype=bool)
    valid_r = np.ones((alto, ancho), dtype=bool)
    if fin_t is not None:
        valid_t[:, fin_t + 1:] = False
    if inicio_r is not None:
        valid_r[:, :inicio_r] = False
    return AlignedPair.from_prewarped(target, reference, valid_t, valid_r)


def _labels_columna(alto, ancho, corte):
    labels = np.full((alto, ancho), Label.REFERENCE, dtype=np.int8)
    labels[:, :corte] = Label.TARGET
    return labels


def _disco(forma, centro, radio):
    filas, cols = np.mgrid[0:forma[0], 0:forma[1]]
    return (filas - centro[0]) ** 2 + (cols - centro[1]) ** 2 <= radio ** 2


# --- composición ---

def test_composicion_extremos_y_punto_medio():
    rng = np.random.default_rng(0)
    a, b = rng.uniform(size=(5, 6, 3)), rng.uniform(size=(5, 6, 3))
    par = _par(a, b)
    np.testing.assert_allclose(compose(par, np.ones((5, 6)), np.zeros((5, 6))), a)
    np.testing.assert_allclose(compose(par, np.full((5, 6), 0.5), np.full((5, 6), 0.5)), (a + b) / 2)


def test_composicion_de_imagenes_identicas():
    rng = np.random.default_rng(1)
    a = rng.uniform(size=(6, 8, 3))
    par = _par(a, a.copy(), fin_t=5, inicio_r=2)
    L1 = np.clip(rng.uniform(size=(6, 8)), 0, 1)
    salida = compose(par, L1, 1.0 - L1)
    assert np.abs(salida - a).max() < 1e-6


def test_composicion_regiones_exclusivas_e_invalidas():
    a = np.full((3, 6, 3), 0.2)
    b = np.full((3, 6, 3), 0.8)
    valid_t = np.zeros((3, 6), dtype=bool)
    valid_r = np.zeros((3, 6), dtype=bool)
    valid_t[:, :3] = True
    valid_r[:, 2:5] = True
    par = AlignedPair.from_prewarped(a, b, valid_t, valid_r)
    salida = compose(par, np.full((3, 6), 0.5), np.full((3, 6), 0.5))
    np.testing.assert_allclose(salida[:, :2], 0.2)
    np.testing.assert_allclose(salida[:, 2], 0.5)
    np.testing.assert_allclose(salida[:, 3:5], 0.8)
    assert np.all(salida[:, 5] == 0.0)


def test_composicion_viola_particion():
    a = np.full((3, 3, 3), 0.5)
    with pytest.raises(PartitionViolationError):
        compose(_par(a, a), np.full((3, 3), 0.6), np.full((3, 3), 0.6))


# --- PSQ ---

def test_psq_imagenes_identicas():
    rng = np.random.default_rng(2)
    a = rng.uniform(size=(12, 12, 3))
    assert psq(_par(a, a.copy()), _labels_columna(12, 12, 6), np.zeros((12, 12))) == 0.0


def test_psq_negro_contra_blanco():
    par = _par(np.zeros((12, 12, 3)), np.ones((12, 12, 3)))
    assert psq(par, _labels_columna(12, 12, 6), np.zeros((12, 12))) == pytest.approx(1.0)


def test_psq_sin_costura():
    par = _par(np.zeros((6, 6, 3)), np.ones((6, 6, 3)))
    assert psq(par, np.full((6, 6), Label.TARGET, dtype=np.int8), np.zeros((6, 6))) == 0.0


def test_psq_invariante_a_saliencia_uniforme():
    rng = np.random.default_rng(3)
    par = _par(rng.uniform(size=(12, 12, 3)), rng.uniform(size=(12, 12, 3)))
    labels = _labels_columna(12, 12, 5)
    assert psq(par, labels, np.full((12, 12), 0.1)) == pytest.approx(psq(par, labels, np.full((12, 12), 0.9)))


def test_psq_monotono():
    rng = np.random.default_rng(4)
    a = rng.uniform(0.3, 0.7, size=(12, 12, 3))
    b = a.copy()
    b[:, 4:8] += 0.1
    labels = _labels_columna(12, 12, 6)
    saliencia = rng.uniform(size=(12, 12))
    base = psq(_par(a, b), labels, saliencia)
    b2 = b.copy()
    b2[:, 4:8] += 0.1
    assert psq(_par(a, b2), labels, saliencia) >= base


# --- integridad ---

def test_integridad_disco_sin_partir():
    O = _disco((20, 20), (10, 10), 4)
    assert object_integrity(O, np.full((20, 20), Label.TARGET, dtype=np.int8)) == (False, 0, 0)


def test_integridad_disco_bisecado():
    O = _disco((20, 20), (10, 10), 4)
    falla, partidos, pixeles = object_integrity(O, _labels_columna(20, 20, 10))
    assert falla and partidos == 1
    area = int(O.sum())
    assert abs(pixeles - area / 2) <= 5


def test_integridad_objeto_vacio():
    assert object_integrity(np.zeros((8, 8), dtype=bool), _labels_columna(8, 8, 4)) == (False, 0, 0)


def _caso(nombre):
    """Casos construidos a mano: (O, labels, fallo esperado, componentes partidos)."""
    O = np.zeros((20, 30), dtype=bool)
    labels = _labels_columna(20, 30, 15)
    if nombre == "disco_izquierda":
        O |= _disco(O.shape, (10, 6), 3)
        return O, labels, False, 0
    if nombre == "disco_derecha":
        O |= _disco(O.shape, (10, 24), 3)
        return O, labels, False, 0
    if nombre == "disco_en_la_costura":
        O |= _disco(O.shape, (10, 15), 3)
        return O, labels, True, 1
    if nombre == "dos_discos_uno_partido":
        O |= _disco(O.shape, (4, 6), 2) | _disco(O.shape, (14, 15), 3)
        return O, labels, True, 1
    if nombre == "dos_discos_partidos":
        O |= _disco(O.shape, (4, 15), 2) | _disco(O.shape, (15, 15), 2)
        return O, labels, True, 2
    if nombre == "mancha_pequena_partida":
        O[9:11, 14:16] = True
        return O, labels, False, 0
    if nombre == "rectangulo_tocando_la_costura":
        O[5:15, 9:15] = True
        return O, labels, False, 0
    if nombre == "rectangulo_cruzando":
        O[5:15, 12:18] = True
        return O, labels, True, 1
    if nombre == "costura_horizontal":
        O |= _disco(O.shape, (10, 6), 3)
        labels = np.full((20, 30), Label.REFERENCE, dtype=np.int8)
        labels[:10] = Label.TARGET
        return O, labels, True, 1
    if nombre == "partido_con_invalidos":
        O[5:15, 12:18] = True
        labels[:, 15:] = Label.INVALID
        return O, labels, False, 0
    raise KeyError(nombre)


@pytest.mark.parametrize("nombre", [
    "disco_izquierda", "disco_derecha", "disco_en_la_costura", "dos_discos_uno_partido",
    "dos_discos_partidos", "mancha_pequena_partida", "rectangulo_tocando_la_costura",
    "rectangulo_cruzando", "costura_horizontal", "partido_con_invalidos",
])
def test_integridad_casos_construidos(nombre):
    O, labels, falla, partidos = _caso(nombre)
    resultado = object_integrity(O, labels)
    assert resultado[0] is falla
    assert resultado[1] == partidos


# --- energía ---

def test_energia_de_costura_casos_cerrados():
    dominio = np.ones((3, 4), dtype=bool)
    labels = _labels_columna(3, 4, 2)
    assert seam_energy(CostMap.zeros(dominio), labels) == 0.0
    assert seam_energy(CostMap(np.ones((3, 4)), dominio), np.full((3, 4), Label.TARGET, dtype=np.int8)) == 0.0
    assert seam_energy(CostMap(np.ones((3, 4)), dominio), labels) == pytest.approx(3.0)


# --- reporte ---

def test_reporte_valida_invariantes():
    with pytest.raises(InvalidReportError):
        MetricsReport(psq=1.5, failure=False, split_components=0, split_pixels=0,
                      seam_energy=0.0, seam_length=0, method="dp")
    with pytest.raises(InvalidReportError):
        MetricsReport(psq=0.5, failure=True, split_components=0, split_pixels=0,
                      seam_energy=0.0, seam_length=0, method="dp")
    with pytest.raises(InvalidReportError):
        MetricsReport(psq=0.5, failure=False, split_components=0, split_pixels=0,
                      seam_energy=-1.0, seam_length=0, method="dp")


def test_reporte_invalido_se_clasifica_como_numerico():
    with pytest.raises(InvalidReportError) as info:
        MetricsReport(psq=float("nan"), failure=False, split_components=0, split_pixels=0,
                      seam_energy=0.0, seam_length=0, method="dp")
    assert ClasificadorErrores().codigo_salida(info.value) == 3


def test_reporte_desde_fila_csv(tmp_path):
    reporte = MetricsReport(psq=0.25, failure=True, split_components=1, split_pixels=12,
                            seam_energy=3.5, seam_length=40, method="graphcut", time_ms=1.5)
    ruta = tmp_path / "r.csv"
    with open(ruta, "w", newline="", encoding="utf-8") as f:
        escritor = csv.DictWriter(f, fieldnames=CAMPOS_CSV)
        escritor.writeheader()
        escritor.writerow(reporte.fila_csv("par_000"))
    with open(ruta, newline="", encoding="utf-8") as f:
        fila = next(csv.DictReader(f))
    assert fila["pair"] == "par_000"
    assert MetricsReport.desde_diccionario(fila) == reporte


def test_reporte_sin_tiempo():
    reporte = MetricsReport(psq=0.0, failure=False, split_components=0, split_pixels=0,
                            seam_energy=0.0, seam_length=3, method="dp", time_ms=9.0)
    assert "time_ms" not in reporte.sin_tiempo()


def test_puntuacion_de_un_resultado():
    rng = np.random.default_rng(5)
    a = rng.uniform(size=(12, 16, 3))
    par = _par(a, a.copy(), fin_t=10, inicio_r=5)
    costo = CostMap.zeros(par.overlap)
    resultado = find_seam("voronoi", par, costo)
    O = _disco(par.shape, (6, 8), 2)
    reporte = score(par, resultado, O, costo, np.zeros(par.shape))
    assert reporte.method == "voronoi"
    assert reporte.psq == 0.0
    assert reporte.failure is True and reporte.split_components == 1
    assert reporte.seam_length == resultado.seam_length
    assert reporte.time_ms >= 0.0
