#!/usr/bin/env python3
"""
Pruebas del generador sintético, del pipeline por par y de la evaluación por lotes.
"""
import json
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from src.alignment import warp_pair
from src.errores import (
    ConfigurationError, EmptyMethodListError, NoPairsError, ObjectOutsideCanvasError, PipelineError
)
from src.harness import (
    PlantedObject, SynthSpec, centered_object, read_csv_reports, render_synth, resolve_pairs,
    run_batch, run_pair, synth_pair, synth_suite
)
from src.imaging import write_image
from src.modelos import RunConfig

RAIZ = os.path.dirname(os.path.abspath(__file__))


def _spec(**cambios):
    spec = SynthSpec(**cambios)
    if not spec.objects:
        spec = spec.clonar(objects=[centered_object(spec)])
    return spec


# --- generador sintético ---

def test_geometria_por_defecto():
    spec = SynthSpec()
    assert spec.view_width == 107
    assert spec.shift == 53
    assert spec.overlap_columns == (53, 107)


def test_vistas_coinciden_en_el_solapamiento():
    spec = _spec(background="noise", seed=4)
    par = render_synth(spec)
    w, s = spec.view_width, spec.shift
    assert par.target.shape == par.reference.shape == (96, w, 3)
    np.testing.assert_array_equal(par.target[:, s:w], par.reference[:, 0:w - s])


def test_homografia_verdadera_lleva_al_lienzo_de_la_escena():
    spec = _spec()
    par = render_synth(spec)
    alineado = warp_pair(par.target, par.reference, par.true_H)
    assert alineado.shape == (96, 160)
    assert np.array_equal(np.nonzero(alineado.overlap.any(axis=0))[0], np.arange(53, 107))
    assert par.true_O.shape == (96, 160)


def test_area_del_objeto():
    par = render_synth(_spec())
    area = np.pi * 10 ** 2
    for mascara in (par.mask_t, par.mask_r):
        assert 0.9 * area <= mascara.sum() <= 1.1 * area
    assert np.array_equal(par.true_O, par.mask_t | par.mask_r)


def test_objeto_centrado_en_el_solapamiento():
    par = render_synth(SynthSpec(objects=[centered_object(SynthSpec(), displacement=10)]))
    cols = np.nonzero(par.true_O.any(axis=0))[0]
    centro = (cols.min() + cols.max()) / 2.0
    assert abs(centro - 79.5) <= 3
    assert cols.min() >= 53 and cols.max() < 107


def test_determinista_por_semilla():
    spec = _spec(background="noise", jitter=0.02, adversarial=True, seed=11)
    a, b = synth_pair(spec), synth_pair(spec)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    np.testing.assert_array_equal(a[3], b[3])
    otro = synth_pair(spec.clonar(seed=12))
    assert not np.array_equal(a[1], otro[1])


def test_corredor_adversario_sin_perturbacion():
    spec = _spec(adversarial=True)
    par = render_synth(spec)
    s = spec.shift
    obj = spec.objects[0]
    centro = int(round(obj.center[0]))
    limpio = render_synth(spec.clonar(adversarial=False))
    np.testing.assert_array_equal(par.reference[:, centro - s], limpio.reference[:, centro - s])
    assert not np.array_equal(par.reference, limpio.reference)


def test_objeto_fuera_del_lienzo():
    spec = SynthSpec(objects=[PlantedObject(center=(2.0, 40.0), size=20)])
    with pytest.raises(ObjectOutsideCanvasError):
        render_synth(spec)


def test_solapamiento_demasiado_pequeno():
    with pytest.raises(ConfigurationError):
        render_synth(SynthSpec(overlap_fraction=0.05))


def test_spec_desde_diccionario():
    spec = _spec(background="checker", seed=3)
    copia = SynthSpec.desde_diccionario(json.loads(json.dumps(spec.to_dict())))
    assert copia == spec


def test_suite_por_defecto_de_sesenta_pares():
    with open(os.path.join(RAIZ, "data", "suite_default.json"), encoding="utf-8") as f:
        suite = synth_suite(json.load(f))
    assert len(suite) == 60
    assert [n for n, _ in suite][:2] == ["synth_000", "synth_001"]
    assert [s.seed for _, s in suite] == list(range(60))
    assert {s.background for _, s in suite} == {"gradient", "checker", "noise"}
    assert {s.objects[0].shape for _, s in suite} == {"disk", "rectangle"}
    assert all(s.adversarial for _, s in suite)
    for _, spec in suite:
        spec.validar()


# --- pipeline por par ---

def test_par_constante_pre_proyectado():
    img = np.full((32, 48, 3), 0.4)
    valid_t = np.zeros((32, 48), dtype=bool)
    valid_r = np.zeros((32, 48), dtype=bool)
    valid_t[:, :30] = True
    valid_r[:, 18:] = True
    cfg = RunConfig(alignment_mode="pre-warped", output_dir=None)
    resultado = run_pair(img, img, cfg, valid_t=valid_t, valid_r=valid_r)
    assert resultado.exitoso
    for metodo in ("dp", "graphcut", "voronoi", "object-aware"):
        r = resultado.metodos[metodo]
        assert r.exitoso, r.error
        assert r.reporte.psq == 0.0
        assert r.reporte.failure is False
        assert np.abs(r.imagen[valid_t | valid_r] - 0.4).max() < 1e-6


def test_par_adversario_corte_falla_y_con_objeto_no():
    spec = _spec(adversarial=True)
    par = render_synth(spec)
    cfg = RunConfig(methods=["graphcut", "object-aware"], alignment_mode="provided-H",
                    saliency_mode="file", output_dir=None)
    resultado = run_pair(par.target, par.reference, cfg, homography=par.true_H,
                         masks=(par.mask_t, par.mask_r))
    assert resultado.metodos["graphcut"].reporte.failure is True
    assert resultado.metodos["object-aware"].reporte.failure is False


def test_salidas_escritas(tmp_path):
    spec = _spec()
    par = render_synth(spec)
    cfg = RunConfig(methods=["voronoi", "object-aware"], alignment_mode="provided-H",
                    saliency_mode="file", report_format="csv", output_dir=str(tmp_path))
    cfg = cfg.clonar(optim=cfg.optim.clonar(max_epochs=20))
    run_pair(par.target, par.reference, cfg, homography=par.true_H, masks=(par.mask_t, par.mask_r))
    nombres = set(os.listdir(tmp_path))
    for esperado in ("object_mask.pgm", "stitched_voronoi.png", "labels_voronoi.pgm", "report_voronoi.json",
                     "stitched_object-aware.png", "trace_object-aware.json", "reports.csv"):
        assert esperado in nombres
    assert "trace_voronoi.json" not in nombres


def test_error_de_metodo_no_detiene_los_demas():
    img = np.full((20, 20, 3), 0.5)
    cfg = RunConfig(methods=["voronoi", "dp"], alignment_mode="pre-warped", output_dir=None)
    resultado = run_pair(img, img, cfg)
    assert not resultado.metodos["voronoi"].exitoso
    assert resultado.metodos["voronoi"].error["codigo_salida"] == 2
    assert resultado.metodos["dp"].exitoso


def test_lista_de_metodos_vacia():
    with pytest.raises(EmptyMethodListError):
        run_pair(np.zeros((4, 4, 3)), np.zeros((4, 4, 3)), RunConfig(methods=[]))


def test_provided_h_sin_homografia():
    with pytest.raises(PipelineError) as info:
        run_pair(np.zeros((40, 40, 3)), np.zeros((40, 40, 3)),
                 RunConfig(alignment_mode="provided-H", output_dir=None))
    assert isinstance(info.value.causa, ConfigurationError)


# --- lotes ---

def _suite_pequena(n=3):
    base = SynthSpec(height=48, width=96, adversarial=True)
    suite = []
    for i in range(n):
        spec = base.clonar(seed=i, background=("gradient", "checker", "noise")[i % 3])
        suite.append((f"p{i}", spec.clonar(objects=[centered_object(spec, size=12)])))
    return suite


def _cfg_lote(**cambios):
    cfg = RunConfig(methods=["dp", "voronoi"], output_dir=None)
    return cfg.clonar(**cambios)


def test_lote_filas_y_csv(tmp_path):
    suite = _suite_pequena(3)
    salida = run_batch(suite, _cfg_lote(), out_dir=str(tmp_path))
    assert len(salida.filas) == 2 * len(suite)
    leidas = read_csv_reports(salida.ruta_csv)
    assert [p for p, _ in leidas] == ["p0", "p0", "p1", "p1", "p2", "p2"]
    for metodo in ("dp", "voronoi"):
        propias = [r for _, r in leidas if r.method == metodo]
        tasa = sum(r.failure for r in propias) / len(propias)
        assert salida.resumen["methods"][metodo]["failure_rate"] == pytest.approx(tasa)
    with open(salida.ruta_resumen, encoding="utf-8") as f:
        resumen = json.load(f)
    assert resumen["batch"]["pares_procesados"] == 3
    assert os.path.isfile(os.path.join(tmp_path, "p0", "labels_dp.pgm"))


def test_lote_determinista_entre_trabajos():
    suite = _suite_pequena(4)
    uno = run_batch(suite, _cfg_lote(jobs=1), out_dir="")
    dos = run_batch(suite, _cfg_lote(jobs=2), out_dir="")
    quitar = [{k: v for k, v in fila.items() if k != "time_ms"} for fila in uno.filas]
    assert quitar == [{k: v for k, v in fila.items() if k != "time_ms"} for fila in dos.filas]


def test_lote_directorio_de_pares_identicos(tmp_path):
    for i in range(2):
        spec = SynthSpec(height=48, width=96, background="noise", seed=i)
        par = render_synth(spec)
        destino = tmp_path / f"par{i}"
        destino.mkdir()
        write_image(str(destino / "target.png"), par.target)
        write_image(str(destino / "reference.png"), par.reference)
        par.true_H.save(str(destino / "H.json"))
    cfg = _cfg_lote(methods=["dp", "graphcut", "voronoi"], alignment_mode="provided-H")
    salida = run_batch(str(tmp_path), cfg, out_dir="")
    assert len(salida.filas) == 6
    assert all(fila["psq"] == 0.0 for fila in salida.filas)


def test_lote_registra_errores_por_metodo():
    salida = run_batch(_suite_pequena(1), _cfg_lote(methods=["dp", "tijeras"]), out_dir="")
    assert len(salida.filas) == 1
    assert salida.resumen["methods"]["tijeras"]["errors"] == 1
    assert salida.resumen["methods"]["tijeras"]["pairs"] == 0
    assert salida.resumen["batch"]["errores_por_metodo"] == {"tijeras": 1}


def test_directorio_vacio(tmp_path):
    with pytest.raises(NoPairsError):
        resolve_pairs(str(tmp_path))


def test_fuente_inexistente(tmp_path):
    with pytest.raises(NoPairsError):
        resolve_pairs(str(tmp_path / "nada.json"))


@pytest.mark.slow
def test_suite_por_defecto_ordena_la_integridad():
    cfg = RunConfig(methods=["graphcut", "dp", "object-aware"], jobs=4, output_dir=None)
    salida = run_batch(os.path.join(RAIZ, "data", "suite_default.json"), cfg, out_dir="")
    metodos = salida.resumen["methods"]
    assert metodos["object-aware"]["failure_rate"] <= 0.10
    assert metodos["graphcut"]["failure_rate"] >= 0.60
    assert metodos["dp"]["failure_rate"] >= 0.60
    assert all(0.0 <= fila["psq"] <= 1.0 for fila in salida.filas)

    convergidos = 0
    for resultado in salida.resultados:
        seam = resultado.metodos["object-aware"].seam
        convergidos += bool(seam.info["converged"])
        for anterior, actual in zip(seam.trace, seam.trace[1:]):
            assert actual["total"] <= anterior["total"] + 1e-9
    assert convergidos >= 0.95 * len(salida.resultados)
