#!/usr/bin/env python3
"""
Pruebas de correspondencias, homografías, RANSAC y proyección al lienzo.
"""
import os
import sys

import numpy as np
import pytest
from scipy import ndimage

sys.path.insert(0, os.path.dirname(__file__))

from src.alignment import (
    AlignedPair, Correspondence, Homography, detect_matches, estimate_homography,
    homography_from_any, ransac_homography, warp_pair
)
from src.errores import (
    CanvasTooLargeError, ConfigurationError, DegenerateConfigurationError,
    ImageTooSmallError, RansacFailureError
)

CUADRADO = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def _textura(alto, ancho, semilla=0):
    rng = np.random.default_rng(semilla)
    ruido = ndimage.gaussian_filter(rng.uniform(size=(alto, ancho)), sigma=2.0)
    ruido = (ruido - ruido.min()) / (ruido.max() - ruido.min())
    return np.repeat(ruido[:, :, None], 3, axis=2)


def _h_conocida():
    return Homography(np.array([[1.02, 0.03, 12.0], [-0.02, 0.98, -7.0], [1e-4, -5e-5, 1.0]]))


def test_cuadrado_identidad():
    H = estimate_homography(CUADRADO, CUADRADO)
    np.testing.assert_allclose(H.h, np.eye(3), atol=1e-9)


def test_cuadrado_trasladado():
    H = estimate_homography(CUADRADO, CUADRADO + [5.0, 3.0])
    np.testing.assert_allclose(H.h, Homography.translation(5, 3).h, atol=1e-6)


def test_tres_puntos_colineales():
    src = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 3.0]])
    with pytest.raises(DegenerateConfigurationError):
        estimate_homography(src, src + 1.0)


def test_menos_de_cuatro_puntos():
    with pytest.raises(DegenerateConfigurationError):
        estimate_homography(CUADRADO[:3], CUADRADO[:3])


def test_homografia_singular():
    with pytest.raises(DegenerateConfigurationError):
        Homography(np.zeros((3, 3)))


def _correspondencias(H, n, semilla):
    rng = np.random.default_rng(semilla)
    src = rng.uniform(0, 200, size=(n, 2))
    dst = H.apply(src)
    return [Correspondence(tuple(s), tuple(d), 1.0) for s, d in zip(src, dst)]


def test_ransac_correspondencias_exactas():
    H = _h_conocida()
    H_est, inliers = ransac_homography(_correspondencias(H, 20, 0), iterations=200)
    assert inliers == list(range(20))
    np.testing.assert_allclose(H_est.h, H.h, atol=1e-6)


def test_ransac_con_atipicos():
    H = _h_conocida()
    matches = _correspondencias(H, 20, 1)
    rng = np.random.default_rng(2)
    for _ in range(10):
        matches.append(Correspondence(tuple(rng.uniform(0, 200, 2)), tuple(rng.uniform(0, 200, 2)), 0.8))
    H_est, inliers = ransac_homography(matches, seed=3)
    assert len(inliers) >= 20
    assert set(range(20)) <= set(inliers)
    puntos = np.array([[10.0, 10.0], [150.0, 40.0], [80.0, 190.0]])
    np.testing.assert_allclose(H_est.apply(puntos), H.apply(puntos), atol=1e-4)


def test_ransac_determinista():
    H = _h_conocida()
    matches = _correspondencias(H, 12, 4)
    a = ransac_homography(matches, iterations=100, seed=9)
    b = ransac_homography(matches, iterations=100, seed=9)
    np.testing.assert_array_equal(a[0].h, b[0].h)
    assert a[1] == b[1]


@pytest.mark.parametrize("semilla", [0, 1, 2])
def test_ransac_correspondencias_aleatorias_falla(semilla):
    rng = np.random.default_rng(100 + semilla)
    matches = [Correspondence(tuple(rng.uniform(0, 500, 2)), tuple(rng.uniform(0, 500, 2)), 0.9)
               for _ in range(12)]
    with pytest.raises(RansacFailureError):
        ransac_homography(matches, seed=semilla)


def test_ransac_pocas_correspondencias():
    with pytest.raises(RansacFailureError):
        ransac_homography(_correspondencias(Homography.identity(), 3, 0))


def test_ransac_seis_correspondencias_exactas():
    H = Homography.translation(5, 3)
    H_est, inliers = ransac_homography(_correspondencias(H, 6, 5))
    assert inliers == list(range(6))
    np.testing.assert_allclose(H_est.h, H.h, atol=1e-6)


@pytest.mark.parametrize("n", [4, 5])
def test_ransac_minimo_de_correspondencias_exactas(n):
    H = _h_conocida()
    H_est, inliers = ransac_homography(_correspondencias(H, n, 6), iterations=50)
    assert inliers == list(range(n))
    np.testing.assert_allclose(H_est.apply(CUADRADO * 100), H.apply(CUADRADO * 100), atol=1e-4)


def test_homografia_json():
    H = _h_conocida()
    assert np.allclose(Homography.from_json(H.to_json()).h, H.h)
    assert np.allclose(Homography.from_json(list(H.h.ravel())).h, H.h)
    assert np.allclose(homography_from_any("[1, 0, 2, 0, 1, 3, 0, 0, 1]").h, Homography.translation(2, 3).h)
    with pytest.raises(ConfigurationError):
        Homography.from_json([1, 2, 3])


def test_homografia_archivo(tmp_path):
    ruta = str(tmp_path / "H.json")
    Homography.translation(-4, 1).save(ruta)
    assert np.allclose(Homography.load(ruta).h, Homography.translation(-4, 1).h)
    with pytest.raises(ConfigurationError):
        Homography.load(str(tmp_path / "no.json"))


def test_correspondencias_imagen_consigo_misma():
    img = _textura(64, 64)
    matches = detect_matches(img, img)
    assert matches
    for m in matches:
        assert m.source == m.destination
        assert abs(m.score - 1.0) < 1e-6


def test_correspondencias_traslacion():
    escena = _textura(80, 140, semilla=5)
    a = escena[:, 10:110]
    b = escena[:, 0:100]
    matches = detect_matches(a, b)
    assert len(matches) >= 20
    correctos = sum(1 for m in matches
                    if abs(m.destination[0] - m.source[0] - 10) <= 1 and abs(m.destination[1] - m.source[1]) <= 1)
    assert correctos >= 0.8 * len(matches)


def test_correspondencias_sin_textura():
    plana = np.full((40, 40, 3), 0.5)
    assert detect_matches(plana, plana) == []


def test_correspondencias_imagen_pequena():
    with pytest.raises(ImageTooSmallError):
        detect_matches(np.zeros((20, 40, 3)), np.zeros((40, 40, 3)))


def test_proyeccion_identidad():
    img = _textura(20, 30)
    par = warp_pair(img, img, Homography.identity())
    assert par.shape == (20, 30)
    assert par.valid_t.all() and par.valid_r.all() and par.overlap.all()
    np.testing.assert_allclose(par.warped_target, img, atol=1e-12)


def test_proyeccion_traslacion_media_imagen():
    alto, ancho = 40, 60
    img = _textura(alto, ancho)
    par = warp_pair(img, img, Homography.translation(ancho / 2, 0))
    area = par.overlap.sum()
    assert abs(area - (ancho / 2) * alto) <= 0.01 * (ancho / 2) * alto + alto
    assert par.exclusive_t.any() and par.exclusive_r.any()


def test_proyeccion_traslacion_entera_es_exacta():
    img = _textura(24, 32)
    par = warp_pair(img, img, Homography.translation(-8, 0))
    assert par.shape == (24, 40)
    assert par.offset == (8, 0)
    np.testing.assert_allclose(par.warped_target[:, 0:32], img, atol=1e-12)


def test_proyeccion_disjunta():
    img = _textura(16, 16)
    par = warp_pair(img, img, Homography.translation(100, 0))
    assert not par.overlap.any()


def test_lienzo_demasiado_grande():
    img = _textura(16, 16)
    with pytest.raises(CanvasTooLargeError):
        warp_pair(img, img, Homography.translation(10_000, 10_000), max_canvas_pixels=1_000_000)


def test_par_pre_proyectado_anula_fuera_de_validez():
    img = np.full((4, 6, 3), 0.7)
    valid_t = np.zeros((4, 6), dtype=bool)
    valid_t[:, :4] = True
    par = AlignedPair.from_prewarped(img, img, valid_t, None)
    assert np.all(par.warped_target[:, 4:] == 0.0)
    assert par.overlap.sum() == 16
    assert par.exclusive_r.sum() == 8


def test_traslacion_diagonal_se_recupera():
    escena = _textura(110, 150, semilla=9)
    a = escena[4:100, 6:140]
    b = escena[0:96, 0:134]
    matches = detect_matches(a, b)
    assert len(matches) >= 20
    H, inliers = ransac_homography(matches, seed=1)
    np.testing.assert_allclose(H.apply(np.array([[20.0, 30.0]])), [[26.0, 34.0]], atol=0.5)
    assert len(inliers) >= 20
