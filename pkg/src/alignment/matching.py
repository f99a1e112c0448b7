"""
Detección de esquinas Harris y emparejamiento por correlación cruzada normalizada.
"""
import logging
from typing import List

import numpy as np
from skimage.feature import corner_harris, corner_peaks

from src.alignment.homography import Correspondence
from src.errores.excepciones import ImageTooSmallError
from src.imaging.buffers import to_grayscale

logger = logging.getLogger(__name__)

TAMANO_MINIMO = 32
NORMA_MINIMA = 1e-8
RESPUESTA_MINIMA = 1e-10
UMBRAL_RELATIVO = 1e-3
DISTANCIA_MINIMA = 3


def _esquinas(gray: np.ndarray, radio: int, max_corners: int) -> np.ndarray:
    """Picos de la medida de Harris en la forma de Noble, que no es negativa."""
    respuesta = corner_harris(gray, method='eps', eps=1e-6, sigma=1)
    if not np.isfinite(respuesta).all() or respuesta.max() <= RESPUESTA_MINIMA:
        return np.empty((0, 2), dtype=int)
    return corner_peaks(
        respuesta,
        min_distance=DISTANCIA_MINIMA,
        threshold_abs=RESPUESTA_MINIMA,
        threshold_rel=UMBRAL_RELATIVO,
        exclude_border=radio,
        num_peaks=max_corners,
    )


def _parches(gray: np.ndarray, puntos: np.ndarray, radio: int):
    """Parches de media cero y norma uno; descarta los planos."""
    lado = 2 * radio + 1
    if puntos.shape[0] == 0:
        return puntos, np.empty((0, lado * lado))
    ventanas = np.lib.stride_tricks.sliding_window_view(gray, (lado, lado))
    parches = ventanas[puntos[:, 0] - radio, puntos[:, 1] - radio].reshape(len(puntos), -1)
    parches = parches - parches.mean(axis=1, keepdims=True)
    normas = np.linalg.norm(parches, axis=1)
    validos = normas > NORMA_MINIMA
    return puntos[validos], parches[validos] / normas[validos, None]


def detect_matches(a: np.ndarray, b: np.ndarray, patch_radius: int = 7,
                   max_corners: int = 500, min_score: float = 0.7) -> List[Correspondence]:
    """
    Correspondencias entre dos imágenes RGB.

    Esquinas Harris en cada imagen en gris, parches de radio fijo comparados
    por NCC, filtrado de mejor mutuo y umbral de puntaje.

    Args:
        a: imagen objetivo
        b: imagen de referencia
        patch_radius: radio del parche de correlación
        max_corners: máximo de esquinas por imagen
        min_score: puntaje NCC mínimo aceptado

    Returns:
        Lista ordenada por puntaje descendente
    """
    for nombre, img in (("objetivo", a), ("referencia", b)):
        if img.shape[0] < TAMANO_MINIMO or img.shape[1] < TAMANO_MINIMO:
            raise ImageTooSmallError(
                f"La imagen {nombre} ({img.shape[1]}x{img.shape[0]}) es menor que 32x32"
            )

    ga, gb = to_grayscale(a), to_grayscale(b)
    pa, da = _parches(ga, _esquinas(ga, patch_radius, max_corners), patch_radius)
    pb, db = _parches(gb, _esquinas(gb, patch_radius, max_corners), patch_radius)
    if len(pa) == 0 or len(pb) == 0:
        logger.info("Sin esquinas detectables; no hay correspondencias")
        return []

    ncc = da @ db.T
    mejor_b = np.argmax(ncc, axis=1)
    mejor_a = np.argmax(ncc, axis=0)

    resultado = []
    for i, j in enumerate(mejor_b):
        if mejor_a[j] != i:
            continue
        puntaje = float(np.clip(ncc[i, j], 0.0, 1.0))
        if puntaje < min_score:
            continue
        resultado.append(Correspondence(
            source=(float(pa[i, 1]), float(pa[i, 0])),
            destination=(float(pb[j, 1]), float(pb[j, 0])),
            score=puntaje,
        ))

    resultado.sort(key=lambda c: -c.score)
    logger.debug(f"Esquinas: {len(pa)} / {len(pb)}, correspondencias: {len(resultado)}")
    return resultado
