"""
Máscaras de objeto: binarización, limpieza morfológica y combinación en O.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from src.errores.excepciones import ConfigurationError, InvalidThresholdError
from src.imaging.buffers import as_binary, bounding_box, check_same_shape, to_grayscale
from src.imaging.io import read_mask
from src.modelos.configuracion_ejecucion import OpcionesSaliencia
from src.saliency.spectral import TAMANO_MINIMO, spectral_residual

logger = logging.getLogger(__name__)

_ESTRUCTURA = np.ones((3, 3), dtype=bool)


def binarize(s: np.ndarray, tau: float = 0.5) -> np.ndarray:
    """1 donde s >= tau; tau debe estar en (0, 1)."""
    if not 0.0 < tau < 1.0:
        raise InvalidThresholdError(f"El umbral debe estar en (0, 1), se recibió {tau}")
    return np.asarray(s, dtype=np.float64) >= tau


def cleanup(mask: np.ndarray) -> np.ndarray:
    """Apertura seguida de cierre 3x3, una iteración; el borde se replica."""
    relleno = np.pad(as_binary(mask), 1, mode='edge')
    relleno = ndimage.binary_opening(relleno, structure=_ESTRUCTURA, iterations=1)
    relleno = np.pad(relleno[1:-1, 1:-1], 1, mode='edge')
    relleno = ndimage.binary_closing(relleno, structure=_ESTRUCTURA, iterations=1)
    return relleno[1:-1, 1:-1]


def object_union(m_t: np.ndarray, m_r: np.ndarray) -> np.ndarray:
    check_same_shape(m_t, m_r, contexto="object_union")
    return np.maximum(as_binary(m_t), as_binary(m_r))


def object_intersection(m_t: np.ndarray, m_r: np.ndarray) -> np.ndarray:
    check_same_shape(m_t, m_r, contexto="object_intersection")
    return np.minimum(as_binary(m_t), as_binary(m_r))


def combine_objects(m_t: np.ndarray, m_r: np.ndarray, modo: str = "union") -> np.ndarray:
    """Construye O según el modo configurado ('union' o 'intersection')."""
    if modo == "union":
        return object_union(m_t, m_r)
    if modo == "intersection":
        return object_intersection(m_t, m_r)
    raise ConfigurationError(f"Modo de combinación desconocido: {modo}")


def load_mask(path: str, expected_shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """
    Carga una máscara externa ya en coordenadas del lienzo.

    Raises:
        MaskNotFoundError, DimensionMismatchError, MultiChannelMaskError
    """
    return read_mask(path, expected_shape)


def saliency_map(img: np.ndarray, valid: Optional[np.ndarray] = None,
                 opciones: Optional[OpcionesSaliencia] = None) -> np.ndarray:
    """
    Saliencia espectral de una imagen RGB; cero fuera de la validez.

    El detector trabaja sobre la caja envolvente de la validez, con los
    píxeles inválidos rellenos con la media de los válidos, para que el borde
    de la huella no aparezca como objeto. Una región menor a 16x16 devuelve
    ceros.
    """
    opciones = opciones or OpcionesSaliencia()
    alto, ancho = img.shape[:2]
    gris = to_grayscale(img)
    if valid is None:
        valido = np.ones((alto, ancho), dtype=bool)
    else:
        valido = as_binary(valid)
        check_same_shape(valido, gris, contexto="saliency_map")

    mapa = np.zeros((alto, ancho))
    if not valido.any():
        return mapa
    r0, r1, c0, c1 = bounding_box(valido)
    if r1 - r0 + 1 < TAMANO_MINIMO or c1 - c0 + 1 < TAMANO_MINIMO:
        return mapa

    recorte = gris[r0:r1 + 1, c0:c1 + 1]
    dentro = valido[r0:r1 + 1, c0:c1 + 1]
    recorte = np.where(dentro, recorte, float(recorte[dentro].mean()))
    mapa[r0:r1 + 1, c0:c1 + 1] = spectral_residual(recorte, opciones.work_size, opciones.blur_sigma)
    return mapa * valido


def detect_object_mask(img: np.ndarray, valid: Optional[np.ndarray] = None,
                       opciones: Optional[OpcionesSaliencia] = None) -> np.ndarray:
    """Máscara binaria del objeto saliente de una imagen proyectada."""
    opciones = opciones or OpcionesSaliencia()
    mascara = binarize(saliency_map(img, valid, opciones), opciones.tau)
    if opciones.cleanup:
        mascara = cleanup(mascara)
    if valid is not None:
        mascara &= as_binary(valid)
    logger.debug(f"Máscara de objeto con {int(mascara.sum())} píxeles")
    return mascara
