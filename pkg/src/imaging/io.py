"""
Lectura y escritura de imágenes (PNG) y máscaras (PGM/PNG) con Pillow.
"""
import os
import logging
from typing import Optional, Tuple

import numpy as np
from PIL import Image as PILImage

from src.errores.excepciones import (
    DimensionMismatchError, InvalidImageError, MaskNotFoundError, MultiChannelMaskError
)
from src.imaging.buffers import as_image

logger = logging.getLogger(__name__)

_MODOS_UN_CANAL = {"1", "L", "I", "I;16", "I;16B", "I;16L", "F"}


def _a_unitario(arr: np.ndarray, modo: str) -> np.ndarray:
    """Escala un arreglo de enteros al rango [0, 1] según la profundidad de bits."""
    if modo.startswith("I;16") or (modo == "I" and arr.max(initial=0) > 255):
        return arr.astype(np.float64) / 65535.0
    if modo == "F":
        return np.clip(arr.astype(np.float64), 0.0, 1.0)
    if modo == "1":
        return arr.astype(np.float64)
    return arr.astype(np.float64) / 255.0


def read_image(path: str) -> np.ndarray:
    """
    Lee una imagen RGB a float64 en [0, 1].

    Las imágenes de un canal se replican a tres canales; 16 bits se escalan por 65535.
    """
    if not os.path.exists(path):
        raise InvalidImageError(f"No existe la imagen: {path}")
    try:
        with PILImage.open(path) as im:
            modo = im.mode
            if modo in _MODOS_UN_CANAL:
                gris = _a_unitario(np.array(im), modo)
                data = np.repeat(gris[:, :, None], 3, axis=2)
            else:
                data = np.array(im.convert("RGB"), dtype=np.float64) / 255.0
    except (OSError, ValueError) as e:
        raise InvalidImageError(f"No se pudo leer {path}: {e}")
    return as_image(data)


def write_image(path: str, img: np.ndarray) -> None:
    """Escribe una imagen en [0, 1] como PNG RGB de 8 bits."""
    data = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    u8 = np.round(data * 255.0).astype(np.uint8)
    _asegurar_directorio(path)
    PILImage.fromarray(u8, mode="RGB").save(path)


def read_gray_u8(path: str) -> np.ndarray:
    """
    Lee un archivo de un canal como enteros de 8 bits.

    Raises:
        MaskNotFoundError: si el archivo no existe
        MultiChannelMaskError: si el archivo tiene más de un canal
    """
    if not os.path.exists(path):
        raise MaskNotFoundError(f"No existe la máscara: {path}")
    try:
        with PILImage.open(path) as im:
            modo = im.mode
            if modo not in _MODOS_UN_CANAL:
                raise MultiChannelMaskError(f"La máscara {path} tiene modo {modo}; se espera un canal")
            arr = np.array(im)
    except (OSError, ValueError) as e:
        raise InvalidImageError(f"No se pudo leer {path}: {e}")
    return np.round(_a_unitario(arr, modo) * 255.0).astype(np.int32)


def read_mask(path: str, expected_shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """
    Lee una máscara binaria: valores >= 128 son 1.

    Args:
        path: archivo PGM o PNG de un canal
        expected_shape: (alto, ancho) del lienzo, si se debe verificar

    Returns:
        np.ndarray bool
    """
    valores = read_gray_u8(path)
    if expected_shape is not None and tuple(valores.shape) != tuple(expected_shape):
        raise DimensionMismatchError(
            f"Máscara {path} de {valores.shape[0]}x{valores.shape[1]} no coincide "
            f"con el lienzo {expected_shape[0]}x{expected_shape[1]}"
        )
    return valores >= 128


def write_mask(path: str, mask: np.ndarray) -> None:
    """Escribe una máscara binaria como PGM (o PNG según extensión), 0/255."""
    u8 = np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
    write_gray_u8(path, u8)


def write_gray_u8(path: str, valores: np.ndarray) -> None:
    """Escribe un arreglo uint8 de un canal; la extensión .pgm produce PGM binario."""
    _asegurar_directorio(path)
    PILImage.fromarray(np.asarray(valores, dtype=np.uint8), mode="L").save(path)


def write_soft(path: str, mask: np.ndarray) -> None:
    """Escribe una máscara suave en [0, 1] como gris de 8 bits."""
    u8 = np.round(np.clip(mask, 0.0, 1.0) * 255.0).astype(np.uint8)
    write_gray_u8(path, u8)


def _asegurar_directorio(path: str) -> None:
    directorio = os.path.dirname(path)
    if directorio:
        os.makedirs(directorio, exist_ok=True)
