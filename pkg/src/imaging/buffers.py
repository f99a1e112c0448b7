"""
Buffers de píxeles y operaciones elementales sobre imágenes y máscaras.

Convenciones:
    Image     -> ndarray float64 (alto, ancho, 3) con valores en [0, 1]
    GrayImage -> ndarray float64 (alto, ancho) con valores en [0, 1]
    BinaryMask-> ndarray bool (alto, ancho)
    SoftMask  -> ndarray float64 (alto, ancho) con valores en [0, 1]
"""
from typing import Tuple

import numpy as np

from src.errores.excepciones import DimensionMismatchError, InvalidImageError

LUMA = np.array([0.299, 0.587, 0.114])


def as_image(data: np.ndarray) -> np.ndarray:
    """
    Valida y normaliza un buffer RGB a float64.

    Args:
        data: arreglo (alto, ancho, 3) con intensidades en [0, 1]

    Returns:
        np.ndarray: copia float64 contigua
    """
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise InvalidImageError(f"Se esperaba una imagen (alto, ancho, 3), se recibió {img.shape}")
    if img.shape[0] == 0 or img.shape[1] == 0:
        raise InvalidImageError("La imagen no tiene píxeles")
    if not np.all(np.isfinite(img)):
        raise InvalidImageError("La imagen contiene valores no finitos")
    if img.min() < 0.0 or img.max() > 1.0:
        raise InvalidImageError("Las intensidades deben estar en [0, 1]")
    return np.ascontiguousarray(img)


def as_binary(mask: np.ndarray) -> np.ndarray:
    """Convierte una máscara a bool; valores distintos de 0/1 son inválidos."""
    arr = np.asarray(mask)
    if arr.dtype == bool:
        return arr
    if not np.all((arr == 0) | (arr == 1)):
        raise InvalidImageError("Una máscara binaria solo admite valores 0 y 1")
    return arr.astype(bool)


def as_soft(mask: np.ndarray) -> np.ndarray:
    """Convierte una máscara a float64 verificando el rango [0, 1]."""
    arr = np.asarray(mask, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidImageError(f"Una máscara debe ser 2D, se recibió {arr.shape}")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise InvalidImageError("Los pesos de una máscara suave deben estar en [0, 1]")
    return arr


def check_same_shape(*arrays: np.ndarray, contexto: str = "") -> Tuple[int, int]:
    """
    Verifica que todos los arreglos compartan alto y ancho.

    Returns:
        (alto, ancho) común
    """
    formas = {tuple(np.shape(a)[:2]) for a in arrays}
    if len(formas) != 1:
        prefijo = f"{contexto}: " if contexto else ""
        raise DimensionMismatchError(f"{prefijo}dimensiones incompatibles {sorted(formas)}")
    return formas.pop()


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """Luma 0.299 R + 0.587 G + 0.114 B."""
    gray = np.asarray(img, dtype=np.float64) @ LUMA
    return np.clip(gray, 0.0, 1.0)


def mask_area(m: np.ndarray) -> float:
    """Suma de los pesos de la máscara."""
    return float(np.sum(np.asarray(m, dtype=np.float64)))


def mask_intersect(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Producto elemento a elemento de dos máscaras."""
    check_same_shape(a, b, contexto="mask_intersect")
    return np.asarray(a, dtype=np.float64) * np.asarray(b, dtype=np.float64)


def bounding_box(mask: np.ndarray) -> Tuple[int, int, int, int]:
    """
    Caja envolvente de los píxeles activos.

    Returns:
        (fila_min, fila_max, col_min, col_max), inclusivos; (0, -1, 0, -1) si está vacía
    """
    filas = np.flatnonzero(np.any(mask, axis=1))
    cols = np.flatnonzero(np.any(mask, axis=0))
    if filas.size == 0:
        return 0, -1, 0, -1
    return int(filas[0]), int(filas[-1]), int(cols[0]), int(cols[-1])
