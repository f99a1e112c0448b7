"""
Mapas de costo fotométrico consumidos por los buscadores de costura.
"""
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from src.imaging.buffers import as_binary, check_same_shape, to_grayscale


@dataclass
class CostMap:
    """Costo no negativo por píxel, definido solo dentro de `domain`."""
    data: np.ndarray
    domain: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        self.domain = as_binary(self.domain)
        check_same_shape(self.data, self.domain, contexto="CostMap")
        self.data = np.where(self.domain, np.maximum(self.data, 0.0), 0.0)

    @property
    def shape(self):
        return self.data.shape

    def transpose(self) -> 'CostMap':
        return CostMap(self.data.T.copy(), self.domain.T.copy())

    @classmethod
    def zeros(cls, domain: np.ndarray) -> 'CostMap':
        return cls(np.zeros(np.shape(domain)), domain)


def _gradient_difference(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ga, gb = to_grayscale(a), to_grayscale(b)
    dx = ndimage.sobel(ga, axis=1, mode='nearest') - ndimage.sobel(gb, axis=1, mode='nearest')
    dy = ndimage.sobel(ga, axis=0, mode='nearest') - ndimage.sobel(gb, axis=0, mode='nearest')
    return np.hypot(dx, dy)


def color_difference_map(a: np.ndarray, b: np.ndarray, domain: np.ndarray,
                         gradient: bool = False) -> CostMap:
    """
    Distancia euclidiana RGB entre dos imágenes dentro del dominio.

    Args:
        a, b: imágenes del mismo tamaño
        domain: máscara binaria donde el costo está definido
        gradient: usar la magnitud de la diferencia de gradientes Sobel
            de las versiones en gris en lugar del color

    Returns:
        CostMap con ceros fuera del dominio
    """
    check_same_shape(a, b, domain, contexto="color_difference_map")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if gradient:
        data = _gradient_difference(a, b)
    else:
        data = np.sqrt(np.sum((a - b) ** 2, axis=2))
    return CostMap(data, domain)
