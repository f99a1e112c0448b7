"""
Integridad de objetos: componentes salientes partidos por la costura.
"""
from typing import Tuple

import numpy as np
from scipy import ndimage

from src.imaging.buffers import as_binary, check_same_shape
from src.seams.labels import Label

TAMANO_MINIMO_COMPONENTE = 9
_OCHO_CONEXO = np.ones((3, 3), dtype=bool)


def object_integrity(O: np.ndarray, labels: np.ndarray,
                     min_size: int = TAMANO_MINIMO_COMPONENTE) -> Tuple[bool, int, int]:
    """
    Cuenta componentes de O (8-conexos, >= min_size píxeles) con píxeles de
    ambas etiquetas.

    Returns:
        (fallo, componentes partidos, píxeles de la etiqueta minoritaria)
    """
    O = as_binary(O)
    check_same_shape(O, labels, contexto="object_integrity")
    componentes, total = ndimage.label(O, structure=_OCHO_CONEXO)
    if total == 0:
        return False, 0, 0

    indices = np.arange(1, total + 1)
    tamanos = ndimage.sum_labels(np.ones(O.shape), componentes, indices)
    n_t = ndimage.sum_labels((labels == Label.TARGET).astype(np.float64), componentes, indices)
    n_r = ndimage.sum_labels((labels == Label.REFERENCE).astype(np.float64), componentes, indices)

    grandes = tamanos >= min_size
    partidos = grandes & (n_t > 0) & (n_r > 0)
    split_components = int(partidos.sum())
    split_pixels = int(np.minimum(n_t, n_r)[partidos].sum())
    return split_components >= 1, split_components, split_pixels
