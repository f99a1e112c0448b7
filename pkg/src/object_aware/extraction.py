"""
Paso de máscaras suaves a etiquetas duras y costura.
"""
from typing import List, Tuple

import numpy as np

from src.imaging.buffers import check_same_shape
from src.seams.labels import build_label_map, seam_pixels

UMBRAL = 0.5


def partition_masks(l1: np.ndarray, pair) -> Tuple[np.ndarray, np.ndarray]:
    """
    Máscaras suaves finales con partición exacta.

    Exclusiva del objetivo 1/0, exclusiva de la referencia 0/1, solapamiento
    L1 / 1 - L1, inválidos 0/0.
    """
    check_same_shape(l1, pair.overlap, contexto="partition_masks")
    soft_l1 = np.where(pair.overlap, l1, 0.0)
    soft_l1[pair.exclusive_t] = 1.0
    soft_l2 = np.where(pair.valid_union, 1.0 - soft_l1, 0.0)
    return soft_l1, soft_l2


def extract_seam(L1: np.ndarray, pair) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """
    Etiquetas y costura desde la máscara suave del objetivo.

    L1 se multiplica por valid_t; en el solapamiento L1 >= 0.5 es TARGET y las
    regiones exclusivas conservan su propia etiqueta.
    """
    L1 = np.asarray(L1, dtype=np.float64)
    check_same_shape(L1, pair.overlap, contexto="extract_seam")
    lado_objetivo = (L1 * pair.valid_t) >= UMBRAL
    labels = build_label_map(pair.valid_t, pair.valid_r, lado_objetivo)
    return labels, seam_pixels(labels, pair.overlap)
