"""
Costura de Voronoi: cada píxel del solapamiento va a la región exclusiva más cercana.
"""
import logging
from typing import Optional

import numpy as np
from scipy import ndimage

from src.errores.excepciones import EmptyOverlapError, ExclusiveRegionEmptyError
from src.imaging.costs import CostMap
from src.seams.base import SeamFinder, registrar
from src.seams.labels import (
    SeamResult, build_label_map, indicator_masks, seam_energy, seam_pixels
)

logger = logging.getLogger(__name__)


def voronoi_labels(pair) -> np.ndarray:
    """Mapa de etiquetas por distancia euclidiana; empates para TARGET."""
    if not pair.exclusive_t.any() or not pair.exclusive_r.any():
        raise ExclusiveRegionEmptyError(
            "La costura de Voronoi requiere regiones exclusivas no vacías en ambas imágenes"
        )
    dist_t = ndimage.distance_transform_edt(~pair.exclusive_t)
    dist_r = ndimage.distance_transform_edt(~pair.exclusive_r)
    return build_label_map(pair.valid_t, pair.valid_r, dist_t <= dist_r)


def voronoi_seam(pair, cost: Optional[CostMap] = None) -> SeamResult:
    """
    Costura de Voronoi; la energía es la de la frontera si se da un costo, si no 0.
    """
    if not pair.overlap.any():
        raise EmptyOverlapError("El solapamiento está vacío")
    labels = voronoi_labels(pair)
    l1, l2 = indicator_masks(labels)
    return SeamResult(
        labels=labels,
        soft_l1=l1,
        soft_l2=l2,
        seam_pixels=seam_pixels(labels, pair.overlap),
        energy=seam_energy(cost, labels) if cost is not None else 0.0,
        method="voronoi",
    )


@registrar
class VoronoiSeamFinder(SeamFinder):
    nombre = "voronoi"

    def buscar(self, pair, cost, O, cfg) -> SeamResult:
        return voronoi_seam(pair, cost)
