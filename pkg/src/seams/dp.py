"""
Costura por programación dinámica: camino monótono de arriba hacia abajo.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from src.errores.excepciones import EmptyOverlapError, NonTraversableOverlapError
from src.imaging.buffers import bounding_box
from src.imaging.costs import CostMap
from src.seams.base import SeamFinder, registrar
from src.seams.labels import SeamResult, build_label_map, indicator_masks, seam_pixels

logger = logging.getLogger(__name__)


def _centroide_columna(mask: np.ndarray) -> Optional[float]:
    cols = np.nonzero(mask)[1]
    return float(cols.mean()) if cols.size else None


def _izquierda_es_objetivo(pair, path_cols: np.ndarray) -> bool:
    """El lado de la región exclusiva del objetivo define qué lado es TARGET."""
    ct = _centroide_columna(pair.exclusive_t)
    cr = _centroide_columna(pair.exclusive_r)
    if ct is not None and cr is not None:
        return ct <= cr
    costura = float(path_cols.mean())
    if ct is not None:
        return ct <= costura
    if cr is not None:
        return cr > costura
    return True


def minimal_vertical_path(cost: np.ndarray, overlap: np.ndarray) -> Tuple[int, List[int], float]:
    """
    Camino de costo mínimo con movimientos abajo-izquierda, abajo y abajo-derecha.

    Los empates se resuelven hacia la izquierda, tanto en el paso como en la
    columna final.

    Returns:
        (fila inicial, columna por fila, costo total)
    """
    if not np.any(overlap):
        raise EmptyOverlapError("El solapamiento está vacío")
    r0, r1, _, _ = bounding_box(overlap)
    filas_vacias = [r for r in range(r0, r1 + 1) if not overlap[r].any()]
    if filas_vacias:
        raise NonTraversableOverlapError(
            f"El solapamiento no es atravesable: la fila {filas_vacias[0]} no tiene píxeles"
        )

    C = np.where(overlap, cost, np.inf)[r0:r1 + 1]
    alto, ancho = C.shape
    M = np.empty_like(C)
    atras = np.zeros((alto, ancho), dtype=np.int64)
    M[0] = C[0]
    desplazamientos = np.array([-1, 0, 1])
    columnas = np.arange(ancho)
    for r in range(1, alto):
        previo = M[r - 1]
        izquierda = np.concatenate([[np.inf], previo[:-1]])
        derecha = np.concatenate([previo[1:], [np.inf]])
        candidatos = np.vstack([izquierda, previo, derecha])
        eleccion = np.argmin(candidatos, axis=0)
        M[r] = C[r] + candidatos[eleccion, columnas]
        atras[r] = columnas + desplazamientos[eleccion]
        if not np.isfinite(M[r]).any():
            raise NonTraversableOverlapError(
                f"El solapamiento no es atravesable: sin camino 8-conexo hasta la fila {r0 + r}"
            )

    j = int(np.argmin(M[-1]))
    total = float(M[-1, j])
    camino = [j]
    for r in range(alto - 1, 0, -1):
        j = int(atras[r, j])
        camino.append(j)
    camino.reverse()
    return r0, camino, total


def dp_seam(cost: CostMap, pair) -> SeamResult:
    """
    Costura vertical por programación dinámica sobre el solapamiento.

    Los píxeles del solapamiento con columna <= la del camino quedan del lado
    izquierdo; el lado de la región exclusiva del objetivo decide si el lado
    izquierdo es TARGET.
    """
    overlap = pair.overlap
    r0, cols, energia = minimal_vertical_path(cost.data, overlap)

    izquierda = np.zeros(overlap.shape, dtype=bool)
    indices = np.arange(overlap.shape[1])
    for k, c in enumerate(cols):
        izquierda[r0 + k] = indices <= c

    lado_objetivo = izquierda if _izquierda_es_objetivo(pair, np.asarray(cols)) else ~izquierda
    labels = build_label_map(pair.valid_t, pair.valid_r, lado_objetivo)
    l1, l2 = indicator_masks(labels)
    return SeamResult(
        labels=labels,
        soft_l1=l1,
        soft_l2=l2,
        seam_pixels=seam_pixels(labels, overlap),
        energy=energia,
        method="dp",
        path=[(r0 + k, int(c)) for k, c in enumerate(cols)],
    )


def overlap_is_wide(pair) -> bool:
    """True si la caja del solapamiento es más ancha que alta."""
    r0, r1, c0, c1 = bounding_box(pair.overlap)
    return (c1 - c0) > (r1 - r0)


@registrar
class DPSeamFinder(SeamFinder):
    """Programación dinámica; transpone el par si el solapamiento es más ancho que alto."""

    nombre = "dp"

    def buscar(self, pair, cost, O, cfg) -> SeamResult:
        if np.any(pair.overlap) and overlap_is_wide(pair):
            self.logger.debug("Solapamiento horizontal: se transpone el par")
            return dp_seam(cost.transpose(), pair.transpose()).transpose()
        return dp_seam(cost, pair)
