"""
Costura por corte mínimo sobre la grilla 4-conexa del solapamiento.
"""
import logging

import maxflow
import numpy as np
from scipy import ndimage

from src.errores.excepciones import EmptyOverlapError, SeamEndpointsError
from src.imaging.costs import CostMap
from src.seams.base import SeamFinder, registrar
from src.seams.labels import SeamResult, build_label_map, indicator_masks, seam_pixels

logger = logging.getLogger(__name__)

_CRUZ = ndimage.generate_binary_structure(2, 1)
_DERECHA = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
_ABAJO = np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]])


def terminal_masks(pair):
    """
    Píxeles del solapamiento atados a la fuente (vecinos de la región
    exclusiva del objetivo) y al sumidero (vecinos de la exclusiva de la
    referencia). La fuente tiene prioridad.
    """
    overlap = pair.overlap
    fuente = ndimage.binary_dilation(pair.exclusive_t, structure=_CRUZ) & overlap
    sumidero = ndimage.binary_dilation(pair.exclusive_r, structure=_CRUZ) & overlap & ~fuente
    return fuente, sumidero


def graphcut_seam(cost: CostMap, pair) -> SeamResult:
    """
    Corte mínimo con capacidad cost(p) + cost(q) entre vecinos del solapamiento.

    Los píxeles del lado del sumidero son REFERENCE; la energía es el valor del corte.
    """
    overlap = pair.overlap
    if not np.any(overlap):
        raise EmptyOverlapError("El solapamiento está vacío")
    fuente, sumidero = terminal_masks(pair)
    if not fuente.any() or not sumidero.any():
        lado = "objetivo" if not fuente.any() else "referencia"
        raise SeamEndpointsError(
            f"Extremos de costura indefinidos: el solapamiento no toca la región exclusiva de la {lado}"
        )

    c = cost.data
    pesos_h = np.zeros(c.shape)
    pesos_v = np.zeros(c.shape)
    ambos_h = overlap[:, :-1] & overlap[:, 1:]
    ambos_v = overlap[:-1, :] & overlap[1:, :]
    pesos_h[:, :-1] = np.where(ambos_h, c[:, :-1] + c[:, 1:], 0.0)
    pesos_v[:-1, :] = np.where(ambos_v, c[:-1, :] + c[1:, :], 0.0)
    infinito = 1.0 + 2.0 * float(pesos_h.sum() + pesos_v.sum())

    g = maxflow.Graph[float]()
    nodos = g.add_grid_nodes(c.shape)
    g.add_grid_edges(nodos, weights=pesos_h, structure=_DERECHA, symmetric=True)
    g.add_grid_edges(nodos, weights=pesos_v, structure=_ABAJO, symmetric=True)
    g.add_grid_tedges(nodos, np.where(fuente, infinito, 0.0), np.where(sumidero, infinito, 0.0))
    flujo = float(g.maxflow())
    lado_sumidero = g.get_grid_segments(nodos)

    labels = build_label_map(pair.valid_t, pair.valid_r, ~lado_sumidero)
    l1, l2 = indicator_masks(labels)
    return SeamResult(
        labels=labels,
        soft_l1=l1,
        soft_l2=l2,
        seam_pixels=seam_pixels(labels, overlap),
        energy=flujo,
        method="graphcut",
    )


@registrar
class GraphCutSeamFinder(SeamFinder):
    nombre = "graphcut"

    def buscar(self, pair, cost, O, cfg) -> SeamResult:
        return graphcut_seam(cost, pair)
