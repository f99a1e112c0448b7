"""
Red de flujo genérica y corte mínimo con PyMaxflow.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

import maxflow

from src.errores.excepciones import MalformedNetworkError

logger = logging.getLogger(__name__)


@dataclass
class FlowNetwork:
    """Red dirigida con fuente y sumidero distinguidos; aristas (u, v, capacidad)."""
    num_nodes: int
    source: int
    sink: int
    edges: List[Tuple[int, int, float]] = field(default_factory=list)

    def add_edge(self, u: int, v: int, capacity: float) -> None:
        self.edges.append((int(u), int(v), float(capacity)))

    def validar(self) -> None:
        """
        Raises:
            MalformedNetworkError: índices fuera de rango, fuente igual al
                sumidero, capacidad negativa o NaN, o capacidad infinita en una
                arista no terminal
        """
        if self.num_nodes < 2:
            raise MalformedNetworkError("La red necesita al menos fuente y sumidero")
        for nombre, nodo in (("fuente", self.source), ("sumidero", self.sink)):
            if not 0 <= nodo < self.num_nodes:
                raise MalformedNetworkError(f"Índice de {nombre} fuera de rango: {nodo}")
        if self.source == self.sink:
            raise MalformedNetworkError("La fuente y el sumidero deben ser distintos")
        for u, v, cap in self.edges:
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise MalformedNetworkError(f"Arista ({u}, {v}) fuera de rango")
            if math.isnan(cap) or cap < 0:
                raise MalformedNetworkError(f"Capacidad inválida en ({u}, {v}): {cap}")
            if math.isinf(cap) and u != self.source and v != self.sink:
                raise MalformedNetworkError(f"Capacidad infinita en arista no terminal ({u}, {v})")


def max_flow_min_cut(net: FlowNetwork) -> Tuple[float, FrozenSet[int]]:
    """
    Flujo máximo y corte mínimo.

    Las aristas que entran a la fuente o salen del sumidero no pueden
    transportar flujo y se ignoran. Los nodos que no alcanzan ninguna terminal
    quedan del lado de la fuente.

    Returns:
        (valor del flujo, conjunto de nodos del lado de la fuente)
    """
    net.validar()
    s, t = net.source, net.sink
    internos = [n for n in range(net.num_nodes) if n not in (s, t)]
    ids = {n: i for i, n in enumerate(internos)}

    finitas = sum(cap for _, _, cap in net.edges if math.isfinite(cap))
    grande = 1.0 + 2.0 * finitas

    def capacidad(cap: float) -> float:
        return grande if math.isinf(cap) else cap

    directo = 0.0
    g = maxflow.Graph[float]()
    if internos:
        g.add_nodes(len(internos))
    for u, v, cap in net.edges:
        if u == v or v == s or u == t:
            continue
        if u == s and v == t:
            directo += capacidad(cap)
        elif u == s:
            g.add_tedge(ids[v], capacidad(cap), 0.0)
        elif v == t:
            g.add_tedge(ids[u], 0.0, capacidad(cap))
        else:
            g.add_edge(ids[u], ids[v], cap, 0.0)

    flujo = directo + (float(g.maxflow()) if internos else 0.0)
    lado_fuente = {s}
    for n in internos:
        if g.get_segment(ids[n]) == 0:
            lado_fuente.add(n)

    if flujo >= grande:
        flujo = math.inf
    logger.debug(f"Flujo máximo {flujo} con {len(lado_fuente)} nodos del lado de la fuente")
    return flujo, frozenset(lado_fuente)
