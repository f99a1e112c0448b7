"""
Mapas de etiquetas, resultado de costura y utilidades comunes de frontera.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.errores.excepciones import InvalidImageError
from src.imaging.costs import CostMap
from src.imaging.io import read_gray_u8, write_gray_u8


class Label(IntEnum):
    """Etiqueta de origen de cada píxel del lienzo."""
    REFERENCE = 0
    TARGET = 1
    INVALID = 2


# Niveles de gris al exportar a PGM
NIVEL_PGM = {Label.TARGET: 255, Label.REFERENCE: 0, Label.INVALID: 128}

# Orden fijo de vecinos para recorrer la frontera: S, SE, SW, E, W, N, NE, NW
_VECINOS_RECORRIDO = ((1, 0), (1, 1), (1, -1), (0, 1), (0, -1), (-1, 0), (-1, 1), (-1, -1))


@dataclass
class SeamResult:
    """Salida de cualquier buscador de costura."""
    labels: np.ndarray
    soft_l1: np.ndarray
    soft_l2: np.ndarray
    seam_pixels: List[Tuple[int, int]] = field(default_factory=list)
    energy: float = 0.0
    trace: List[Dict[str, Any]] = field(default_factory=list)
    method: str = ""
    path: List[Tuple[int, int]] = field(default_factory=list)
    info: Dict[str, Any] = field(default_factory=dict)

    @property
    def seam_length(self) -> int:
        return len(self.seam_pixels)

    def partition_error(self, valid_union: np.ndarray) -> float:
        """Máximo |L1 + L2 - 1| sobre los píxeles válidos."""
        if not np.any(valid_union):
            return 0.0
        return float(np.max(np.abs(self.soft_l1 + self.soft_l2 - 1.0)[valid_union]))

    def transpose(self) -> 'SeamResult':
        return SeamResult(
            labels=self.labels.T.copy(),
            soft_l1=self.soft_l1.T.copy(),
            soft_l2=self.soft_l2.T.copy(),
            seam_pixels=[(j, i) for i, j in self.seam_pixels],
            energy=self.energy,
            trace=self.trace,
            method=self.method,
            path=[(j, i) for i, j in self.path],
            info=self.info,
        )


def build_label_map(valid_t: np.ndarray, valid_r: np.ndarray, target_side: np.ndarray) -> np.ndarray:
    """
    Mapa completo: exclusivas con su propia etiqueta, solapamiento según
    `target_side` (True = TARGET), el resto INVALID.
    """
    labels = np.full(valid_t.shape, Label.INVALID, dtype=np.int8)
    overlap = valid_t & valid_r
    labels[valid_t & ~valid_r] = Label.TARGET
    labels[valid_r & ~valid_t] = Label.REFERENCE
    labels[overlap & target_side] = Label.TARGET
    labels[overlap & ~target_side] = Label.REFERENCE
    return labels


def indicator_masks(labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Máscaras suaves 0/1 de un mapa de etiquetas."""
    return (labels == Label.TARGET).astype(np.float64), (labels == Label.REFERENCE).astype(np.float64)


def boundary_mask(labels: np.ndarray, overlap: np.ndarray) -> np.ndarray:
    """Píxeles del solapamiento con un vecino 4-conexo de la etiqueta opuesta."""
    es_t = labels == Label.TARGET
    es_r = labels == Label.REFERENCE
    frontera = np.zeros(labels.shape, dtype=bool)

    # horizontal
    par = (es_t[:, :-1] & es_r[:, 1:]) | (es_r[:, :-1] & es_t[:, 1:])
    frontera[:, :-1] |= par
    frontera[:, 1:] |= par
    # vertical
    par = (es_t[:-1, :] & es_r[1:, :]) | (es_r[:-1, :] & es_t[1:, :])
    frontera[:-1, :] |= par
    frontera[1:, :] |= par
    return frontera & overlap


def order_boundary(frontera: np.ndarray) -> List[Tuple[int, int]]:
    """
    Ordena los píxeles de frontera con un recorrido voraz 8-conexo.

    Se parte del primer píxel en orden de barrido; en cada paso se toma el
    primer vecino no visitado según el orden fijo de vecinos y, si no hay,
    se salta al siguiente no visitado en orden de barrido.
    """
    restantes = set(map(tuple, np.argwhere(frontera).tolist()))
    barrido = sorted(restantes)
    orden: List[Tuple[int, int]] = []
    cursor = 0
    actual: Optional[Tuple[int, int]] = None
    while restantes:
        siguiente = None
        if actual is not None:
            for di, dj in _VECINOS_RECORRIDO:
                candidato = (actual[0] + di, actual[1] + dj)
                if candidato in restantes:
                    siguiente = candidato
                    break
        if siguiente is None:
            while barrido[cursor] not in restantes:
                cursor += 1
            siguiente = barrido[cursor]
        restantes.discard(siguiente)
        orden.append((int(siguiente[0]), int(siguiente[1])))
        actual = siguiente
    return orden


def seam_pixels(labels: np.ndarray, overlap: np.ndarray) -> List[Tuple[int, int]]:
    return order_boundary(boundary_mask(labels, overlap))


def seam_energy(cost: CostMap, labels: np.ndarray) -> float:
    """
    Suma de (c_p + c_q) / 2 sobre pares 4-vecinos del dominio del costo con
    etiquetas TARGET/REFERENCE opuestas.
    """
    c = cost.data
    dom = cost.domain
    es_t = labels == Label.TARGET
    es_r = labels == Label.REFERENCE
    total = 0.0

    corte = ((es_t[:, :-1] & es_r[:, 1:]) | (es_r[:, :-1] & es_t[:, 1:])) & dom[:, :-1] & dom[:, 1:]
    total += float(np.sum((c[:, :-1] + c[:, 1:])[corte])) / 2.0
    corte = ((es_t[:-1, :] & es_r[1:, :]) | (es_r[:-1, :] & es_t[1:, :])) & dom[:-1, :] & dom[1:, :]
    total += float(np.sum((c[:-1, :] + c[1:, :])[corte])) / 2.0
    return total


def write_labels(path: str, labels: np.ndarray) -> None:
    """Exporta el mapa a PGM: TARGET=255, REFERENCE=0, INVALID=128."""
    u8 = np.full(labels.shape, NIVEL_PGM[Label.INVALID], dtype=np.uint8)
    u8[labels == Label.TARGET] = NIVEL_PGM[Label.TARGET]
    u8[labels == Label.REFERENCE] = NIVEL_PGM[Label.REFERENCE]
    write_gray_u8(path, u8)


def read_labels(path: str) -> np.ndarray:
    """Importa un mapa exportado por write_labels."""
    valores = read_gray_u8(path)
    labels = np.full(valores.shape, Label.INVALID, dtype=np.int8)
    labels[valores == NIVEL_PGM[Label.TARGET]] = Label.TARGET
    labels[valores == NIVEL_PGM[Label.REFERENCE]] = Label.REFERENCE
    conocidos = np.isin(valores, list(NIVEL_PGM.values()))
    if not conocidos.all():
        raise InvalidImageError(f"El mapa de etiquetas {path} contiene niveles desconocidos")
    return labels
