"""
Reporte de métricas por par y método.
"""
import math
from dataclasses import dataclass, asdict, fields
from typing import Any, Dict, Optional

import numpy as np

from src.errores.excepciones import InvalidReportError
from src.imaging.costs import CostMap
from src.metrics.integrity import object_integrity
from src.metrics.quality import psq, seam_energy
from src.seams.labels import SeamResult

CAMPOS_CSV = ["pair", "method", "psq", "failure", "split_components", "split_pixels",
              "seam_energy", "seam_length", "time_ms"]


@dataclass
class MetricsReport:
    """Calidad de costura, integridad de objetos y energía de un resultado."""
    psq: float
    failure: bool
    split_components: int
    split_pixels: int
    seam_energy: float
    seam_length: int
    method: str
    time_ms: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.psq <= 1.0) or math.isnan(self.psq):
            raise InvalidReportError(f"psq fuera de [0, 1]: {self.psq}")
        if self.split_components < 0 or self.split_pixels < 0 or self.seam_length < 0:
            raise InvalidReportError("Los conteos no pueden ser negativos")
        if self.seam_energy < 0:
            raise InvalidReportError("La energía de costura no puede ser negativa")
        if bool(self.failure) != (self.split_components >= 1):
            raise InvalidReportError("failure debe equivaler a split_components >= 1")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def fila_csv(self, pair: str) -> Dict[str, Any]:
        datos = self.to_dict()
        datos["pair"] = pair
        return {campo: datos[campo] for campo in CAMPOS_CSV}

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'MetricsReport':
        """Crea el reporte desde un diccionario (JSON o fila CSV con texto)."""
        nombres = {f.name for f in fields(cls)}
        datos = {k: v for k, v in data.items() if k in nombres}
        falla = datos.get("failure")
        if isinstance(falla, str):
            datos["failure"] = falla.strip().lower() in ("true", "1")
        for campo in ("psq", "seam_energy", "time_ms"):
            if campo in datos:
                datos[campo] = float(datos[campo])
        for campo in ("split_components", "split_pixels", "seam_length"):
            if campo in datos:
                datos[campo] = int(datos[campo])
        return cls(**datos)

    def sin_tiempo(self) -> Dict[str, Any]:
        """Campos deterministas (todo salvo el tiempo)."""
        datos = self.to_dict()
        datos.pop("time_ms")
        return datos


def score(pair, result: SeamResult, O: np.ndarray, cost: CostMap,
          saliency: np.ndarray, patch_radius: int = 3,
          time_ms: Optional[float] = None) -> MetricsReport:
    """Evalúa un resultado de costura."""
    falla, partidos, pixeles = object_integrity(O, result.labels)
    return MetricsReport(
        psq=psq(pair, result.labels, saliency, patch_radius),
        failure=falla,
        split_components=partidos,
        split_pixels=pixeles,
        seam_energy=seam_energy(cost, result.labels),
        seam_length=result.seam_length,
        method=result.method,
        time_ms=float(time_ms if time_ms is not None else result.info.get("time_ms", 0.0)),
    )
