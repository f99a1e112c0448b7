"""
Resultados del pipeline por método y por par.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np


@dataclass
class ResultadoMetodo:
    """Resultado de un método de costura sobre un par."""
    metodo: str
    seam: Optional[Any] = None  # SeamResult
    imagen: Optional[np.ndarray] = None
    reporte: Optional[Any] = None  # MetricsReport
    error: Optional[Dict[str, Any]] = None

    @property
    def exitoso(self) -> bool:
        return self.error is None and self.reporte is not None


@dataclass
class ResultadoPar:
    """Resultado de todos los métodos sobre un par."""
    nombre: str
    metodos: Dict[str, ResultadoMetodo] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @property
    def exitoso(self) -> bool:
        return self.error is None and any(r.exitoso for r in self.metodos.values())

    def reportes(self) -> List[Any]:
        """Reportes de los métodos exitosos, en el orden solicitado."""
        return [r.reporte for r in self.metodos.values() if r.exitoso]

    def errores(self) -> List[Dict[str, Any]]:
        lista = [self.error] if self.error else []
        lista.extend(r.error for r in self.metodos.values() if r.error)
        return lista

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nombre": self.nombre,
            "error": self.error,
            "metodos": {
                m: {"reporte": r.reporte.to_dict() if r.reporte else None, "error": r.error}
                for m, r in self.metodos.items()
            },
        }
