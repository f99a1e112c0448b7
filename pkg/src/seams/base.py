"""
Buscador de costura base y registro de métodos.
Responsabilidad única: despachar un nombre de método a su implementación.
"""
import time
import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Type

import numpy as np

from src.errores.excepciones import ConfigurationError
from src.imaging.costs import CostMap
from src.modelos.configuracion_optimizacion import OptimConfig
from src.seams.labels import SeamResult

_REGISTRO: Dict[str, Type['SeamFinder']] = {}


def registrar(cls: Type['SeamFinder']) -> Type['SeamFinder']:
    """Decorador que registra un buscador bajo su `nombre`."""
    _REGISTRO[cls.nombre] = cls
    return cls


class SeamFinder(ABC):
    """Clase base abstracta para todos los buscadores de costura."""

    nombre: str = ""

    def __init__(self):
        self.logger = logging.getLogger(f"{__name__}.{self.nombre}")

    @abstractmethod
    def buscar(self, pair, cost: CostMap, O: Optional[np.ndarray],
               cfg: Optional[OptimConfig]) -> SeamResult:
        """
        Calcula la costura del par.

        Args:
            pair: AlignedPair en coordenadas del lienzo
            cost: mapa de costo fotométrico sobre el solapamiento
            O: máscara de objeto protegida (solo la usan los métodos con objeto)
            cfg: configuración de optimización

        Returns:
            SeamResult: etiquetas, máscaras suaves y costura
        """

    def ejecutar(self, pair, cost: CostMap, O: Optional[np.ndarray] = None,
                 cfg: Optional[OptimConfig] = None) -> SeamResult:
        """Ejecuta `buscar` midiendo el tiempo y marcando el método."""
        inicio = time.perf_counter()
        resultado = self.buscar(pair, cost, O, cfg)
        resultado.method = self.nombre
        resultado.info.setdefault("time_ms", (time.perf_counter() - inicio) * 1000.0)
        self.logger.debug(
            f"Costura '{self.nombre}' con {resultado.seam_length} píxeles, energía {resultado.energy:.6g}"
        )
        return resultado


def _cargar_metodos() -> None:
    # los módulos se registran al importarse
    import src.seams.dp  # noqa: F401
    import src.seams.graphcut  # noqa: F401
    import src.seams.voronoi  # noqa: F401
    import src.object_aware.finders  # noqa: F401


def available_methods() -> List[str]:
    _cargar_metodos()
    return sorted(_REGISTRO)


def crear_buscador(method: str) -> SeamFinder:
    _cargar_metodos()
    if method not in _REGISTRO:
        raise ConfigurationError(
            f"Método de costura desconocido: {method}. Disponibles: {', '.join(sorted(_REGISTRO))}"
        )
    return _REGISTRO[method]()


def find_seam(method: str, pair, cost: CostMap, O: Optional[np.ndarray] = None,
              cfg: Optional[OptimConfig] = None) -> SeamResult:
    """Ejecuta el método de costura indicado por nombre."""
    return crear_buscador(method).ejecutar(pair, cost, O, cfg)
