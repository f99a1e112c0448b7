"""
Métodos de costura con objeto registrados en el despachador.
"""
from typing import Optional

import numpy as np

from src.modelos.configuracion_optimizacion import OptimConfig
from src.object_aware.optimizer import OptimizadorMascaras
from src.seams.base import SeamFinder, registrar
from src.seams.labels import SeamResult


@registrar
class ObjectAwareSeamFinder(SeamFinder):
    """Optimización con la configuración recibida."""

    nombre = "object-aware"

    def ajustar(self, cfg: OptimConfig) -> OptimConfig:
        return cfg

    def buscar(self, pair, cost, O: Optional[np.ndarray], cfg: Optional[OptimConfig]) -> SeamResult:
        cfg = self.ajustar(cfg or OptimConfig.desde_config())
        if O is None:
            O = np.zeros(pair.shape, dtype=bool)
        return OptimizadorMascaras(cfg).optimizar(pair, O, cost)


@registrar
class StaticSelectionSeamFinder(ObjectAwareSeamFinder):
    """Variante sin selección dinámica: siempre k = 1."""

    nombre = "object-aware-static"

    def ajustar(self, cfg: OptimConfig) -> OptimConfig:
        return cfg.clonar(selection="static")


@registrar
class NoExclusivitySeamFinder(ObjectAwareSeamFinder):
    """Variante sin término de exclusividad."""

    nombre = "object-aware-noexcl"

    def ajustar(self, cfg: OptimConfig) -> OptimConfig:
        return cfg.clonar(w_excl=0.0)
