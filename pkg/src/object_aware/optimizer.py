"""
Optimización de la máscara suave por descenso de gradiente con selección
dinámica de máscara por área.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage
from scipy.special import expit

from src.errores.excepciones import (
    DivergenceError, EmptyOverlapError, ExclusiveRegionEmptyError
)
from src.imaging.buffers import as_binary, check_same_shape
from src.imaging.costs import CostMap, color_difference_map
from src.modelos.configuracion_optimizacion import OptimConfig
from src.object_aware.extraction import extract_seam, partition_masks
from src.object_aware.losses import LossBreakdown, MaskLogits, evaluate, pares_suavidad
from src.seams.labels import Label, SeamResult
from src.seams.voronoi import voronoi_labels

CRECIMIENTO_PASO = 1.25
ESCALA_MINIMA = 1e-12


class OptimizadorMascaras:
    """Descenso de gradiente sobre los logits de la máscara del objetivo."""

    def __init__(self, cfg: Optional[OptimConfig] = None):
        self.cfg = (cfg or OptimConfig()).validar()
        self.logger = logging.getLogger(__name__)

    def _log(self, mensaje: str, nivel: str = "info"):
        getattr(self.logger, nivel)(f"[{self.__class__.__name__}] {mensaje}")

    def logits_iniciales(self, pair) -> np.ndarray:
        """Logits del objetivo antes de congelar las regiones fuera del solapamiento."""
        if self.cfg.init == "uniform":
            return np.zeros(pair.shape)
        try:
            labels = voronoi_labels(pair)
        except ExclusiveRegionEmptyError as e:
            self._log(f"[WARN] Inicialización Voronoi no disponible ({e}); se usa uniforme", "warning")
            return np.zeros(pair.shape)
        a = self.cfg.init_logit
        x = np.where(labels == Label.TARGET, a, -a)
        lado = 2 * self.cfg.init_blur_radius + 1
        return ndimage.uniform_filter(x, size=lado, mode='nearest')

    def congelar(self, x: np.ndarray, pair) -> MaskLogits:
        c = self.cfg.c_freeze
        x = np.where(pair.overlap, x, -c)
        x[pair.exclusive_t] = c
        return MaskLogits(x, ~pair.overlap)

    def _intercambiar_roles(self, estado: MaskLogits, O: np.ndarray, valid: np.ndarray) -> bool:
        if self.cfg.roles != "auto":
            return False
        s = expit(estado.data)
        a1 = float(np.sum(O * s))
        a2 = float(np.sum(O * valid * (1.0 - s)))
        return a2 > a1

    def optimizar(self, pair, O: np.ndarray, D: Optional[CostMap] = None) -> SeamResult:
        """
        Optimiza la máscara y devuelve el resultado de costura.

        Args:
            pair: AlignedPair
            O: máscara de objeto en el lienzo
            D: costo fotométrico; por defecto la diferencia de color en el solapamiento

        Raises:
            EmptyOverlapError: solapamiento vacío
            DivergenceError: pérdida no finita, con la época
        """
        cfg = self.cfg
        if not pair.overlap.any():
            raise EmptyOverlapError("El solapamiento está vacío")
        O = as_binary(O).astype(np.float64)
        check_same_shape(O, pair.overlap, contexto="optimize_masks")
        if D is None:
            D = color_difference_map(pair.warped_target, pair.warped_reference, pair.overlap)
        valid = pair.valid_union.astype(np.float64)

        estado = self.congelar(self.logits_iniciales(pair), pair)
        intercambio = self._intercambiar_roles(estado, O, valid)
        if intercambio:
            estado = estado.con_datos(-estado.data)
            self._log("La referencia cubre más el objeto: asume el rol de máscara 1", "debug")

        escala = 1.0 if cfg.raw_sums else float(O.size)
        args = (O, D, pair.overlap.astype(np.float64), cfg, valid, pares_suavidad(O.shape, valid))

        desglose, gradiente = evaluate(estado, *args)
        if not np.isfinite(desglose.total):
            raise DivergenceError(0)
        traza = [self._registro(0, desglose)]
        totales = [desglose.total]

        paso_base = cfg.step
        paso = cfg.step
        convergio = False
        epoca = 0
        for epoca in range(1, cfg.max_epochs + 1):
            estado, desglose, gradiente, aceptado = self._paso(estado, gradiente, desglose,
                                                               paso, escala, args, epoca)
            traza.append(self._registro(epoca, desglose))
            totales.append(desglose.total)
            paso_base *= cfg.step_decay
            paso = min(paso_base, (aceptado or paso / 2 ** cfg.max_halvings) * CRECIMIENTO_PASO)
            if self._convergio(totales):
                convergio = True
                break

        x_objetivo = -estado.data if intercambio else estado.data
        soft_l1, soft_l2 = partition_masks(expit(x_objetivo), pair)
        labels, costura = extract_seam(soft_l1, pair)
        nivel = "info" if convergio else "warning"
        self._log(
            f"{'[OK] Convergió' if convergio else '[WARN] Sin convergencia'} en {epoca} épocas, "
            f"pérdida {desglose.total:.6g} (k={desglose.selected_k})", nivel
        )
        return SeamResult(
            labels=labels,
            soft_l1=soft_l1,
            soft_l2=soft_l2,
            seam_pixels=costura,
            energy=desglose.total,
            trace=traza,
            method="object-aware",
            info={"epochs": epoca, "converged": convergio, "roles_swapped": intercambio},
        )

    def _paso(self, estado: MaskLogits, gradiente: np.ndarray, desglose: LossBreakdown,
              paso: float, escala: float, args,
              epoca: int) -> Tuple[MaskLogits, LossBreakdown, np.ndarray, Optional[float]]:
        """
        Un paso de descenso que nunca sube la pérdida más de increase_tolerance.

        El candidato se compara por su pérdida total, también cuando cambia k.
        Si sube, el paso se reduce a la mitad hasta max_halvings veces; si aun
        así sube, el estado no cambia y el paso aceptado es None.
        """
        cfg = self.cfg
        for _ in range(cfg.max_halvings + 1):
            candidato = estado.con_datos(estado.data - paso * escala * gradiente)
            nuevo_desglose, nuevo_gradiente = evaluate(candidato, *args)
            if not np.isfinite(nuevo_desglose.total) or not np.all(np.isfinite(nuevo_gradiente)):
                raise DivergenceError(epoca)
            if nuevo_desglose.total <= desglose.total + cfg.increase_tolerance:
                return candidato, nuevo_desglose, nuevo_gradiente, paso
            paso /= 2.0
        return estado, desglose, gradiente, None

    def _convergio(self, totales: List[float]) -> bool:
        """Caída media por época en la ventana bajo la tolerancia relativa a |E|."""
        ventana = self.cfg.window
        if len(totales) <= ventana:
            return False
        caida = (totales[-ventana - 1] - totales[-1]) / ventana
        return caida <= self.cfg.tolerance * max(abs(totales[-1]), ESCALA_MINIMA)

    @staticmethod
    def _registro(epoca: int, desglose: LossBreakdown) -> dict:
        registro = {"epoch": epoca}
        registro.update(desglose.to_dict())
        return registro


def optimize_masks(pair, O: np.ndarray, cfg: Optional[OptimConfig] = None,
                   D: Optional[CostMap] = None) -> SeamResult:
    """Función de conveniencia sobre OptimizadorMascaras."""
    return OptimizadorMascaras(cfg).optimizar(pair, O, D)
