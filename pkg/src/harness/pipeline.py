"""
Pipeline por par: alineación, máscaras de objeto, costura, composición y métricas.
"""
import csv
import logging
import os
from typing import Optional, Tuple

import numpy as np

from src.alignment.homography import Homography
from src.alignment.warping import AlignedPair, align_pair, warp_pair
from src.errores.clasificador_errores import ClasificadorErrores
from src.errores.excepciones import ConfigurationError, MaskNotFoundError, PipelineError
from src.imaging.buffers import check_same_shape
from src.imaging.costs import CostMap, color_difference_map
from src.imaging.io import write_image, write_mask
from src.metrics.compose import compose
from src.metrics.quality import psq_saliency
from src.metrics.report import CAMPOS_CSV, score
from src.modelos.configuracion_ejecucion import RunConfig
from src.modelos.resultado_metodo import ResultadoMetodo, ResultadoPar
from src.saliency.masks import combine_objects, detect_object_mask
from src.seams.base import find_seam
from src.seams.labels import write_labels
from src.utils.helpers import format_duration_ms, write_json

Mascaras = Tuple[np.ndarray, np.ndarray]


class PipelineCostura:
    """Ejecuta todos los métodos configurados sobre un par de imágenes."""

    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = (cfg or RunConfig()).validar()
        self.clasificador = ClasificadorErrores()
        self.logger = logging.getLogger(__name__)

    def alinear(self, target: np.ndarray, reference: np.ndarray,
                homography: Optional[Homography] = None,
                valid_t: Optional[np.ndarray] = None,
                valid_r: Optional[np.ndarray] = None) -> AlignedPair:
        """Lleva el par al lienzo común según el modo de alineación."""
        modo = self.cfg.alignment_mode
        if modo == "pre-warped":
            return AlignedPair.from_prewarped(target, reference, valid_t, valid_r)
        if modo == "provided-H":
            if homography is None:
                raise ConfigurationError("El modo provided-H requiere una homografía")
            return warp_pair(target, reference, homography,
                             max_canvas_pixels=self.cfg.alignment.max_canvas_pixels)
        return align_pair(target, reference, self.cfg.alignment)

    def construir_objeto(self, pair: AlignedPair, masks: Optional[Mascaras] = None) -> np.ndarray:
        """Máscara O en el lienzo, desde archivos o por saliencia espectral."""
        if self.cfg.saliency_mode == "file":
            if masks is None:
                raise MaskNotFoundError("El modo de saliencia 'file' requiere mask_t y mask_r")
            m_t, m_r = (np.asarray(m, dtype=bool) for m in masks)
            check_same_shape(m_t, m_r, pair.valid_t, contexto="máscaras de objeto")
        else:
            m_t = detect_object_mask(pair.warped_target, pair.valid_t, self.cfg.saliency)
            m_r = detect_object_mask(pair.warped_reference, pair.valid_r, self.cfg.saliency)
        return combine_objects(m_t, m_r, self.cfg.saliency.object_combine)

    def _etapa(self, etapa: str, funcion, *args, **kwargs):
        try:
            return funcion(*args, **kwargs)
        except PipelineError:
            raise
        except Exception as e:
            raise PipelineError(etapa, e) from e

    def ejecutar_metodo(self, metodo: str, pair: AlignedPair, cost: CostMap, O: np.ndarray,
                        saliencia: np.ndarray) -> ResultadoMetodo:
        """Un método completo; los errores quedan en el resultado, no se propagan."""
        try:
            resultado = find_seam(metodo, pair, cost, O, self.cfg.optim)
            imagen = compose(pair, resultado.soft_l1, resultado.soft_l2)
            reporte = score(pair, resultado, O, cost, saliencia, self.cfg.psq_patch_radius)
            self.logger.info(
                f"[OK] {metodo}: psq={reporte.psq:.4f} falla={reporte.failure} "
                f"energía={reporte.seam_energy:.4g} ({format_duration_ms(reporte.time_ms)})"
            )
            return ResultadoMetodo(metodo=metodo, seam=resultado, imagen=imagen, reporte=reporte)
        except Exception as e:
            error = PipelineError("seam", e, metodo)
            self.logger.error(f"[ERROR] {error}")
            return ResultadoMetodo(metodo=metodo, error=self.clasificador.generar_reporte_error(error))

    def ejecutar(self, target: np.ndarray, reference: np.ndarray,
                 homography: Optional[Homography] = None,
                 masks: Optional[Mascaras] = None,
                 valid_t: Optional[np.ndarray] = None,
                 valid_r: Optional[np.ndarray] = None,
                 nombre: str = "pair",
                 out_dir: Optional[str] = None) -> ResultadoPar:
        """
        Ejecuta el pipeline completo sobre un par.

        Args:
            target, reference: imágenes RGB en [0, 1]
            homography: H objetivo -> referencia (modo provided-H)
            masks: (mask_t, mask_r) en coordenadas del lienzo (modo file)
            valid_t, valid_r: validez de imágenes ya proyectadas (modo pre-warped)
            nombre: nombre del par en reportes
            out_dir: directorio de salida; None usa cfg.output_dir

        Raises:
            PipelineError: si falla la alineación, la máscara de objeto o el costo
        """
        self.logger.info(f"Procesando par '{nombre}' con métodos {', '.join(self.cfg.methods)}")
        pair = self._etapa("alignment", self.alinear, target, reference, homography, valid_t, valid_r)
        O = self._etapa("saliency", self.construir_objeto, pair, masks)
        cost = self._etapa("cost", color_difference_map, pair.warped_target, pair.warped_reference,
                           pair.overlap, gradient=self.cfg.gradient_cost)
        saliencia = self._etapa("saliency", psq_saliency, pair, self.cfg.saliency)
        self.logger.debug(f"Lienzo {pair.shape}, O con {int(O.sum())} píxeles")

        resultado = ResultadoPar(nombre=nombre)
        for metodo in self.cfg.methods:
            resultado.metodos[metodo] = self.ejecutar_metodo(metodo, pair, cost, O, saliencia)

        destino = out_dir if out_dir is not None else self.cfg.output_dir
        if destino:
            self._etapa("output", self.escribir_salidas, destino, resultado, O)
        return resultado

    def escribir_salidas(self, destino: str, resultado: ResultadoPar, O: np.ndarray) -> None:
        """Escribe imagen, etiquetas, reporte y traza de cada método exitoso."""
        os.makedirs(destino, exist_ok=True)
        write_mask(os.path.join(destino, "object_mask.pgm"), O)
        for metodo, r in resultado.metodos.items():
            if not r.exitoso:
                write_json(os.path.join(destino, f"error_{metodo}.json"), r.error)
                continue
            write_image(os.path.join(destino, f"stitched_{metodo}.png"), r.imagen)
            write_labels(os.path.join(destino, f"labels_{metodo}.pgm"), r.seam.labels)
            write_json(os.path.join(destino, f"report_{metodo}.json"), r.reporte.to_dict())
            if r.seam.trace:
                write_json(os.path.join(destino, f"trace_{metodo}.json"), r.seam.trace)

        if self.cfg.report_format == "csv":
            with open(os.path.join(destino, "reports.csv"), "w", newline="", encoding="utf-8") as f:
                escritor = csv.DictWriter(f, fieldnames=CAMPOS_CSV)
                escritor.writeheader()
                for reporte in resultado.reportes():
                    escritor.writerow(reporte.fila_csv(resultado.nombre))
        self.logger.info(f"[OK] Salidas de '{resultado.nombre}' escritas en {destino}")


def run_pair(target: np.ndarray, reference: np.ndarray, cfg: Optional[RunConfig] = None,
             homography: Optional[Homography] = None, masks: Optional[Mascaras] = None,
             valid_t: Optional[np.ndarray] = None, valid_r: Optional[np.ndarray] = None,
             nombre: str = "pair", out_dir: Optional[str] = None) -> ResultadoPar:
    """Atajo funcional de PipelineCostura.ejecutar."""
    return PipelineCostura(cfg).ejecutar(target, reference, homography, masks, valid_t, valid_r,
                                         nombre=nombre, out_dir=out_dir)
