"""
Calidad de la costura: PSQ simplificado y energía fotométrica.
"""
import numpy as np
from scipy import ndimage

from src.modelos.configuracion_ejecucion import OpcionesSaliencia
from src.saliency.masks import saliency_map
from src.seams.labels import boundary_mask, seam_energy  # noqa: F401

RAIZ_3 = np.sqrt(3.0)


def psq_saliency(pair, opciones: OpcionesSaliencia = None) -> np.ndarray:
    """Máximo de las saliencias de ambas imágenes proyectadas."""
    s_t = saliency_map(pair.warped_target, pair.valid_t, opciones)
    s_r = saliency_map(pair.warped_reference, pair.valid_r, opciones)
    return np.maximum(s_t, s_r)


def psq(pair, labels: np.ndarray, saliency: np.ndarray, patch_radius: int = 3) -> float:
    """
    Desalineación media en parches alrededor de la costura, ponderada por saliencia.

    Para cada píxel de costura p, e(p) es la media en el parche (2r+1)^2,
    recortado al solapamiento, de la distancia RGB entre ambas imágenes
    dividida por sqrt(3); w(p) = 0.5 + 0.5·saliencia(p).

    Returns:
        float en [0, 1]; 0 si no hay costura
    """
    overlap = pair.overlap
    costura = boundary_mask(labels, overlap)
    if not costura.any():
        return 0.0

    distancia = np.sqrt(np.sum((pair.warped_target - pair.warped_reference) ** 2, axis=2)) / RAIZ_3
    ov = overlap.astype(np.float64)
    lado = 2 * patch_radius + 1
    suma = ndimage.uniform_filter(distancia * ov, size=lado, mode='constant', cval=0.0)
    cuenta = ndimage.uniform_filter(ov, size=lado, mode='constant', cval=0.0)

    e = np.clip(suma[costura] / np.maximum(cuenta[costura], 1e-300), 0.0, 1.0)
    w = 0.5 + 0.5 * np.asarray(saliency, dtype=np.float64)[costura]
    return float(np.clip(np.sum(e * w) / np.sum(w), 0.0, 1.0))
