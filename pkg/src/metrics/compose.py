"""
Composición final de la imagen cosida a partir de las máscaras suaves.
"""
import numpy as np

from src.errores.excepciones import PartitionViolationError
from src.imaging.buffers import check_same_shape

TOLERANCIA_PARTICION = 1e-3


def compose(pair, L1: np.ndarray, L2: np.ndarray) -> np.ndarray:
    """
    S = L1·I_wt + L2·I_wr en el solapamiento; las regiones exclusivas copian
    su imagen y los píxeles inválidos quedan en negro.

    Raises:
        PartitionViolationError: si |L1 + L2 - 1| > 1e-3 en el solapamiento
    """
    L1 = np.asarray(L1, dtype=np.float64)
    L2 = np.asarray(L2, dtype=np.float64)
    check_same_shape(L1, L2, pair.overlap, contexto="compose")
    overlap = pair.overlap
    if overlap.any():
        desvio = float(np.max(np.abs(L1 + L2 - 1.0)[overlap]))
        if desvio > TOLERANCIA_PARTICION:
            raise PartitionViolationError(
                f"Las máscaras no forman una partición de la unidad (desvío {desvio:.3g})"
            )

    salida = np.zeros(pair.warped_target.shape)
    mezcla = L1[:, :, None] * pair.warped_target + L2[:, :, None] * pair.warped_reference
    salida[overlap] = mezcla[overlap]
    salida[pair.exclusive_t] = pair.warped_target[pair.exclusive_t]
    salida[pair.exclusive_r] = pair.warped_reference[pair.exclusive_r]
    return np.clip(salida, 0.0, 1.0)
