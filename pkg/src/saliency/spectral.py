"""
Saliencia por residuo espectral sobre imágenes en gris.
"""
import logging

import numpy as np
from scipy import ndimage
from skimage.transform import resize

from src.errores.excepciones import ImageTooSmallError

logger = logging.getLogger(__name__)

TAMANO_MINIMO = 16
_EPSILON = 1e-12


def normalize_range(arr: np.ndarray) -> np.ndarray:
    """Escala a [0, 1] con máximo en 1; un mapa constante produce ceros."""
    minimo, maximo = float(arr.min()), float(arr.max())
    if maximo - minimo <= _EPSILON * max(abs(maximo), 1.0):
        return np.zeros_like(arr, dtype=np.float64)
    return np.clip((arr - minimo) / (maximo - minimo), 0.0, 1.0)


def spectral_residual(gray: np.ndarray, work_size: int = 64, blur_sigma: float = 2.5) -> np.ndarray:
    """
    Mapa de saliencia en [0, 1] del mismo tamaño que la entrada.

    La imagen se reduce a work_size x work_size; el logaritmo de la amplitud
    menos su promedio 3x3 forma el residuo, que junto con la fase original se
    invierte, se eleva al cuadrado, se suaviza y se lleva al tamaño original.
    El término DC no participa, de modo que el resultado no cambia ante
    a·I + b.

    Args:
        gray: imagen en gris (alto, ancho)
        work_size: lado de la resolución de trabajo
        blur_sigma: desviación del suavizado gaussiano a la resolución de trabajo

    Returns:
        np.ndarray float64 en [0, 1]
    """
    gray = np.asarray(gray, dtype=np.float64)
    alto, ancho = gray.shape
    if alto < TAMANO_MINIMO or ancho < TAMANO_MINIMO:
        raise ImageTooSmallError(f"La saliencia requiere al menos 16x16, se recibió {ancho}x{alto}")

    reducida = resize(gray, (work_size, work_size), order=1, mode='reflect', anti_aliasing=True)
    espectro = np.fft.fft2(reducida)
    amplitud = np.abs(espectro)
    fase = np.angle(espectro)

    sin_dc = amplitud.copy()
    sin_dc[0, 0] = 0.0
    if sin_dc.max() <= 1e-10 * max(amplitud[0, 0], 1.0):
        return np.zeros_like(gray)

    log_amp = np.log(amplitud + _EPSILON)
    vecinos = np.roll(np.roll(log_amp, 1, axis=0), 1, axis=1)[0:3, 0:3].copy()
    vecinos[1, 1] = np.nan
    log_amp[0, 0] = np.nanmean(vecinos)

    residuo = log_amp - ndimage.uniform_filter(log_amp, size=3, mode='wrap')
    magnitud = np.exp(residuo)
    magnitud[0, 0] = 0.0
    mapa = np.abs(np.fft.ifft2(magnitud * np.exp(1j * fase))) ** 2
    if blur_sigma > 0:
        mapa = ndimage.gaussian_filter(mapa, sigma=blur_sigma, mode='wrap')

    completo = resize(mapa, (alto, ancho), order=1, mode='reflect', anti_aliasing=False)
    return normalize_range(completo)
