"""
Proyección del par de imágenes a un lienzo común.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from src.alignment.homography import Homography, ransac_homography
from src.alignment.matching import detect_matches
from src.errores.excepciones import CanvasTooLargeError, RansacFailureError
from src.imaging.buffers import as_binary, as_image, check_same_shape
from src.modelos.configuracion_ejecucion import OpcionesAlineacion

logger = logging.getLogger(__name__)

TOLERANCIA_BORDE = 1e-9


@dataclass
class AlignedPair:
    """
    Imágenes proyectadas en el lienzo con sus máscaras de validez.

    Los píxeles fuera de la validez de cada imagen valen exactamente 0.
    """
    warped_target: np.ndarray
    warped_reference: np.ndarray
    valid_t: np.ndarray
    valid_r: np.ndarray
    homography: Optional[Homography] = None
    offset: Tuple[int, int] = (0, 0)  # (x, y) del origen de la referencia en el lienzo
    overlap: np.ndarray = field(init=False)

    def __post_init__(self):
        self.warped_target = as_image(self.warped_target).copy()
        self.warped_reference = as_image(self.warped_reference).copy()
        self.valid_t = as_binary(self.valid_t)
        self.valid_r = as_binary(self.valid_r)
        check_same_shape(self.warped_target, self.warped_reference, self.valid_t, self.valid_r,
                         contexto="AlignedPair")
        self.warped_target[~self.valid_t] = 0.0
        self.warped_reference[~self.valid_r] = 0.0
        self.overlap = self.valid_t & self.valid_r

    @property
    def shape(self) -> Tuple[int, int]:
        return self.valid_t.shape

    @property
    def exclusive_t(self) -> np.ndarray:
        return self.valid_t & ~self.valid_r

    @property
    def exclusive_r(self) -> np.ndarray:
        return self.valid_r & ~self.valid_t

    @property
    def valid_union(self) -> np.ndarray:
        return self.valid_t | self.valid_r

    def transpose(self) -> 'AlignedPair':
        """Par con filas y columnas intercambiadas."""
        return AlignedPair(
            self.warped_target.transpose(1, 0, 2).copy(),
            self.warped_reference.transpose(1, 0, 2).copy(),
            self.valid_t.T.copy(),
            self.valid_r.T.copy(),
            homography=None,
            offset=(self.offset[1], self.offset[0]),
        )

    @classmethod
    def from_prewarped(cls, warped_target: np.ndarray, warped_reference: np.ndarray,
                       valid_t: Optional[np.ndarray] = None,
                       valid_r: Optional[np.ndarray] = None) -> 'AlignedPair':
        """
        Construye el par a partir de imágenes ya proyectadas.

        Sin máscaras de validez, todo el lienzo se considera válido.
        """
        forma = np.shape(warped_target)[:2]
        if valid_t is None:
            valid_t = np.ones(forma, dtype=bool)
        if valid_r is None:
            valid_r = np.ones(np.shape(warped_reference)[:2], dtype=bool)
        return cls(np.array(warped_target, dtype=np.float64),
                   np.array(warped_reference, dtype=np.float64),
                   valid_t, valid_r)


def _esquinas(alto: int, ancho: int) -> np.ndarray:
    return np.array([[0, 0], [ancho - 1, 0], [ancho - 1, alto - 1], [0, alto - 1]], dtype=np.float64)


def warp_pair(target: np.ndarray, reference: np.ndarray, H: Homography,
              max_canvas_pixels: int = 64_000_000) -> AlignedPair:
    """
    Proyecta objetivo y referencia a un lienzo común.

    El lienzo es la caja envolvente de la referencia y de H aplicada a las
    esquinas del objetivo. La referencia solo se traslada; el objetivo se
    remuestrea con interpolación bilineal desde H^-1. Un píxel es válido en el
    objetivo si su muestra cae dentro de [0, w-1] x [0, h-1].
    """
    target = as_image(target)
    reference = as_image(reference)
    ht, wt = target.shape[:2]
    hr, wr = reference.shape[:2]

    proyectadas = H.apply(_esquinas(ht, wt))
    if not np.all(np.isfinite(proyectadas)):
        raise CanvasTooLargeError("La homografía lleva el objetivo al infinito")

    xs = np.concatenate([[0.0, wr - 1.0], proyectadas[:, 0]])
    ys = np.concatenate([[0.0, hr - 1.0], proyectadas[:, 1]])
    x0, x1 = int(np.floor(xs.min() + TOLERANCIA_BORDE)), int(np.ceil(xs.max() - TOLERANCIA_BORDE))
    y0, y1 = int(np.floor(ys.min() + TOLERANCIA_BORDE)), int(np.ceil(ys.max() - TOLERANCIA_BORDE))
    ancho, alto = x1 - x0 + 1, y1 - y0 + 1
    if ancho * alto > max_canvas_pixels:
        raise CanvasTooLargeError(
            f"Lienzo de {ancho}x{alto} excede el máximo de {max_canvas_pixels} píxeles"
        )

    ox, oy = -x0, -y0
    warped_r = np.zeros((alto, ancho, 3))
    valid_r = np.zeros((alto, ancho), dtype=bool)
    warped_r[oy:oy + hr, ox:ox + wr] = reference
    valid_r[oy:oy + hr, ox:ox + wr] = True

    filas, cols = np.mgrid[0:alto, 0:ancho]
    puntos = np.stack([cols.ravel() - ox, filas.ravel() - oy], axis=1).astype(np.float64)
    origen = H.inverse().apply(puntos)
    sx, sy = origen[:, 0], origen[:, 1]

    with np.errstate(invalid='ignore'):
        valid_t = ((sx >= -TOLERANCIA_BORDE) & (sx <= wt - 1 + TOLERANCIA_BORDE)
                   & (sy >= -TOLERANCIA_BORDE) & (sy <= ht - 1 + TOLERANCIA_BORDE))
    sx = np.where(valid_t, np.clip(sx, 0.0, wt - 1.0), 0.0)
    sy = np.where(valid_t, np.clip(sy, 0.0, ht - 1.0), 0.0)
    # muestras enteras salvo error de redondeo se toman exactas
    rx, ry = np.round(sx), np.round(sy)
    sx = np.where(np.abs(sx - rx) < TOLERANCIA_BORDE, rx, sx)
    sy = np.where(np.abs(sy - ry) < TOLERANCIA_BORDE, ry, sy)

    warped_t = np.zeros((alto * ancho, 3))
    coords = np.vstack([sy, sx])
    for c in range(3):
        warped_t[:, c] = ndimage.map_coordinates(target[:, :, c], coords, order=1, mode='nearest')
    warped_t = np.clip(warped_t, 0.0, 1.0).reshape(alto, ancho, 3)
    valid_t = valid_t.reshape(alto, ancho)

    par = AlignedPair(warped_t, warped_r, valid_t, valid_r, homography=H, offset=(ox, oy))
    logger.debug(f"Lienzo {ancho}x{alto}, solapamiento de {int(par.overlap.sum())} píxeles")
    return par


def align_pair(target: np.ndarray, reference: np.ndarray,
               opciones: Optional[OpcionesAlineacion] = None) -> AlignedPair:
    """
    Estima la homografía (correspondencias + RANSAC) y proyecta el par.

    Raises:
        RansacFailureError: si no hay correspondencias suficientes o consenso
    """
    opciones = opciones or OpcionesAlineacion()
    matches = detect_matches(target, reference, patch_radius=opciones.patch_radius,
                             max_corners=opciones.max_corners,
                             min_score=opciones.min_match_score)
    logger.info(f"Correspondencias detectadas: {len(matches)}")
    if len(matches) < 4:
        raise RansacFailureError(f"Correspondencias insuficientes para estimar la homografía: {len(matches)}")

    H, inliers = ransac_homography(matches, iterations=opciones.ransac_iterations,
                                   inlier_threshold_px=opciones.ransac_threshold_px,
                                   seed=opciones.seed, min_support=opciones.ransac_min_support)
    logger.info(f"[OK] Homografía estimada con {len(inliers)}/{len(matches)} inliers")
    return warp_pair(target, reference, H, max_canvas_pixels=opciones.max_canvas_pixels)
