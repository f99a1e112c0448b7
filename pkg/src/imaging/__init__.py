"""
Buffers de imagen, máscaras, mapas de costo y E/S.
"""
from src.imaging.buffers import (  # noqa: F401
    as_image, as_binary, as_soft, check_same_shape, to_grayscale,
    mask_area, mask_intersect, bounding_box
)
from src.imaging.costs import CostMap, color_difference_map  # noqa: F401
from src.imaging.io import (  # noqa: F401
    read_image, write_image, read_gray_u8, read_mask, write_mask, write_gray_u8, write_soft
)
