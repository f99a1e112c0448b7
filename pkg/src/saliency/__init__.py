"""
Detección de objetos salientes y construcción de la máscara protegida O.
"""
from src.saliency.spectral import spectral_residual, normalize_range  # noqa: F401
from src.saliency.masks import (  # noqa: F401
    binarize, cleanup, object_union, object_intersection, combine_objects,
    load_mask, saliency_map, detect_object_mask
)
