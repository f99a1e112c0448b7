"""
Costura con objeto: optimización de máscaras suaves.
"""
from src.object_aware.losses import (  # noqa: F401
    MaskLogits, LossBreakdown, comp_loss, excl_loss, smooth_loss, photo_loss,
    total_loss, loss_gradient, evaluate
)
from src.object_aware.extraction import extract_seam, partition_masks  # noqa: F401
from src.object_aware.optimizer import OptimizadorMascaras, optimize_masks  # noqa: F401
