"""
Composición final y métricas de evaluación.
"""
from src.metrics.compose import compose  # noqa: F401
from src.metrics.quality import psq, psq_saliency, seam_energy  # noqa: F401
from src.metrics.integrity import object_integrity  # noqa: F401
from src.metrics.report import MetricsReport, CAMPOS_CSV, score  # noqa: F401
