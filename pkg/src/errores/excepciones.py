"""
Jerarquía de excepciones del sistema de costura.
Cada familia lleva el código de salida que usa la CLI.
"""
from typing import Optional


class StitchError(Exception):
    """Raíz de todos los errores del dominio."""
    codigo_salida = 3

    def __init__(self, mensaje: str = ""):
        super().__init__(mensaje)
        self.mensaje = mensaje


# --- Errores de uso (código 1) ---

class UsageError(StitchError):
    """Uso incorrecto: argumentos o configuración inválidos."""
    codigo_salida = 1


class ConfigurationError(UsageError):
    pass


class InvalidThresholdError(UsageError):
    pass


class EmptyMethodListError(UsageError):
    pass


# --- Errores de datos (código 2) ---

class DataError(StitchError):
    """Los datos de entrada no permiten completar la operación."""
    codigo_salida = 2


class DimensionMismatchError(DataError):
    pass


class InvalidImageError(DataError):
    pass


class ImageTooSmallError(DataError):
    pass


class MaskNotFoundError(DataError):
    pass


class MultiChannelMaskError(DataError):
    pass


class DegenerateConfigurationError(DataError):
    pass


class RansacFailureError(DataError):
    pass


class CanvasTooLargeError(DataError):
    pass


class EmptyOverlapError(DataError):
    pass


class NonTraversableOverlapError(DataError):
    pass


class SeamEndpointsError(DataError):
    pass


class ExclusiveRegionEmptyError(DataError):
    pass


class MalformedNetworkError(DataError):
    pass


class ObjectOutsideCanvasError(DataError):
    pass


class NoPairsError(DataError):
    pass


# --- Errores numéricos (código 3) ---

class NumericError(StitchError):
    """Fallo numérico interno."""
    codigo_salida = 3


class DivergenceError(NumericError):
    """La pérdida dejó de ser finita durante la optimización."""

    def __init__(self, epoca: int, mensaje: str = ""):
        super().__init__(mensaje or f"Pérdida no finita en la época {epoca}")
        self.epoca = epoca


class PartitionViolationError(NumericError):
    pass


class DegenerateCanvasError(NumericError):
    pass


class InvalidReportError(NumericError):
    """Un reporte de métricas viola sus propios invariantes."""


class PipelineError(StitchError):
    """Envuelve un error indicando etapa y método donde ocurrió."""

    def __init__(self, etapa: str, causa: Exception, metodo: Optional[str] = None):
        donde = f"{etapa}/{metodo}" if metodo else etapa
        super().__init__(f"[{donde}] {type(causa).__name__}: {causa}")
        self.etapa = etapa
        self.metodo = metodo
        self.causa = causa
        self.codigo_salida = getattr(causa, 'codigo_salida', 3)
