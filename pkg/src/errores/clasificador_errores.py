"""
Clasificador de errores para el pipeline de costura.
Responsabilidad única: clasificar excepciones y determinar el código de salida.
"""
import logging
from enum import Enum
from datetime import datetime
from typing import Dict, Any

from src.errores.excepciones import (
    StitchError, UsageError, DataError, NumericError, PipelineError
)


class TipoError(Enum):
    """Tipos de errores según su tratamiento en la CLI."""
    USO = "uso"
    DATOS = "datos"
    NUMERICO = "numerico"
    INTERNO = "interno"


class GravedadError(Enum):
    """Gravedad del error para decidir si el lote continúa."""
    CRITICO = "critico"      # Aborta la ejecución
    ALTO = "alto"            # Aborta el par, el lote continúa
    MEDIO = "medio"          # Aborta el método, el par continúa


class ClasificadorErrores:
    """Clasificador responsable de analizar y categorizar errores."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

        self.codigo_por_tipo = {
            TipoError.USO: 1,
            TipoError.DATOS: 2,
            TipoError.NUMERICO: 3,
            TipoError.INTERNO: 3
        }

        self.gravedad_por_tipo = {
            TipoError.USO: GravedadError.CRITICO,
            TipoError.DATOS: GravedadError.ALTO,
            TipoError.NUMERICO: GravedadError.MEDIO,
            TipoError.INTERNO: GravedadError.ALTO
        }

    def clasificar(self, error: Exception) -> TipoError:
        """
        Clasifica un error según su familia de excepción.

        Args:
            error: Excepción a clasificar

        Returns:
            TipoError: Tipo de error clasificado
        """
        if isinstance(error, PipelineError):
            return self.clasificar(error.causa)
        if isinstance(error, UsageError):
            return TipoError.USO
        if isinstance(error, DataError):
            return TipoError.DATOS
        if isinstance(error, NumericError):
            return TipoError.NUMERICO
        if isinstance(error, (FileNotFoundError, IsADirectoryError)):
            return TipoError.DATOS
        if isinstance(error, StitchError):
            return TipoError.NUMERICO

        self.logger.debug(f"Error no clasificado: {type(error).__name__}")
        return TipoError.INTERNO

    def obtener_gravedad(self, tipo_error: TipoError) -> GravedadError:
        """Obtiene la gravedad de un tipo de error."""
        return self.gravedad_por_tipo.get(tipo_error, GravedadError.ALTO)

    def codigo_salida(self, error: Exception) -> int:
        """
        Código de salida del proceso para un error.

        Returns:
            int: 1 uso, 2 datos, 3 numérico o interno
        """
        return self.codigo_por_tipo[self.clasificar(error)]

    def generar_reporte_error(self, error: Exception) -> Dict[str, Any]:
        """
        Genera un reporte completo del error, serializable a JSON.

        Args:
            error: Excepción a reportar

        Returns:
            dict: Reporte completo del error
        """
        tipo = self.clasificar(error)
        reporte = {
            "mensaje_original": str(error),
            "tipo_excepcion": type(error).__name__,
            "tipo_clasificado": tipo.value,
            "gravedad": self.obtener_gravedad(tipo).value,
            "codigo_salida": self.codigo_por_tipo[tipo],
            "timestamp": datetime.now().isoformat()
        }
        if isinstance(error, PipelineError):
            reporte["etapa"] = error.etapa
            reporte["metodo"] = error.metodo
            reporte["tipo_excepcion"] = type(error.causa).__name__
        epoca = getattr(error, 'epoca', None)
        if epoca is None and isinstance(error, PipelineError):
            epoca = getattr(error.causa, 'epoca', None)
        if epoca is not None:
            reporte["epoca"] = epoca
        return reporte
