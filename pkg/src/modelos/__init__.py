"""
Modelos de datos: configuraciones, estado de lote y resultados.
"""
from src.modelos.configuracion_optimizacion import OptimConfig  # noqa: F401
from src.modelos.configuracion_ejecucion import (  # noqa: F401
    OpcionesAlineacion, OpcionesSaliencia, RunConfig, METODOS_POR_DEFECTO
)
from src.modelos.estado_lote import EstadoLote, FaseLote  # noqa: F401
from src.modelos.resultado_metodo import ResultadoMetodo, ResultadoPar  # noqa: F401
