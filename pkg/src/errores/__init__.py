"""
Excepciones del dominio y clasificación de errores.
"""
from src.errores.excepciones import *  # noqa: F401,F403
from src.errores.clasificador_errores import ClasificadorErrores, TipoError, GravedadError  # noqa: F401
