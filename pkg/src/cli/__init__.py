"""
Línea de comandos.
"""
from src.cli.aplicacion import (  # noqa: F401
    AplicacionCLI, construir_parser, construir_run_config, main, ruta_traza
)
