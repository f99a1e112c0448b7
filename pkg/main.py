"""
Punto de entrada de la línea de comandos.
"""
import sys
import os

# Añadir el directorio raíz al path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli.aplicacion import main


if __name__ == "__main__":
    sys.exit(main())
