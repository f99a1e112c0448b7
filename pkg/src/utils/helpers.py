"""
Utilidades generales para la aplicación.
"""
import os
import json
from typing import Any


def format_duration_ms(duration_ms: float) -> str:
    """
    Formatea una duración en milisegundos a formato legible.

    Args:
        duration_ms: Duración en milisegundos

    Returns:
        String formateado (ej: "850 ms", "1.5 s", "2.1 min")
    """
    if duration_ms < 1000:
        return f"{duration_ms:.0f} ms"
    segundos = duration_ms / 1000.0
    if segundos < 60:
        return f"{segundos:.1f} s"
    return f"{segundos / 60.0:.1f} min"


def write_json(path: str, data: Any) -> None:
    """Escribe un objeto JSON creando el directorio si no existe."""
    directorio = os.path.dirname(path)
    if directorio:
        os.makedirs(directorio, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False)


def read_json(path: str) -> Any:
    """Lee un archivo JSON."""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
