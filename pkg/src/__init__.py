"""
Archivos de inicialización para los paquetes.
"""