"""
Modelos de configuración de alineación, saliencia y ejecución del pipeline.
"""
from dataclasses import dataclass, asdict, field, fields, replace
from typing import Any, Dict, List, Optional, Tuple

from src.core.config import config
from src.errores.excepciones import ConfigurationError, EmptyMethodListError
from src.modelos.configuracion_optimizacion import OptimConfig

MODOS_ALINEACION = ("estimate", "provided-H", "pre-warped")
MODOS_SALIENCIA = ("spectral", "file")
FORMATOS_REPORTE = ("json", "csv")
COMBINACIONES_OBJETO = ("union", "intersection")
METODOS_POR_DEFECTO = ["dp", "graphcut", "voronoi", "object-aware"]


def _filtrar(cls, data: Dict[str, Any]) -> Dict[str, Any]:
    nombres = {f.name for f in fields(cls)}
    return {k: v for k, v in (data or {}).items() if k in nombres}


@dataclass
class OpcionesAlineacion:
    """Parámetros de correspondencias, RANSAC y lienzo."""
    patch_radius: int = 7
    max_corners: int = 500
    min_match_score: float = 0.7
    ransac_iterations: int = 2000
    ransac_threshold_px: float = 3.0
    ransac_min_support: int = 4
    max_canvas_pixels: int = 64_000_000
    seed: int = 0

    def validar_configuracion(self) -> Tuple[bool, str]:
        if self.patch_radius < 1:
            return False, "patch_radius debe ser positivo"
        if self.ransac_iterations < 1:
            return False, "ransac_iterations debe ser positivo"
        if self.ransac_threshold_px <= 0:
            return False, "ransac_threshold_px debe ser positivo"
        if self.max_canvas_pixels < 1:
            return False, "max_canvas_pixels debe ser positivo"
        return True, "Configuración válida"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'OpcionesAlineacion':
        return cls(**_filtrar(cls, data))

    @classmethod
    def desde_config(cls) -> 'OpcionesAlineacion':
        datos = dict(config.get('alignment', {}) or {})
        datos.setdefault('seed', config.get('harness.seed', 0))
        return cls.desde_diccionario(datos)


@dataclass
class OpcionesSaliencia:
    """Parámetros del detector espectral y de la construcción de O."""
    work_size: int = 64
    blur_sigma: float = 2.5
    tau: float = 0.5
    cleanup: bool = True
    object_combine: str = "union"

    def validar_configuracion(self) -> Tuple[bool, str]:
        if self.work_size < 8:
            return False, "work_size debe ser al menos 8"
        if self.blur_sigma < 0:
            return False, "blur_sigma no puede ser negativo"
        if not 0.0 < self.tau < 1.0:
            return False, "tau debe estar en (0, 1)"
        if self.object_combine not in COMBINACIONES_OBJETO:
            return False, f"Combinación de objeto inválida: {self.object_combine}"
        return True, "Configuración válida"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'OpcionesSaliencia':
        return cls(**_filtrar(cls, data))

    @classmethod
    def desde_config(cls) -> 'OpcionesSaliencia':
        return cls.desde_diccionario(config.get('saliency', {}) or {})


@dataclass
class RunConfig:
    """Configuración completa de una ejecución del pipeline sobre uno o más pares."""

    methods: List[str] = field(default_factory=lambda: list(METODOS_POR_DEFECTO))
    alignment_mode: str = "estimate"  # "estimate", "provided-H" o "pre-warped"
    saliency_mode: str = "spectral"  # "spectral" o "file"
    optim: OptimConfig = field(default_factory=OptimConfig)
    alignment: OpcionesAlineacion = field(default_factory=OpcionesAlineacion)
    saliency: OpcionesSaliencia = field(default_factory=OpcionesSaliencia)
    output_dir: Optional[str] = "./resultados"  # None desactiva la escritura de archivos
    report_format: str = "json"
    gradient_cost: bool = False
    psq_patch_radius: int = 3
    jobs: int = 1
    seed: int = 0

    def validar_configuracion(self) -> Tuple[bool, str]:
        """Valida que la configuración sea válida."""
        if not self.methods:
            return False, "La lista de métodos está vacía"
        if self.alignment_mode not in MODOS_ALINEACION:
            return False, f"Modo de alineación inválido: {self.alignment_mode}"
        if self.saliency_mode not in MODOS_SALIENCIA:
            return False, f"Modo de saliencia inválido: {self.saliency_mode}"
        if self.report_format not in FORMATOS_REPORTE:
            return False, f"Formato de reporte inválido: {self.report_format}"
        if self.jobs < 1:
            return False, "jobs debe ser al menos 1"
        if self.psq_patch_radius < 0:
            return False, "psq_patch_radius no puede ser negativo"
        for sub in (self.optim, self.alignment, self.saliency):
            valida, mensaje = sub.validar_configuracion()
            if not valida:
                return False, mensaje
        return True, "Configuración válida"

    def validar(self) -> 'RunConfig':
        """Lanza la excepción de uso correspondiente si la configuración no es válida."""
        if not self.methods:
            raise EmptyMethodListError("Debe indicarse al menos un método de costura")
        valida, mensaje = self.validar_configuracion()
        if not valida:
            raise ConfigurationError(mensaje)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'RunConfig':
        datos = _filtrar(cls, data)
        if isinstance(datos.get('optim'), dict):
            datos['optim'] = OptimConfig.desde_diccionario(datos['optim'])
        if isinstance(datos.get('alignment'), dict):
            datos['alignment'] = OpcionesAlineacion.desde_diccionario(datos['alignment'])
        if isinstance(datos.get('saliency'), dict):
            datos['saliency'] = OpcionesSaliencia.desde_diccionario(datos['saliency'])
        return cls(**datos)

    @classmethod
    def desde_config(cls) -> 'RunConfig':
        """Crea la configuración desde el ConfigManager global."""
        base = cls(
            optim=OptimConfig.desde_config(),
            alignment=OpcionesAlineacion.desde_config(),
            saliency=OpcionesSaliencia.desde_config(),
            output_dir=config.get('harness.output_dir', './resultados'),
            jobs=int(config.get('harness.jobs', 1)),
            seed=int(config.get('harness.seed', 0)),
        )
        # claves opcionales que solo llegan por --config
        opcionales = {k: config.get(f'harness.{k}') for k in
                      ('methods', 'alignment_mode', 'saliency_mode', 'report_format',
                       'gradient_cost', 'psq_patch_radius')}
        return base.clonar(**{k: v for k, v in opcionales.items() if v is not None})

    def clonar(self, **cambios) -> 'RunConfig':
        """Crea una copia con los cambios indicados."""
        return replace(self, **cambios)
