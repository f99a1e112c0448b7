"""
Modelo de configuración para la optimización de máscaras suaves.
"""
from dataclasses import dataclass, asdict, fields, replace
from typing import Any, Dict, Tuple

from src.core.config import config
from src.errores.excepciones import ConfigurationError

INICIALIZACIONES = ("voronoi", "uniform")
SELECCIONES = ("dynamic", "static")
ROLES = ("auto", "fixed")


@dataclass
class OptimConfig:
    """Parámetros del descenso de gradiente sobre los logits de la máscara."""

    max_epochs: int = 1000  # Cota de épocas del bucle
    step: float = 0.5  # Paso inicial sobre los logits
    tolerance: float = 1e-4  # Caída media por época, relativa a |E|, considerada nula
    window: int = 10  # Épocas sobre las que se mide la caída para declarar convergencia
    w_comp: float = 1.0
    w_excl: float = 1.0
    w_smooth: float = 1.0
    w_photo: float = 1.0
    raw_sums: bool = False  # Sumas sin normalizar por el número de píxeles
    init: str = "voronoi"  # "voronoi" o "uniform"
    selection: str = "dynamic"  # "static" fija k = 1
    roles: str = "fixed"  # "auto" asigna el rol de máscara 1 a la imagen que más cubre O
    step_decay: float = 0.999
    c_freeze: float = 12.0  # Magnitud de los logits congelados
    init_logit: float = 2.0
    init_blur_radius: int = 2
    max_halvings: int = 8
    increase_tolerance: float = 1e-9

    def __post_init__(self):
        self.max_epochs = int(self.max_epochs)
        self.window = int(self.window)
        self.init_blur_radius = int(self.init_blur_radius)
        self.max_halvings = int(self.max_halvings)
        self.raw_sums = bool(self.raw_sums)

    @property
    def weights(self) -> Tuple[float, float, float, float]:
        return self.w_comp, self.w_excl, self.w_smooth, self.w_photo

    def validar_configuracion(self) -> Tuple[bool, str]:
        """Valida que la configuración sea válida."""
        if self.max_epochs < 1:
            return False, "max_epochs debe ser positivo"
        if not self.step > 0:
            return False, "El paso debe ser positivo"
        if self.window < 1:
            return False, "La ventana de convergencia debe ser positiva"
        if self.tolerance < 0:
            return False, "La tolerancia no puede ser negativa"
        if any(w < 0 for w in self.weights):
            return False, "Los pesos de la pérdida no pueden ser negativos"
        if self.init not in INICIALIZACIONES:
            return False, f"Inicialización inválida: {self.init}"
        if self.selection not in SELECCIONES:
            return False, f"Selección de máscara inválida: {self.selection}"
        if self.roles not in ROLES:
            return False, f"Asignación de roles inválida: {self.roles}"
        if not 0 < self.step_decay <= 1:
            return False, "step_decay debe estar en (0, 1]"
        return True, "Configuración válida"

    def validar(self) -> 'OptimConfig':
        """Lanza ConfigurationError si la configuración no es válida."""
        valida, mensaje = self.validar_configuracion()
        if not valida:
            raise ConfigurationError(mensaje)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'OptimConfig':
        """Crea la configuración ignorando claves desconocidas."""
        nombres = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in nombres})

    @classmethod
    def desde_config(cls) -> 'OptimConfig':
        """Crea la configuración desde la sección 'optim' del ConfigManager."""
        return cls.desde_diccionario(config.get('optim', {}) or {})

    def clonar(self, **cambios) -> 'OptimConfig':
        """Crea una copia con los cambios indicados."""
        return replace(self, **cambios)
