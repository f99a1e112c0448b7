"""
Generador de pares sintéticos con verdad de terreno.

Se renderiza una escena de ancho W con fondo texturizado y objetos planos.
El objetivo es la ventana [0, w) y la referencia la ventana [s, s + w), con
w = round(W / (2 - f)) y s = W - w, de modo que el solapamiento ocupa una
fracción f de cada vista. Cada objeto se dibuja en su centro en la vista
objetivo y desplazado en la vista de referencia.
"""
import itertools
import logging
from dataclasses import dataclass, asdict, field, fields, replace
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy import ndimage

from src.alignment.homography import Homography
from src.errores.excepciones import ConfigurationError, ObjectOutsideCanvasError

logger = logging.getLogger(__name__)

FONDOS = ("gradient", "checker", "noise")
FORMAS = ("disk", "rectangle")
SOLAPAMIENTO_MINIMO_PX = 8
COLORES_OBJETO = [(0.95, 0.15, 0.1), (0.1, 0.2, 0.95), (0.95, 0.9, 0.05), (0.05, 0.85, 0.25)]


@dataclass
class PlantedObject:
    """Objeto plano plantado en la escena."""
    shape: str = "disk"
    center: Tuple[float, float] = (0.0, 0.0)  # (x, y) en la vista objetivo
    size: float = 20.0  # diámetro del disco o ancho del rectángulo
    aspect: float = 1.2  # alto / ancho del rectángulo
    color: Tuple[float, float, float] = COLORES_OBJETO[0]
    displacement: Tuple[float, float] = (0.0, 0.0)  # (dx, dy) en la vista de referencia

    def huella(self, alto: int, ancho: int, desplazado: bool = False) -> np.ndarray:
        """Píxeles cubiertos por el objeto en una escena de alto x ancho."""
        cx, cy = self.center
        if desplazado:
            cx, cy = cx + self.displacement[0], cy + self.displacement[1]
        filas, cols = np.mgrid[0:alto, 0:ancho]
        if self.shape == "disk":
            radio = self.size / 2.0
            return (cols - cx) ** 2 + (filas - cy) ** 2 <= radio ** 2
        medio_ancho = self.size / 2.0
        medio_alto = self.size * self.aspect / 2.0
        return (np.abs(cols - cx) <= medio_ancho) & (np.abs(filas - cy) <= medio_alto)

    def caja(self, desplazado: bool = False) -> Tuple[float, float, float, float]:
        """(x0, x1, y0, y1) de la caja envolvente continua."""
        cx, cy = self.center
        if desplazado:
            cx, cy = cx + self.displacement[0], cy + self.displacement[1]
        medio_ancho = self.size / 2.0
        medio_alto = medio_ancho if self.shape == "disk" else self.size * self.aspect / 2.0
        return cx - medio_ancho, cx + medio_ancho, cy - medio_alto, cy + medio_alto

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'PlantedObject':
        nombres = {f.name for f in fields(cls)}
        datos = {k: v for k, v in data.items() if k in nombres}
        for campo in ("center", "color", "displacement"):
            if campo in datos:
                datos[campo] = tuple(float(v) for v in datos[campo])
        return cls(**datos)


@dataclass
class SynthSpec:
    """Descripción de un par sintético."""
    height: int = 96
    width: int = 160  # ancho de la escena completa (= ancho del lienzo)
    overlap_fraction: float = 0.5
    background: str = "gradient"
    objects: List[PlantedObject] = field(default_factory=list)
    jitter: float = 0.0
    seed: int = 0
    adversarial: bool = False
    adversarial_amplitude: float = 0.15
    corridor_width: int = 3

    @property
    def view_width(self) -> int:
        return int(round(self.width / (2.0 - self.overlap_fraction)))

    @property
    def shift(self) -> int:
        return self.width - self.view_width

    @property
    def overlap_columns(self) -> Tuple[int, int]:
        """Columnas [inicio, fin) del solapamiento en coordenadas del lienzo."""
        return self.shift, self.view_width

    def validar_configuracion(self) -> Tuple[bool, str]:
        if self.height < 16 or self.width < 16:
            return False, "La escena debe medir al menos 16x16"
        if not 0.0 < self.overlap_fraction < 1.0:
            return False, "overlap_fraction debe estar en (0, 1)"
        if self.overlap_fraction * self.view_width < SOLAPAMIENTO_MINIMO_PX:
            return False, f"El solapamiento debe tener al menos {SOLAPAMIENTO_MINIMO_PX} px"
        if self.background not in FONDOS:
            return False, f"Fondo inválido: {self.background}"
        if self.jitter < 0 or self.adversarial_amplitude < 0:
            return False, "Las amplitudes no pueden ser negativas"
        if self.corridor_width < 1:
            return False, "corridor_width debe ser positivo"
        for obj in self.objects:
            if obj.shape not in FORMAS:
                return False, f"Forma inválida: {obj.shape}"
            if obj.size <= 0:
                return False, "El tamaño de los objetos debe ser positivo"
        return True, "Configuración válida"

    def validar(self) -> 'SynthSpec':
        valida, mensaje = self.validar_configuracion()
        if not valida:
            raise ConfigurationError(mensaje)
        for i, obj in enumerate(self.objects):
            for desplazado in (False, True):
                x0, x1, y0, y1 = obj.caja(desplazado)
                if x0 < 0 or y0 < 0 or x1 > self.width - 1 or y1 > self.height - 1:
                    vista = "referencia" if desplazado else "objetivo"
                    raise ObjectOutsideCanvasError(
                        f"El objeto {i} sale del lienzo en la vista {vista}"
                    )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def desde_diccionario(cls, data: Dict[str, Any]) -> 'SynthSpec':
        nombres = {f.name for f in fields(cls)}
        datos = {k: v for k, v in data.items() if k in nombres}
        datos["objects"] = [o if isinstance(o, PlantedObject) else PlantedObject.desde_diccionario(o)
                            for o in datos.get("objects", [])]
        return cls(**datos)

    def clonar(self, **cambios) -> 'SynthSpec':
        return replace(self, **cambios)


@dataclass
class SynthPair:
    """Par sintético renderizado con su verdad de terreno en el lienzo."""
    target: np.ndarray
    reference: np.ndarray
    true_H: Homography
    true_O: np.ndarray
    mask_t: np.ndarray
    mask_r: np.ndarray


def _fondo(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    alto, ancho = spec.height, spec.width
    filas, cols = np.mgrid[0:alto, 0:ancho]
    if spec.background == "gradient":
        u = cols / max(ancho - 1, 1)
        v = filas / max(alto - 1, 1)
        canales = [0.5 * u + 0.5 * v, 0.7 * u + 0.3 * (1 - v), 0.4 * (1 - u) + 0.6 * v]
        base = np.stack(canales, axis=-1)
    elif spec.background == "checker":
        celda = ((filas // 8) + (cols // 8)) % 2
        base = np.stack([celda * 0.8 + 0.1, celda * 0.6 + 0.2, (1 - celda) * 0.7 + 0.15], axis=-1)
    else:
        ruido = rng.uniform(0.0, 1.0, size=(alto, ancho, 3))
        base = ndimage.gaussian_filter(ruido, sigma=(2.0, 2.0, 0.0), mode='wrap')
        minimo, maximo = base.min(), base.max()
        base = (base - minimo) / (maximo - minimo) if maximo > minimo else np.full_like(base, 0.5)
    return 0.2 + 0.6 * base


def _pintar(escena: np.ndarray, spec: SynthSpec, desplazado: bool) -> np.ndarray:
    huellas = np.zeros(escena.shape[:2], dtype=bool)
    for obj in spec.objects:
        huella = obj.huella(spec.height, spec.width, desplazado)
        escena[huella] = obj.color
        huellas |= huella
    return huellas


def _perturbacion_adversaria(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """Perturbación de la referencia salvo en un corredor vertical por el objeto."""
    a = spec.adversarial_amplitude
    signo = rng.choice([-1.0, 1.0], size=(spec.height, spec.width, 3))
    perturbacion = signo * rng.uniform(0.5 * a, a, size=(spec.height, spec.width, 3))
    if spec.objects:
        obj = spec.objects[0]
        centro = int(round(obj.center[0] + obj.displacement[0] / 2.0))
        c0 = max(centro - spec.corridor_width // 2, 0)
        perturbacion[:, c0:c0 + spec.corridor_width] = 0.0
    return perturbacion


def render_synth(spec: SynthSpec) -> SynthPair:
    """
    Renderiza el par completo de un SynthSpec.

    Raises:
        ConfigurationError: si el spec es inválido
        ObjectOutsideCanvasError: si algún objeto sale de la escena
    """
    spec.validar()
    w, s = spec.view_width, spec.shift

    fondo = _fondo(spec, np.random.default_rng([spec.seed, 0]))
    escena_t = fondo.copy()
    escena_r = fondo.copy()
    huella_t = _pintar(escena_t, spec, desplazado=False)
    huella_r = _pintar(escena_r, spec, desplazado=True)

    if spec.adversarial:
        escena_r = escena_r + _perturbacion_adversaria(spec, np.random.default_rng([spec.seed, 3]))
    if spec.jitter > 0:
        for escena, flujo in ((escena_t, 1), (escena_r, 2)):
            rng = np.random.default_rng([spec.seed, flujo])
            escena += rng.uniform(-spec.jitter, spec.jitter, size=escena.shape)

    target = np.clip(escena_t[:, 0:w], 0.0, 1.0)
    reference = np.clip(escena_r[:, s:s + w], 0.0, 1.0)

    # coordenadas del lienzo = coordenadas de la escena
    mask_t = np.zeros((spec.height, spec.width), dtype=bool)
    mask_r = np.zeros_like(mask_t)
    mask_t[:, 0:w] = huella_t[:, 0:w]
    mask_r[:, s:s + w] = huella_r[:, s:s + w]
    return SynthPair(
        target=np.ascontiguousarray(target),
        reference=np.ascontiguousarray(reference),
        true_H=Homography.translation(-float(s), 0.0),
        true_O=mask_t | mask_r,
        mask_t=mask_t,
        mask_r=mask_r,
    )


def synth_pair(spec: SynthSpec) -> Tuple[np.ndarray, np.ndarray, Homography, np.ndarray]:
    """
    Genera (target, reference, true_H, true_O) de forma determinista por semilla.

    true_H lleva coordenadas del objetivo a coordenadas de la referencia.
    """
    par = render_synth(spec)
    return par.target, par.reference, par.true_H, par.true_O


def centered_object(spec: SynthSpec, shape: str = "disk", size: float = 20.0,
                    displacement: float = 0.0, offset: Tuple[float, float] = (0.0, 0.0),
                    color: Tuple[float, float, float] = COLORES_OBJETO[0]) -> PlantedObject:
    """Objeto cuya unión de ambas vistas queda centrada en el solapamiento."""
    c0, c1 = spec.overlap_columns
    centro_x = (c0 + c1 - 1) / 2.0 - displacement / 2.0 + offset[0]
    centro_y = (spec.height - 1) / 2.0 + offset[1]
    return PlantedObject(shape=shape, center=(centro_x, centro_y), size=size,
                         color=color, displacement=(displacement, 0.0))


def _como_lista(valor: Any) -> list:
    if isinstance(valor, (list, tuple)):
        return list(valor)
    return [valor]


def synth_suite(definition: Dict[str, Any]) -> List[Tuple[str, SynthSpec]]:
    """
    Expande la definición de una suite en SynthSpecs nombrados.

    La rejilla es desplazamientos x jitters x formas x repeticiones, con
    semillas 0..n-1 en ese orden. Cada par lleva un objeto centrado en el
    solapamiento, con un corrimiento aleatorio de hasta center_jitter_px.
    """
    base = SynthSpec(
        height=int(definition.get("height", 96)),
        width=int(definition.get("width", 160)),
        overlap_fraction=float(definition.get("overlap_fraction", 0.5)),
        adversarial=bool(definition.get("adversarial", True)),
        adversarial_amplitude=float(definition.get("adversarial_amplitude", 0.15)),
        corridor_width=int(definition.get("corridor_width", 3)),
    )
    desplazamientos = [float(d) for d in _como_lista(definition.get("displacements", [0, 5, 15]))]
    jitters = [float(j) for j in _como_lista(definition.get("jitters", [0.0, 0.02]))]
    formas = _como_lista(definition.get("shapes", list(FORMAS)))
    fondos = _como_lista(definition.get("backgrounds", list(FONDOS)))
    repeticiones = int(definition.get("repeats", 5))
    tamano = float(definition.get("object_size", 20))
    corrimiento = float(definition.get("center_jitter_px", 3))
    prefijo = definition.get("name", "synth")

    suite = []
    rejilla = itertools.product(desplazamientos, jitters, formas, range(repeticiones))
    for semilla, (d, j, forma, _) in enumerate(rejilla):
        rng = np.random.default_rng([semilla, 99])
        dx, dy = rng.uniform(-corrimiento, corrimiento, size=2)
        obj = centered_object(base, forma, tamano, d, offset=(dx, dy),
                              color=COLORES_OBJETO[semilla % len(COLORES_OBJETO)])
        spec = base.clonar(background=fondos[semilla % len(fondos)], objects=[obj],
                           jitter=j, seed=semilla)
        suite.append((f"{prefijo}_{semilla:03d}", spec))
    logger.info(f"Suite '{prefijo}' expandida en {len(suite)} pares")
    return suite
