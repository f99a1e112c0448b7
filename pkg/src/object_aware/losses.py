"""
Pérdida de cobertura compuesta sobre máscaras suaves y su gradiente analítico.

L1 = sigmoid(logits) es la máscara de la imagen 1; L2 = 1 - L1 en los píxeles
válidos y 0 fuera de ellos. En modo normalizado todos los términos se dividen
por N = alto x ancho; con raw_sums solo el término de completitud es una
media.
"""
from dataclasses import dataclass, asdict
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import expit

from src.errores.excepciones import DegenerateCanvasError
from src.imaging.buffers import check_same_shape
from src.imaging.costs import CostMap
from src.modelos.configuracion_optimizacion import OptimConfig


@dataclass
class MaskLogits:
    """Logits por píxel; los congelados mantienen su valor durante el descenso."""
    data: np.ndarray
    frozen: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        self.frozen = np.asarray(self.frozen, dtype=bool)
        check_same_shape(self.data, self.frozen, contexto="MaskLogits")

    @property
    def l1(self) -> np.ndarray:
        return expit(self.data)

    def con_datos(self, data: np.ndarray) -> 'MaskLogits':
        return MaskLogits(data, self.frozen)


@dataclass
class LossBreakdown:
    """Contribuciones ponderadas; total es su suma."""
    comp: float
    excl: float
    smooth: float
    photo: float
    total: float
    selected_k: int
    A_M1: float
    A_M2: float

    def to_dict(self) -> dict:
        datos = asdict(self)
        datos["k"] = datos.pop("selected_k")
        return datos


def _divisor(n: int, raw_sums: bool) -> float:
    return 1.0 if raw_sums else float(n)


def _como_arreglo(D: Union[CostMap, np.ndarray, None], forma) -> np.ndarray:
    if D is None:
        return np.zeros(forma)
    if isinstance(D, CostMap):
        return D.data
    return np.asarray(D, dtype=np.float64)


def _seleccion(O: np.ndarray, L1: np.ndarray, L2: np.ndarray, selection: str):
    M1 = O * L1
    M2 = O * L2
    A1, A2 = float(M1.sum()), float(M2.sum())
    k = 1 if (selection == "static" or A1 > A2) else 2
    return k, A1, A2, M1, M2


def comp_loss(O: np.ndarray, L1: np.ndarray, L2: np.ndarray,
              selection: str = "dynamic") -> Tuple[float, int]:
    """
    Completitud con selección dinámica de máscara.

    k = 1 si el área de O·L1 supera estrictamente a la de O·L2, si no k = 2;
    el valor es la media de (O - M_k)^2.

    Raises:
        DegenerateCanvasError: si O no tiene píxeles
    """
    O = np.asarray(O, dtype=np.float64)
    check_same_shape(O, L1, L2, contexto="comp_loss")
    if O.size == 0:
        raise DegenerateCanvasError("Lienzo sin píxeles")
    k, _, _, M1, M2 = _seleccion(O, L1, L2, selection)
    Mk = M1 if k == 1 else M2
    return float(np.sum((O - Mk) ** 2)) / O.size, k


def excl_loss(O: np.ndarray, L2: np.ndarray, raw_sums: bool = False) -> float:
    """Suma de (O·L2)^2."""
    O = np.asarray(O, dtype=np.float64)
    check_same_shape(O, L2, contexto="excl_loss")
    return float(np.sum((O * L2) ** 2)) / _divisor(O.size, raw_sums)


def pares_suavidad(forma, domain: Optional[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Pesos 0/1 de los pares horizontales y verticales con ambos píxeles en el dominio."""
    if domain is None:
        return np.ones((forma[0], forma[1] - 1)), np.ones((forma[0] - 1, forma[1]))
    dom = np.asarray(domain, dtype=bool)
    return ((dom[:, 1:] & dom[:, :-1]).astype(np.float64),
            (dom[1:, :] & dom[:-1, :]).astype(np.float64))


def smooth_loss(L: np.ndarray, raw_sums: bool = False,
                domain: Optional[np.ndarray] = None) -> float:
    """
    Suma de diferencias hacia adelante al cuadrado en x e y.

    Con `domain`, solo cuentan los pares con ambos píxeles en el dominio.
    """
    L = np.asarray(L, dtype=np.float64)
    ph, pv = pares_suavidad(L.shape, domain)
    dx = L[:, 1:] - L[:, :-1]
    dy = L[1:, :] - L[:-1, :]
    return float(np.sum(ph * dx ** 2) + np.sum(pv * dy ** 2)) / _divisor(L.size, raw_sums)


def photo_loss(D: Union[CostMap, np.ndarray], L1: np.ndarray, overlap: np.ndarray,
               raw_sums: bool = False) -> float:
    """Costo fotométrico ponderado por 4·L1·(1 - L1) dentro del solapamiento."""
    L1 = np.asarray(L1, dtype=np.float64)
    d = _como_arreglo(D, L1.shape)
    check_same_shape(d, L1, overlap, contexto="photo_loss")
    transicion = 4.0 * L1 * (1.0 - L1)
    return float(np.sum(d * np.asarray(overlap, dtype=np.float64) * transicion)) / _divisor(L1.size, raw_sums)


def evaluate(state: MaskLogits, O: np.ndarray, D: Union[CostMap, np.ndarray, None],
             overlap: np.ndarray, cfg: OptimConfig, valid: Optional[np.ndarray] = None,
             pares: Optional[Tuple[np.ndarray, np.ndarray]] = None,
             con_gradiente: bool = True) -> Tuple[LossBreakdown, Optional[np.ndarray]]:
    """
    Pérdida total ponderada y, opcionalmente, su gradiente respecto de los logits.

    k se fija durante una evaluación; el gradiente es cero en los píxeles congelados.
    `pares` reutiliza los pesos de suavidad de pares_suavidad(O.shape, valid).
    """
    O = np.asarray(O, dtype=np.float64)
    check_same_shape(state.data, O, overlap, contexto="total_loss")
    if O.size == 0:
        raise DegenerateCanvasError("Lienzo sin píxeles")
    n = O.size
    v = np.ones(O.shape) if valid is None else np.asarray(valid, dtype=np.float64)
    ov = np.asarray(overlap, dtype=np.float64)
    d = _como_arreglo(D, O.shape)
    div = _divisor(n, cfg.raw_sums)
    w_comp, w_excl, w_smooth, w_photo = cfg.weights

    s = expit(state.data)
    L2 = v * (1.0 - s)

    k, A1, A2, M1, M2 = _seleccion(O, s, L2, cfg.selection)
    Mk = M1 if k == 1 else M2
    comp = float(np.sum((O - Mk) ** 2)) / n
    excl = float(np.sum(M2 ** 2)) / div

    ph, pv = pares if pares is not None else pares_suavidad(O.shape, valid)
    dx = s[:, 1:] - s[:, :-1]
    dy = s[1:, :] - s[:-1, :]
    smooth = float(np.sum(ph * dx ** 2) + np.sum(pv * dy ** 2)) / div

    transicion = 4.0 * s * (1.0 - s)
    photo = float(np.sum(d * ov * transicion)) / div

    partes = (w_comp * comp, w_excl * excl, w_smooth * smooth, w_photo * photo)
    desglose = LossBreakdown(
        comp=partes[0], excl=partes[1], smooth=partes[2], photo=partes[3],
        total=float(sum(partes)), selected_k=k, A_M1=A1, A_M2=A2,
    )
    if not con_gradiente:
        return desglose, None

    # derivadas respecto de L1
    if k == 1:
        g_comp = -2.0 * (O - Mk) * O / n
    else:
        g_comp = 2.0 * (O - Mk) * O * v / n
    g_excl = -2.0 * M2 * O * v / div
    g_smooth = np.zeros(O.shape)
    g_smooth[:, 1:] += 2.0 * ph * dx
    g_smooth[:, :-1] -= 2.0 * ph * dx
    g_smooth[1:, :] += 2.0 * pv * dy
    g_smooth[:-1, :] -= 2.0 * pv * dy
    g_smooth /= div
    g_photo = d * ov * 4.0 * (1.0 - 2.0 * s) / div

    g_l1 = w_comp * g_comp + w_excl * g_excl + w_smooth * g_smooth + w_photo * g_photo
    gradiente = g_l1 * s * (1.0 - s)
    gradiente[state.frozen] = 0.0
    return desglose, gradiente


def total_loss(state: MaskLogits, O: np.ndarray, D: Union[CostMap, np.ndarray, None],
               overlap: np.ndarray, cfg: OptimConfig,
               valid: Optional[np.ndarray] = None) -> LossBreakdown:
    return evaluate(state, O, D, overlap, cfg, valid, con_gradiente=False)[0]


def loss_gradient(state: MaskLogits, O: np.ndarray, D: Union[CostMap, np.ndarray, None],
                  overlap: np.ndarray, cfg: OptimConfig,
                  valid: Optional[np.ndarray] = None) -> np.ndarray:
    return evaluate(state, O, D, overlap, cfg, valid, con_gradiente=True)[1]
