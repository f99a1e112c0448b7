"""
Homografías: representación, estimación DLT normalizada y RANSAC determinista.
"""
import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, List, Sequence, Tuple, Union

import numpy as np

from src.errores.excepciones import (
    ConfigurationError, DegenerateConfigurationError, RansacFailureError
)

logger = logging.getLogger(__name__)

DET_MINIMO = 1e-12
CONDICION_MINIMA = 1e-10
COLINEAL_TOL = 1e-9
CONFIRMACIONES_MINIMAS = 2


@dataclass
class Correspondence:
    """Par de puntos (x, y): origen en la imagen objetivo, destino en la de referencia."""
    source: Tuple[float, float]
    destination: Tuple[float, float]
    score: float = 1.0

    def to_dict(self) -> dict:
        return {"source": list(self.source), "destination": list(self.destination), "score": self.score}


@dataclass
class Homography:
    """Matriz 3x3 invertible que lleva coordenadas del objetivo a la referencia."""
    h: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        h = np.array(self.h, dtype=np.float64).reshape(3, 3)
        if not np.all(np.isfinite(h)):
            raise DegenerateConfigurationError("La homografía contiene valores no finitos")
        if abs(h[2, 2]) > DET_MINIMO:
            h = h / h[2, 2]
        if abs(np.linalg.det(h)) <= DET_MINIMO:
            raise DegenerateConfigurationError("Homografía singular (|det| <= 1e-12)")
        self.h = h

    @classmethod
    def identity(cls) -> 'Homography':
        return cls(np.eye(3))

    @classmethod
    def translation(cls, tx: float, ty: float) -> 'Homography':
        return cls(np.array([[1.0, 0.0, tx], [0.0, 1.0, ty], [0.0, 0.0, 1.0]]))

    def inverse(self) -> 'Homography':
        return Homography(np.linalg.inv(self.h))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """
        Aplica la homografía a puntos (x, y).

        Args:
            points: arreglo (N, 2)

        Returns:
            np.ndarray (N, 2); puntos al infinito quedan como inf
        """
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        homog = np.hstack([pts, np.ones((pts.shape[0], 1))]) @ self.h.T
        with np.errstate(divide='ignore', invalid='ignore'):
            out = homog[:, :2] / homog[:, 2:3]
        out[~np.isfinite(out)] = np.inf
        return out

    def to_json(self) -> dict:
        return {"h": [float(v) for v in self.h.ravel()]}

    @classmethod
    def from_json(cls, data: Union[Sequence[float], dict, str]) -> 'Homography':
        """
        Construye una homografía desde JSON: lista de 9 números fila a fila o {"h": [...]}.
        También acepta el texto JSON directamente.
        """
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ConfigurationError(f"Homografía JSON inválida: {e}")
        if isinstance(data, dict):
            data = data.get("h")
        valores = np.asarray(data, dtype=np.float64).ravel() if data is not None else np.array([])
        if valores.size != 9:
            raise ConfigurationError("La homografía debe tener exactamente 9 números")
        return cls(valores.reshape(3, 3))

    @classmethod
    def load(cls, path: str) -> 'Homography':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return cls.from_json(json.load(f))
        except FileNotFoundError:
            raise ConfigurationError(f"No existe el archivo de homografía: {path}")
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Homografía JSON inválida en {path}: {e}")

    def save(self, path: str) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_json(), f, indent=2)


def _normalizacion(pts: np.ndarray) -> np.ndarray:
    """Matriz de Hartley: centroide al origen, distancia media sqrt(2)."""
    centro = pts.mean(axis=0)
    dist = np.sqrt(((pts - centro) ** 2).sum(axis=1)).mean()
    if dist <= 0.0:
        raise DegenerateConfigurationError("Todos los puntos coinciden")
    s = np.sqrt(2.0) / dist
    return np.array([[s, 0.0, -s * centro[0]], [0.0, s, -s * centro[1]], [0.0, 0.0, 1.0]])


def _transformar(T: np.ndarray, pts: np.ndarray) -> np.ndarray:
    homog = np.hstack([pts, np.ones((pts.shape[0], 1))]) @ T.T
    return homog[:, :2]


def _hay_colineales(pts: np.ndarray) -> bool:
    for i, j, k in combinations(range(pts.shape[0]), 3):
        a, b, c = pts[i], pts[j], pts[k]
        area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(area) < COLINEAL_TOL:
            return True
    return False


def estimate_homography(src: np.ndarray, dst: np.ndarray) -> Homography:
    """
    DLT con normalización de Hartley sobre arreglos (N, 2).

    Raises:
        DegenerateConfigurationError: menos de 4 puntos, tres colineales en una
            muestra mínima, o sistema sin solución única
    """
    src = np.asarray(src, dtype=np.float64).reshape(-1, 2)
    dst = np.asarray(dst, dtype=np.float64).reshape(-1, 2)
    n = src.shape[0]
    if n < 4:
        raise DegenerateConfigurationError(f"Se requieren al menos 4 correspondencias, hay {n}")

    Ts, Td = _normalizacion(src), _normalizacion(dst)
    ps, pd = _transformar(Ts, src), _transformar(Td, dst)

    if n == 4 and (_hay_colineales(ps) or _hay_colineales(pd)):
        raise DegenerateConfigurationError("Configuración degenerada: tres puntos colineales")

    x, y = ps[:, 0], ps[:, 1]
    u, v = pd[:, 0], pd[:, 1]
    ceros, unos = np.zeros(n), np.ones(n)
    filas_u = np.stack([-x, -y, -unos, ceros, ceros, ceros, u * x, u * y, u], axis=1)
    filas_v = np.stack([ceros, ceros, ceros, -x, -y, -unos, v * x, v * y, v], axis=1)
    A = np.empty((2 * n, 9))
    A[0::2], A[1::2] = filas_u, filas_v

    _, s, vt = np.linalg.svd(A)
    if s[7] / s[0] < CONDICION_MINIMA:
        raise DegenerateConfigurationError("Configuración degenerada: el sistema DLT no tiene rango 8")

    hn = vt[-1].reshape(3, 3)
    h = np.linalg.inv(Td) @ hn @ Ts
    return Homography(h)


def dlt_homography(matches: List[Correspondence]) -> Homography:
    """Estimación DLT desde una lista de correspondencias."""
    src = np.array([m.source for m in matches], dtype=np.float64).reshape(-1, 2)
    dst = np.array([m.destination for m in matches], dtype=np.float64).reshape(-1, 2)
    return estimate_homography(src, dst)


def reprojection_errors(H: Homography, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Distancia euclidiana entre H(src) y dst; inf para puntos al infinito."""
    proyectados = H.apply(src)
    with np.errstate(invalid='ignore'):
        err = np.sqrt(((proyectados - dst) ** 2).sum(axis=1))
    err[~np.isfinite(err)] = np.inf
    return err


def ransac_homography(matches: List[Correspondence], iterations: int = 2000,
                      inlier_threshold_px: float = 3.0, seed: int = 0,
                      min_support: int = 4) -> Tuple[Homography, List[int]]:
    """
    Consenso RANSAC reproducible.

    Cada iteración usa su propio generador derivado de (seed, iteración). Un
    modelo se acepta si tiene al menos `min_support` inliers en total y
    CONFIRMACIONES_MINIMAS de ellos fuera de su muestra mínima (una muestra
    de 4 puntos siempre se ajusta a sí misma); con menos de 6 correspondencias
    la exigencia baja a las que existen fuera de la muestra. El ganador es el
    de más inliers, luego el de más apoyo fuera de la muestra (la primera
    iteración gana los empates restantes), y se reajusta con DLT sobre todos
    sus inliers.

    Returns:
        (homografía, índices de inliers en orden creciente)
    """
    n = len(matches)
    if n < 4:
        raise RansacFailureError(f"RANSAC requiere al menos 4 correspondencias, hay {n}")

    src = np.array([m.source for m in matches], dtype=np.float64)
    dst = np.array([m.destination for m in matches], dtype=np.float64)
    confirmaciones = min(CONFIRMACIONES_MINIMAS, n - 4)

    mejor_h, mejor_inliers, mejor_rango = None, None, (-1, -1)
    for it in range(iterations):
        rng = np.random.default_rng([seed, it])
        muestra = rng.choice(n, size=4, replace=False)
        try:
            H = estimate_homography(src[muestra], dst[muestra])
        except DegenerateConfigurationError:
            continue
        inliers = reprojection_errors(H, src, dst) <= inlier_threshold_px
        cuenta = int(inliers.sum())
        fuera = cuenta - int(inliers[muestra].sum())
        if cuenta < min_support or fuera < confirmaciones:
            continue
        if (cuenta, fuera) > mejor_rango:
            mejor_h, mejor_inliers, mejor_rango = H, inliers, (cuenta, fuera)

    if mejor_h is None:
        raise RansacFailureError(
            f"RANSAC sin modelo con soporte suficiente tras {iterations} iteraciones ({n} correspondencias)"
        )

    mejor_cuenta = mejor_rango[0]

    try:
        refinada = estimate_homography(src[mejor_inliers], dst[mejor_inliers])
        inliers_ref = reprojection_errors(refinada, src, dst) <= inlier_threshold_px
        if inliers_ref.sum() >= mejor_cuenta:
            mejor_h, mejor_inliers = refinada, inliers_ref
    except DegenerateConfigurationError:
        logger.warning("[WARN] Reajuste DLT degenerado; se conserva el modelo de la muestra")

    indices = [int(i) for i in np.flatnonzero(mejor_inliers)]
    logger.debug(f"RANSAC: {len(indices)}/{n} inliers")
    return mejor_h, indices


def homography_from_any(data: Any) -> Homography:
    """Acepta Homography, matriz, lista JSON o ruta a archivo."""
    if isinstance(data, Homography):
        return data
    if isinstance(data, str) and not data.lstrip().startswith(("[", "{")):
        return Homography.load(data)
    if isinstance(data, np.ndarray) and data.size == 9:
        return Homography(data)
    return Homography.from_json(data)
