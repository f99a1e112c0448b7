"""
Estado de un lote de evaluación.
"""
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Optional


class FaseLote(Enum):
    PENDIENTE = "pendiente"
    EN_CURSO = "en_curso"
    COMPLETADO = "completado"
    SIN_RESULTADOS = "sin_resultados"


@dataclass
class EstadoLote:
    """
    Contadores de progreso de un lote de pares.

    Un par cuenta como exitoso si al menos un método produjo reporte; los
    errores por método se acumulan aparte para el resumen final.
    """
    contexto: str
    pares_totales: int
    pares_procesados: int = 0
    pares_exitosos: int = 0
    pares_con_error: int = 0
    errores_por_metodo: Counter = field(default_factory=Counter)
    fase: FaseLote = FaseLote.PENDIENTE
    _inicio: Optional[float] = field(default=None, repr=False)
    duracion_ms: float = 0.0

    @property
    def porcentaje_progreso(self) -> float:
        if self.pares_totales == 0:
            return 0.0
        return 100.0 * self.pares_procesados / self.pares_totales

    @property
    def tasa_exito(self) -> float:
        if self.pares_procesados == 0:
            return 0.0
        return 100.0 * self.pares_exitosos / self.pares_procesados

    def iniciar(self) -> None:
        self.fase = FaseLote.EN_CURSO
        self._inicio = time.perf_counter()

    def registrar(self, exitoso: bool, metodos_fallidos: Iterable[Optional[str]] = ()) -> None:
        """Anota un par terminado y los métodos que fallaron en él."""
        self.pares_procesados += 1
        if exitoso:
            self.pares_exitosos += 1
        else:
            self.pares_con_error += 1
        self.errores_por_metodo.update(m for m in metodos_fallidos if m)

    def finalizar(self) -> None:
        if self._inicio is not None:
            self.duracion_ms = (time.perf_counter() - self._inicio) * 1000.0
        self.fase = FaseLote.COMPLETADO if self.pares_exitosos else FaseLote.SIN_RESULTADOS

    def resumen(self) -> str:
        return (f"{self.pares_procesados}/{self.pares_totales} pares "
                f"({self.porcentaje_progreso:.0f}%), éxito {self.tasa_exito:.0f}%")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "contexto": self.contexto,
            "fase": self.fase.value,
            "pares_totales": self.pares_totales,
            "pares_procesados": self.pares_procesados,
            "pares_exitosos": self.pares_exitosos,
            "pares_con_error": self.pares_con_error,
            "errores_por_metodo": dict(sorted(self.errores_por_metodo.items())),
            "duracion_ms": round(self.duracion_ms, 3),
        }
