"""
Evaluación por lotes: muchos pares, varios métodos, tabla CSV y resumen JSON.
"""
import asyncio
import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.alignment.homography import Homography
from src.errores.clasificador_errores import ClasificadorErrores
from src.errores.excepciones import ConfigurationError, NoPairsError
from src.harness.pipeline import PipelineCostura
from src.harness.synth import SynthSpec, render_synth, synth_suite
from src.imaging.io import read_image, read_mask
from src.metrics.report import CAMPOS_CSV, MetricsReport
from src.modelos.configuracion_ejecucion import RunConfig
from src.modelos.estado_lote import EstadoLote
from src.modelos.resultado_metodo import ResultadoPar
from src.utils.helpers import read_json, write_json

ARCHIVO_CSV = "results.csv"
ARCHIVO_RESUMEN = "summary.json"

Fuente = Union[str, Dict[str, Any], Sequence[Tuple[str, SynthSpec]]]


@dataclass
class EntradaPar:
    """Un par resoluble: nombre y cómo cargarlo."""
    nombre: str
    cargar: Callable[[], Dict[str, Any]]
    sintetico: bool = False


@dataclass
class ResumenLote:
    """Salida de un lote."""
    filas: List[Dict[str, Any]] = field(default_factory=list)
    resumen: Dict[str, Any] = field(default_factory=dict)
    resultados: List[ResultadoPar] = field(default_factory=list)
    ruta_csv: Optional[str] = None
    ruta_resumen: Optional[str] = None


def _cargar_directorio(ruta: str) -> Dict[str, Any]:
    datos: Dict[str, Any] = {
        "target": read_image(os.path.join(ruta, "target.png")),
        "reference": read_image(os.path.join(ruta, "reference.png")),
    }
    ruta_h = os.path.join(ruta, "H.json")
    if os.path.exists(ruta_h):
        datos["homography"] = Homography.load(ruta_h)
    ruta_t, ruta_r = os.path.join(ruta, "mask_t.pgm"), os.path.join(ruta, "mask_r.pgm")
    if os.path.exists(ruta_t) and os.path.exists(ruta_r):
        datos["masks"] = (read_mask(ruta_t), read_mask(ruta_r))
    return datos


def _cargar_sintetico(spec: SynthSpec) -> Dict[str, Any]:
    par = render_synth(spec)
    return {
        "target": par.target,
        "reference": par.reference,
        "homography": par.true_H,
        "masks": (par.mask_t, par.mask_r),
    }


def _es_par(ruta: str) -> bool:
    return (os.path.isfile(os.path.join(ruta, "target.png"))
            and os.path.isfile(os.path.join(ruta, "reference.png")))


def resolve_pairs(fuente: Fuente) -> List[EntradaPar]:
    """
    Resuelve la fuente de pares.

    Acepta un directorio de pares (`<par>/target.png, reference.png` y
    opcionalmente `mask_t.pgm, mask_r.pgm, H.json`), un archivo JSON o un
    diccionario con la definición de una suite sintética, o una lista
    explícita de (nombre, SynthSpec).

    Raises:
        NoPairsError: si no se resuelve ningún par
    """
    entradas: List[EntradaPar] = []
    if isinstance(fuente, str) and os.path.isdir(fuente):
        if _es_par(fuente):
            nombre = os.path.basename(os.path.normpath(fuente))
            entradas.append(EntradaPar(nombre, lambda r=fuente: _cargar_directorio(r)))
        else:
            for nombre in sorted(os.listdir(fuente)):
                ruta = os.path.join(fuente, nombre)
                if os.path.isdir(ruta) and _es_par(ruta):
                    entradas.append(EntradaPar(nombre, lambda r=ruta: _cargar_directorio(r)))
    else:
        if isinstance(fuente, str):
            if not os.path.isfile(fuente):
                raise NoPairsError(f"No existe la fuente de pares: {fuente}")
            fuente = read_json(fuente)
        suite = synth_suite(fuente) if isinstance(fuente, dict) else list(fuente)
        for nombre, spec in suite:
            entradas.append(EntradaPar(nombre, lambda s=spec: _cargar_sintetico(s), sintetico=True))

    if not entradas:
        raise NoPairsError("No se encontró ningún par para evaluar")
    return entradas


def _media(valores: List[float]) -> Optional[float]:
    return float(np.mean(valores)) if valores else None


def summarize(filas: List[Dict[str, Any]], metodos: Sequence[str],
              errores: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    """
    Medias y tasas por método a partir de las filas del CSV.

    failure_rate = fallas / filas del método; success_rate = 1 - failure_rate.
    """
    errores = errores or []
    por_metodo = {}
    for metodo in metodos:
        propias = [f for f in filas if f["method"] == metodo]
        fallas = sum(1 for f in propias if f["failure"])
        n = len(propias)
        tasa = fallas / n if n else 0.0
        por_metodo[metodo] = {
            "pairs": n,
            "failures": fallas,
            "failure_rate": tasa,
            "success_rate": 1.0 - tasa if n else 0.0,
            "mean_psq": _media([f["psq"] for f in propias]),
            "mean_seam_energy": _media([f["seam_energy"] for f in propias]),
            "mean_seam_length": _media([f["seam_length"] for f in propias]),
            "mean_time_ms": _media([f["time_ms"] for f in propias]),
            "errors": sum(1 for e in errores if e.get("metodo") == metodo),
        }
    return {
        "methods": por_metodo,
        "errors": errores,
    }


class EvaluadorLote:
    """Procesa pares en paralelo y agrega sus reportes."""

    def __init__(self, cfg: Optional[RunConfig] = None):
        self.cfg = (cfg or RunConfig()).validar()
        self.clasificador = ClasificadorErrores()
        self.logger = logging.getLogger(__name__)

    def _config_par(self, entrada: EntradaPar) -> RunConfig:
        if entrada.sintetico:
            # los pares sintéticos traen H y máscaras verdaderas
            return self.cfg.clonar(alignment_mode="provided-H", saliency_mode="file")
        return self.cfg

    def procesar_par(self, entrada: EntradaPar, out_dir: Optional[str]) -> ResultadoPar:
        """Carga y procesa un par; un error del par queda registrado en el resultado."""
        try:
            datos = entrada.cargar()
            destino = os.path.join(out_dir, entrada.nombre) if out_dir else None
            pipeline = PipelineCostura(self._config_par(entrada))
            if pipeline.cfg.alignment_mode == "provided-H" and datos.get("homography") is None:
                raise ConfigurationError(f"El par '{entrada.nombre}' no tiene H.json")
            return pipeline.ejecutar(datos["target"], datos["reference"],
                                     homography=datos.get("homography"), masks=datos.get("masks"),
                                     nombre=entrada.nombre, out_dir=destino or "")
        except Exception as e:
            self.logger.error(f"[ERROR] Par '{entrada.nombre}': {e}")
            reporte = self.clasificador.generar_reporte_error(e)
            reporte["par"] = entrada.nombre
            return ResultadoPar(nombre=entrada.nombre, error=reporte)

    async def _procesar_todos(self, entradas: List[EntradaPar], out_dir: Optional[str],
                              estado: EstadoLote) -> List[ResultadoPar]:
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.cfg.jobs) as ejecutor:

            async def tarea(entrada: EntradaPar) -> ResultadoPar:
                resultado = await loop.run_in_executor(ejecutor, self.procesar_par, entrada, out_dir)
                estado.registrar(resultado.exitoso, [e.get("metodo") for e in resultado.errores()])
                self.logger.info(f"Par '{entrada.nombre}' terminado: {estado.resumen()}")
                return resultado

            # gather conserva el orden de entrada
            return await asyncio.gather(*(tarea(e) for e in entradas))

    def ejecutar(self, fuente: Fuente, out_dir: Optional[str] = None) -> ResumenLote:
        """
        Evalúa todos los pares de la fuente.

        Args:
            fuente: directorio de pares, definición de suite o lista de SynthSpecs
            out_dir: directorio de salida; None usa cfg.output_dir

        Returns:
            ResumenLote con filas CSV, resumen y rutas escritas

        Raises:
            NoPairsError: si no hay pares
        """
        entradas = resolve_pairs(fuente)
        destino = out_dir if out_dir is not None else self.cfg.output_dir
        estado = EstadoLote(contexto="lote", pares_totales=len(entradas))
        estado.iniciar()
        self.logger.info(f"Iniciando lote de {len(entradas)} pares con {self.cfg.jobs} procesos")

        resultados = asyncio.run(self._procesar_todos(entradas, destino, estado))
        estado.finalizar()

        filas, errores = [], []
        for resultado in resultados:
            filas.extend(r.fila_csv(resultado.nombre) for r in resultado.reportes())
            for error in resultado.errores():
                errores.append({**error, "par": resultado.nombre})

        salida = ResumenLote(filas=filas, resultados=resultados)
        salida.resumen = summarize(filas, self.cfg.methods, errores)
        salida.resumen["batch"] = estado.to_dict()

        if destino:
            os.makedirs(destino, exist_ok=True)
            salida.ruta_csv = write_csv_reports(os.path.join(destino, ARCHIVO_CSV), filas)
            salida.ruta_resumen = os.path.join(destino, ARCHIVO_RESUMEN)
            write_json(salida.ruta_resumen, salida.resumen)

        for metodo, datos in salida.resumen["methods"].items():
            self.logger.info(
                f"[OK] {metodo}: {datos['failures']}/{datos['pairs']} fallas "
                f"(tasa {datos['failure_rate']:.2%}), errores {datos['errors']}"
            )
        if errores:
            self.logger.warning(f"[WARN] {len(errores)} errores durante el lote")
        return salida


def write_csv_reports(ruta: str, filas: List[Dict[str, Any]]) -> str:
    with open(ruta, "w", newline="", encoding="utf-8") as f:
        escritor = csv.DictWriter(f, fieldnames=CAMPOS_CSV)
        escritor.writeheader()
        escritor.writerows(filas)
    return ruta


def read_csv_reports(ruta: str) -> List[Tuple[str, MetricsReport]]:
    """Lee un CSV de resultados como (par, MetricsReport)."""
    with open(ruta, newline="", encoding="utf-8") as f:
        return [(fila["pair"], MetricsReport.desde_diccionario(fila)) for fila in csv.DictReader(f)]


def run_batch(fuente: Fuente, cfg: Optional[RunConfig] = None,
              out_dir: Optional[str] = None) -> ResumenLote:
    """Atajo funcional de EvaluadorLote.ejecutar."""
    return EvaluadorLote(cfg).ejecutar(fuente, out_dir)
