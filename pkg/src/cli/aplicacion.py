"""
Interfaz de línea de comandos: stitch, seam, saliency, synth y eval.

Códigos de salida: 0 éxito, 1 error de uso, 2 error de datos, 3 fallo numérico interno.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

from src.alignment.homography import homography_from_any
from src.core.config import config
from src.errores.clasificador_errores import ClasificadorErrores
from src.errores.excepciones import UsageError
from src.harness.batch import EvaluadorLote
from src.harness.pipeline import PipelineCostura
from src.harness.synth import FONDOS, FORMAS, SynthSpec, centered_object, render_synth, synth_suite
from src.imaging.costs import color_difference_map
from src.imaging.io import read_image, read_mask, write_image, write_mask, write_soft
from src.modelos.configuracion_ejecucion import (
    COMBINACIONES_OBJETO, FORMATOS_REPORTE, MODOS_ALINEACION, MODOS_SALIENCIA, RunConfig
)
from src.saliency.masks import detect_object_mask, saliency_map
from src.seams.base import available_methods, find_seam
from src.seams.labels import write_labels
from src.utils.helpers import read_json, write_json

NIVELES_LOG = ("DEBUG", "INFO", "WARNING", "ERROR")


def ruta_traza(ruta: str, metodo: str, varios: bool) -> str:
    """Ruta de la traza de un método; con varios métodos, `traza.json` pasa a `traza_<método>.json`."""
    if not varios:
        return ruta
    raiz, extension = os.path.splitext(ruta)
    return f"{raiz}_{metodo}{extension or '.json'}"


class ParserUso(argparse.ArgumentParser):
    """ArgumentParser que reporta errores como UsageError en lugar de salir."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser_comun() -> argparse.ArgumentParser:
    comun = argparse.ArgumentParser(add_help=False)
    comun.add_argument("--config", help="Archivo JSON con configuración anidada")
    comun.add_argument("--seed", type=int, help="Semilla global")
    comun.add_argument("--jobs", type=int, help="Pares procesados en paralelo")
    comun.add_argument("--out", help="Directorio (o archivo) de salida")
    comun.add_argument("--log-level", choices=NIVELES_LOG, type=str.upper)
    return comun


def _parser_optimizacion() -> argparse.ArgumentParser:
    optim = argparse.ArgumentParser(add_help=False)
    grupo = optim.add_argument_group("optimización de máscaras")
    grupo.add_argument("--epochs", type=int, dest="max_epochs")
    grupo.add_argument("--step", type=float)
    grupo.add_argument("--w-comp", type=float)
    grupo.add_argument("--w-excl", type=float)
    grupo.add_argument("--w-smooth", type=float)
    grupo.add_argument("--w-photo", type=float)
    grupo.add_argument("--raw-sums", "--paper-exact", dest="raw_sums", action="store_true",
                       default=None, help="Pérdidas sin normalizar por el número de píxeles")
    grupo.add_argument("--init", choices=["voronoi", "uniform"])
    grupo.add_argument("--selection", choices=["dynamic", "static"])
    grupo.add_argument("--roles", choices=["auto", "fixed"])
    grupo.add_argument("--trace", help="Archivo JSON de la traza; con varios métodos lleva el sufijo _<método>")
    return optim


def _parser_objeto() -> argparse.ArgumentParser:
    objeto = argparse.ArgumentParser(add_help=False)
    objeto.add_argument("--tau", type=float, help="Umbral de binarización de la saliencia")
    objeto.add_argument("--no-cleanup", action="store_true", help="Sin apertura/cierre morfológico")
    objeto.add_argument("--object-combine", choices=COMBINACIONES_OBJETO)
    objeto.add_argument("--gradient-cost", action="store_true", default=None)
    return objeto


def _parser_entradas() -> argparse.ArgumentParser:
    entradas = argparse.ArgumentParser(add_help=False)
    entradas.add_argument("target", help="Imagen objetivo")
    entradas.add_argument("reference", help="Imagen de referencia")
    entradas.add_argument("--homography", help="H objetivo -> referencia (archivo JSON o texto JSON)")
    entradas.add_argument("--pre-warped", action="store_true",
                          help="Las imágenes ya están proyectadas al lienzo")
    entradas.add_argument("--valid-t", help="Máscara de validez del objetivo (pre-warped)")
    entradas.add_argument("--valid-r", help="Máscara de validez de la referencia (pre-warped)")
    entradas.add_argument("--mask-t", help="Máscara de objeto del objetivo en el lienzo")
    entradas.add_argument("--mask-r", help="Máscara de objeto de la referencia en el lienzo")
    return entradas


def construir_parser() -> ParserUso:
    """Crea el parser con todos los subcomandos."""
    comun, optim, objeto, entradas = (_parser_comun(), _parser_optimizacion(),
                                      _parser_objeto(), _parser_entradas())
    parser = ParserUso(prog="objectseam",
                       description="Costura de pares de imágenes que respeta objetos salientes")
    sub = parser.add_subparsers(dest="comando", required=True, parser_class=ParserUso)

    stitch = sub.add_parser("stitch", parents=[comun, entradas, objeto, optim],
                            help="Cose un par con uno o más métodos y evalúa cada resultado")
    stitch.add_argument("--method", action="append", dest="methods",
                        help="Método de costura (repetible)")
    stitch.add_argument("--format", choices=FORMATOS_REPORTE, dest="report_format")

    seam = sub.add_parser("seam", parents=[comun, entradas, objeto, optim],
                          help="Calcula solo la costura de un método")
    seam.add_argument("--method", required=True)

    saliency = sub.add_parser("saliency", parents=[comun],
                              help="Máscara de objeto saliente de una imagen")
    saliency.add_argument("image")
    saliency.add_argument("--tau", type=float)
    saliency.add_argument("--no-cleanup", action="store_true")
    saliency.add_argument("--map", help="Archivo PGM para el mapa de saliencia")

    synth = sub.add_parser("synth", parents=[comun], help="Genera pares sintéticos con verdad de terreno")
    synth.add_argument("--suite", help="Definición JSON de una suite completa")
    synth.add_argument("--height", type=int, default=96)
    synth.add_argument("--width", type=int, default=160)
    synth.add_argument("--overlap", type=float, default=0.5)
    synth.add_argument("--background", choices=FONDOS, default="gradient")
    synth.add_argument("--shape", choices=FORMAS, default="disk")
    synth.add_argument("--size", type=float, default=20.0)
    synth.add_argument("--displacement", type=float, default=0.0)
    synth.add_argument("--jitter", type=float, default=0.0)
    synth.add_argument("--adversarial", action="store_true")

    evaluar = sub.add_parser("eval", parents=[comun, objeto, optim],
                             help="Evalúa métodos sobre un directorio de pares o una suite sintética")
    fuente = evaluar.add_mutually_exclusive_group()
    fuente.add_argument("--pairs", help="Directorio con un subdirectorio por par")
    fuente.add_argument("--suite", help="Definición JSON de suite sintética")
    evaluar.add_argument("--method", action="append", dest="methods")
    evaluar.add_argument("--alignment-mode", choices=MODOS_ALINEACION)
    evaluar.add_argument("--saliency-mode", choices=MODOS_SALIENCIA)
    return parser


def _cambios(args: argparse.Namespace, nombres: List[str]) -> Dict[str, Any]:
    return {n: getattr(args, n) for n in nombres if getattr(args, n, None) is not None}


def construir_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Configuración efectiva: entorno (.env), luego --config, luego banderas.

    Raises:
        UsageError: si la configuración resultante no es válida
    """
    cfg = RunConfig.desde_config()
    optim = cfg.optim.clonar(**_cambios(args, [
        "max_epochs", "step", "w_comp", "w_excl", "w_smooth", "w_photo",
        "raw_sums", "init", "selection", "roles"]))

    saliencia = cfg.saliency
    cambios_saliencia = _cambios(args, ["tau", "object_combine"])
    if getattr(args, "no_cleanup", False):
        cambios_saliencia["cleanup"] = False
    if cambios_saliencia:
        saliencia = replace(saliencia, **cambios_saliencia)

    alineacion = cfg.alignment
    if args.seed is not None:
        alineacion = replace(alineacion, seed=args.seed)

    cambios = _cambios(args, ["methods", "jobs", "seed", "gradient_cost", "report_format",
                              "alignment_mode", "saliency_mode"])
    if args.out is not None:
        cambios["output_dir"] = args.out
    if getattr(args, "pre_warped", False):
        cambios["alignment_mode"] = "pre-warped"
    elif getattr(args, "homography", None):
        cambios["alignment_mode"] = "provided-H"
    if getattr(args, "mask_t", None) or getattr(args, "mask_r", None):
        if not (args.mask_t and args.mask_r):
            raise UsageError("--mask-t y --mask-r deben indicarse juntas")
        cambios["saliency_mode"] = "file"

    return cfg.clonar(optim=optim, saliency=saliencia, alignment=alineacion, **cambios).validar()


class AplicacionCLI:
    """Despacha los subcomandos y traduce errores a códigos de salida."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.clasificador = ClasificadorErrores()
        self.comandos = {
            "stitch": self.comando_stitch,
            "seam": self.comando_seam,
            "saliency": self.comando_saliency,
            "synth": self.comando_synth,
            "eval": self.comando_eval,
        }

    def ejecutar(self, argv: Optional[List[str]] = None) -> int:
        """Punto de entrada; devuelve el código de salida."""
        try:
            args = construir_parser().parse_args(argv)
            if args.config:
                config.cargar_archivo(args.config)
            if args.log_level:
                config.set_log_level(args.log_level)
            if args.seed is not None:
                config.set('harness.seed', args.seed)
            return self.comandos[args.comando](args)
        except Exception as e:
            reporte = self.clasificador.generar_reporte_error(e)
            self.logger.error(f"[ERROR] {reporte['tipo_excepcion']}: {reporte['mensaje_original']}")
            print(json.dumps(reporte, ensure_ascii=False), file=sys.stderr)
            return reporte["codigo_salida"]

    def _entradas(self, args: argparse.Namespace) -> Dict[str, Any]:
        datos: Dict[str, Any] = {
            "target": read_image(args.target),
            "reference": read_image(args.reference),
        }
        if args.homography:
            datos["homography"] = homography_from_any(args.homography)
        if args.valid_t:
            datos["valid_t"] = read_mask(args.valid_t)
        if args.valid_r:
            datos["valid_r"] = read_mask(args.valid_r)
        if args.mask_t and args.mask_r:
            datos["masks"] = (read_mask(args.mask_t), read_mask(args.mask_r))
        return datos

    def comando_stitch(self, args: argparse.Namespace) -> int:
        cfg = construir_run_config(args)
        datos = self._entradas(args)
        resultado = PipelineCostura(cfg).ejecutar(nombre="pair", **datos)

        print(f"{'method':<22} {'psq':>8} {'failure':>8} {'energy':>12} {'length':>8}")
        codigo = 0
        for metodo, r in resultado.metodos.items():
            if r.exitoso:
                rep = r.reporte
                print(f"{metodo:<22} {rep.psq:>8.4f} {str(rep.failure):>8} "
                      f"{rep.seam_energy:>12.4f} {rep.seam_length:>8d}")
                if args.trace and r.seam.trace:
                    write_json(ruta_traza(args.trace, metodo, len(resultado.metodos) > 1), r.seam.trace)
            else:
                print(f"{metodo:<22} ERROR {r.error['tipo_excepcion']}: {r.error['mensaje_original']}")
                codigo = max(codigo, r.error["codigo_salida"])
        return codigo

    def comando_seam(self, args: argparse.Namespace) -> int:
        if args.method not in available_methods():
            raise UsageError(f"Método desconocido: {args.method}")
        cfg = construir_run_config(args).clonar(methods=[args.method])
        pipeline = PipelineCostura(cfg)
        datos = self._entradas(args)
        pair = pipeline.alinear(datos["target"], datos["reference"], datos.get("homography"),
                                datos.get("valid_t"), datos.get("valid_r"))
        O = pipeline.construir_objeto(pair, datos.get("masks"))
        cost = color_difference_map(pair.warped_target, pair.warped_reference, pair.overlap,
                                    gradient=cfg.gradient_cost)
        resultado = find_seam(args.method, pair, cost, O, cfg.optim)

        destino = cfg.output_dir or "."
        os.makedirs(destino, exist_ok=True)
        write_labels(os.path.join(destino, f"labels_{args.method}.pgm"), resultado.labels)
        write_json(os.path.join(destino, f"seam_{args.method}.json"), {
            "method": resultado.method,
            "energy": resultado.energy,
            "seam_length": resultado.seam_length,
            "seam_pixels": [list(p) for p in resultado.seam_pixels],
            "path": [list(p) for p in resultado.path],
            "info": resultado.info,
        })
        if args.trace and resultado.trace:
            write_json(args.trace, resultado.trace)
        print(f"{args.method}: energía {resultado.energy:.6g}, {resultado.seam_length} píxeles de costura")
        return 0

    def comando_saliency(self, args: argparse.Namespace) -> int:
        cfg = construir_run_config(args)
        imagen = read_image(args.image)
        mascara = detect_object_mask(imagen, None, cfg.saliency)
        destino = args.out or "mask.pgm"
        write_mask(destino, mascara)
        if args.map:
            write_soft(args.map, saliency_map(imagen, None, cfg.saliency))
        print(f"Máscara con {int(mascara.sum())} píxeles escrita en {destino}")
        return 0

    def _escribir_sintetico(self, destino: str, spec: SynthSpec) -> None:
        par = render_synth(spec)
        os.makedirs(destino, exist_ok=True)
        write_image(os.path.join(destino, "target.png"), par.target)
        write_image(os.path.join(destino, "reference.png"), par.reference)
        par.true_H.save(os.path.join(destino, "H.json"))
        write_mask(os.path.join(destino, "mask_t.pgm"), par.mask_t)
        write_mask(os.path.join(destino, "mask_r.pgm"), par.mask_r)
        write_json(os.path.join(destino, "spec.json"), spec.to_dict())

    def comando_synth(self, args: argparse.Namespace) -> int:
        destino = args.out or "synth"
        if args.suite:
            suite = synth_suite(read_json(args.suite))
            for nombre, spec in suite:
                self._escribir_sintetico(os.path.join(destino, nombre), spec)
            print(f"{len(suite)} pares escritos en {destino}")
            return 0

        spec = SynthSpec(height=args.height, width=args.width, overlap_fraction=args.overlap,
                         background=args.background, jitter=args.jitter,
                         seed=args.seed if args.seed is not None else 0,
                         adversarial=args.adversarial)
        spec.validar()
        spec = spec.clonar(objects=[centered_object(spec, args.shape, args.size, args.displacement)])
        self._escribir_sintetico(destino, spec)
        print(f"Par sintético escrito en {destino}")
        return 0

    def comando_eval(self, args: argparse.Namespace) -> int:
        cfg = construir_run_config(args)
        fuente = args.pairs or args.suite or config.get('harness.suite_file')
        if not fuente:
            raise UsageError("Indique --pairs, --suite o harness.suite_file en la configuración")
        resumen = EvaluadorLote(cfg).ejecutar(fuente)

        print(f"{'method':<22} {'pairs':>6} {'failures':>9} {'rate':>7} {'mean psq':>9} {'errors':>7}")
        for metodo, datos in resumen.resumen["methods"].items():
            psq = datos["mean_psq"]
            print(f"{metodo:<22} {datos['pairs']:>6d} {datos['failures']:>9d} "
                  f"{datos['failure_rate']:>7.2%} {psq if psq is not None else float('nan'):>9.4f} "
                  f"{datos['errors']:>7d}")
        if resumen.ruta_csv:
            print(f"Resultados en {resumen.ruta_csv}")
        return 0


def main(argv: Optional[List[str]] = None) -> int:
    return AplicacionCLI().ejecutar(argv)
