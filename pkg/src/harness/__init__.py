"""
Generación de pares sintéticos, pipeline por par y evaluación por lotes.
"""
from src.harness.synth import (  # noqa: F401
    PlantedObject, SynthSpec, SynthPair, centered_object, render_synth, synth_pair, synth_suite
)
from src.harness.pipeline import PipelineCostura, run_pair  # noqa: F401
from src.harness.batch import EvaluadorLote, ResumenLote, read_csv_reports, resolve_pairs, run_batch, summarize  # noqa: F401
