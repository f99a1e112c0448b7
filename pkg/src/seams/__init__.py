"""
Buscadores de costura clásicos y registro de métodos.
"""
from src.seams.labels import (  # noqa: F401
    Label, SeamResult, build_label_map, indicator_masks, seam_pixels,
    seam_energy, write_labels, read_labels
)
from src.seams.base import SeamFinder, find_seam, available_methods, crear_buscador  # noqa: F401
from src.seams.dp import dp_seam  # noqa: F401
from src.seams.flow import FlowNetwork, max_flow_min_cut  # noqa: F401
from src.seams.graphcut import graphcut_seam  # noqa: F401
from src.seams.voronoi import voronoi_seam, voronoi_labels  # noqa: F401
