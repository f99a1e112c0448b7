"""
Estimación de homografía y proyección del par al lienzo común.
"""
from src.alignment.homography import (  # noqa: F401
    Correspondence, Homography, dlt_homography, estimate_homography,
    ransac_homography, reprojection_errors, homography_from_any
)
from src.alignment.matching import detect_matches  # noqa: F401
from src.alignment.warping import AlignedPair, warp_pair, align_pair  # noqa: F401
