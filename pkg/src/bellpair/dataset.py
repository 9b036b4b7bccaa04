"""Bundled reference dataset: two-proton spin-correlation CHSH measurements.

Eight coplanar CHSH settings with measured combinations and 1-sigma errors,
as published for the singlet-dominated proton pairs of a deuteron-carbon
reaction, together with the published model columns: case 1 assumes a pure
singlet, case 2 a Werner mixture at gamma = 0.9.

The published case-2 column was evidently produced from the 2-decimal
case-1 values (0.9 x 2.72 = 2.448 -> 2.45), so exact recomputation differs
from print in row 3 by 0.0054 and in row 7 (a transcription slip, 2.34
where 0.9 x 2.69 -> 2.42 belongs) by 0.078.  Comparisons against this
resource should expect flags on those two cells.
"""
from __future__ import annotations

from .protocol import AngleSettings, ChshDatum

DATASET_VERSION = "1"

# (phi1, phi1p, phi2, phi2p, r_exp, dr_exp)
_ROWS = (
    (50.0, 0.0, 25.0, 75.0, 0.67, 2.30),
    (60.0, 0.0, 30.0, 90.0, 1.21, 2.42),
    (70.0, 0.0, 35.0, 105.0, 1.54, 2.76),
    (80.0, 0.0, 40.0, 120.0, 2.11, 2.86),
    (90.0, 0.0, 45.0, 135.0, 2.23, 2.48),
    (100.0, 0.0, 50.0, 150.0, 2.39, 2.87),
    (110.0, 0.0, 55.0, 165.0, 2.58, 2.91),
    (120.0, 0.0, 60.0, 180.0, 2.75, 2.95),
)

PUBLISHED_CASE1 = (2.46, 2.60, 2.72, 2.80, 2.83, 2.79, 2.69, 2.50)
PUBLISHED_CASE2 = (2.21, 2.34, 2.45, 2.52, 2.55, 2.51, 2.34, 2.25)
PUBLISHED_CHI2_CASE1 = 1.26
PUBLISHED_CHI2_CASE2 = 0.85

# deviation (before rounding) that marks a published cell as discrepant
FLAG_THRESHOLD = 0.005


def embedded_data() -> list[ChshDatum]:
    """The eight reference measurements as fit-ready CHSH data."""
    return [
        ChshDatum(
            settings=AngleSettings(phi1=p1, phi1p=p1p, phi2=p2, phi2p=p2p),
            r_exp=r,
            dr_exp=dr,
        )
        for p1, p1p, p2, p2p, r, dr in _ROWS
    ]
