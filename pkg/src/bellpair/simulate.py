"""Seeded Monte Carlo coincidence counts from the joint outcome law.

For analyzer directions a, b and a state with Bloch vectors A, P and
correlation matrix D, the joint +-1 outcome probabilities are

    p(s, t) = (1 + s a.A + t b.P + s t a.(D b)) / 4 .

Counts are multinomial draws from that law.  Sampling is reproducible
bit-for-bit: each setting gets its own Philox counter-based stream (128-bit
key = seed << 64 | setting index), 53-bit integers are drawn and binned by
inverse CDF against integer thresholds in the fixed outcome order
(++, +-, -+, --), so results do not depend on evaluation order or platform.
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .protocol import CountTable, angle_to_direction
from .states import DensityMatrix, decompose

_BITS = 53
_SCALE = float(1 << _BITS)


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: state, angle pairs, events per pair, seed."""

    state: DensityMatrix
    settings: tuple[tuple[float, float], ...]
    events_per_setting: int
    seed: int

    def __post_init__(self) -> None:
        if self.events_per_setting < 1:
            raise ValueError("events_per_setting must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "settings", tuple((float(p1), float(p2)) for p1, p2 in self.settings))


def joint_probabilities(rho: DensityMatrix, phi1: float, phi2: float) -> np.ndarray:
    """Outcome probabilities (p++, p+-, p-+, p--) for one angle pair."""
    pd = decompose(rho)
    a = angle_to_direction(phi1)
    b = angle_to_direction(phi2)
    sa = float(a @ pd.A)
    sb = float(b @ pd.P)
    sab = float(a @ pd.D @ b)
    probs = np.array(
        [
            (1.0 + sa + sb + sab) / 4.0,
            (1.0 + sa - sb - sab) / 4.0,
            (1.0 - sa + sb - sab) / 4.0,
            (1.0 - sa - sb + sab) / 4.0,
        ]
    )
    return np.clip(probs, 0.0, None)


def _stream_key(seed: int, index: int) -> int:
    return (seed << 64) | index


def _draw_counts(probs: np.ndarray, n: int, key: int) -> np.ndarray:
    # integer thresholds partition [0, 2^53); a zero-probability outcome
    # gets a zero-width bin and can never be drawn
    edges = np.rint(np.cumsum(probs[:3]) * _SCALE).astype(np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    draws = gen.integers(0, 1 << _BITS, size=n, dtype=np.uint64)
    outcomes = np.searchsorted(edges, draws, side="right")
    return np.bincount(outcomes, minlength=4)


def simulate(cfg: SimConfig) -> list[CountTable]:
    """Coincidence counts per setting; identical config, identical counts."""
    out = []
    for index, (phi1, phi2) in enumerate(cfg.settings):
        probs = joint_probabilities(cfg.state, phi1, phi2)
        counts = _draw_counts(probs, cfg.events_per_setting, _stream_key(cfg.seed, index))
        out.append(
            CountTable(
                phi1=phi1,
                phi2=phi2,
                n_pp=int(counts[0]),
                n_pm=int(counts[1]),
                n_mp=int(counts[2]),
                n_mm=int(counts[3]),
            )
        )
    return out
