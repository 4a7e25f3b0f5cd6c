"""Fano-bound surfaces over the conditional outcome probabilities (P1, P2).

For a fixed value of the hidden variable and message, write
``P1 = P(B=0 | b=0)`` and ``P2 = P(B=0 | b=1)``.  When the message and
hidden variable carry no setting information, ``b`` stays fair under the
conditioning, so the conditional entropies of ``B`` and ``B xor b`` close
over (P1, P2):

    H(B)        = h((P1 + P2) / 2)
    H(B xor b)  = h((1 + P1 - P2) / 2)

Inverting the binary entropy on its upper branch turns those entropies
into the largest match probabilities Fano's inequality permits, hence
into ceilings for the CHSH score (beta) and the information-causality
functional (alpha).  The scan over the unit square reproduces the two
theorems this package exists to check numerically: beta stays at or
below 3/4 and alpha at or below 1 everywhere.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence, TextIO

from .infocore import DomainError, binary_entropy, inv_binary_entropy_upper

#: slack for the reproduced theorems (beta <= 3/4, alpha <= 1)
THEOREM_ATOL = 1e-9

#: grid points within this distance of an extremum count as attaining it
EXTREMUM_ATOL = 1e-12

CSV_COLUMNS = ("p1", "p2", "h_B", "h_Bxorb", "p_max_a0", "p_max_a1", "beta_max", "alpha_max")


class BoundTheoremError(RuntimeError):
    """A surface point exceeded a bound the theory guarantees; indicates a bug."""


@dataclass(frozen=True, slots=True)
class SurfacePoint:
    """Entropies and Fano ceilings at one (P1, P2) node."""

    p1: float
    p2: float
    h_B: float
    h_Bxorb: float
    p_max_a0: float
    p_max_a1: float
    beta_max: float
    alpha_max: float


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value!r} outside [0, 1]")


def h_B_point(p1: float, p2: float) -> float:
    """Conditional entropy of B given the cell: h((p1 + p2) / 2)."""
    _check_unit("p1", p1)
    _check_unit("p2", p2)
    return binary_entropy(0.5 * (p1 + p2))


def h_Bxorb_point(p1: float, p2: float) -> float:
    """Conditional entropy of B xor b given the cell: h((1 + p1 - p2) / 2)."""
    _check_unit("p1", p1)
    _check_unit("p2", p2)
    return binary_entropy(0.5 * (1.0 + p1 - p2))


def _surface_point(p1: float, p2: float, inv: Callable[[float], float]) -> SurfacePoint:
    h_B = h_B_point(p1, p2)
    h_X = h_Bxorb_point(p1, p2)
    p_a0 = inv(h_B)
    p_a1 = inv(h_X)
    beta = 0.5 * (p_a0 + p_a1)
    alpha = (2.0 * p_a0 - 1.0) ** 2 + (2.0 * p_a1 - 1.0) ** 2
    if beta > 0.75 + THEOREM_ATOL:
        raise BoundTheoremError(f"beta_max({p1}, {p2}) = {beta!r} exceeds 3/4")
    if alpha > 1.0 + THEOREM_ATOL:
        raise BoundTheoremError(f"alpha_max({p1}, {p2}) = {alpha!r} exceeds 1")
    return SurfacePoint(p1, p2, h_B, h_X, p_a0, p_a1, beta, alpha)


def beta_max_point(p1: float, p2: float) -> SurfacePoint:
    """Full Fano ceiling at one node, with the 3/4 and 1 bounds asserted."""
    return _surface_point(p1, p2, inv_binary_entropy_upper)


def alpha_max_point(p1: float, p2: float) -> float:
    """Ceiling of the information-causality functional at one node."""
    return beta_max_point(p1, p2).alpha_max


def beta_max_from_info(i_B: float, i_Bxorb: float, h_B: float, h_Bxorb: float) -> float:
    """Largest beta consistent with the stated entropies and mutual informations.

    Each match probability is Fano-bounded by the inverse entropy of
    ``h - i``; the difference clamps into [0, 1] so that numerical dust
    can only make the bound more conservative.
    """
    for name, value in (("h_B", h_B), ("h_Bxorb", h_Bxorb)):
        _check_unit(name, value)
    for name, value in (("i_B", i_B), ("i_Bxorb", i_Bxorb)):
        if value < 0.0:
            raise DomainError(f"{name}={value!r} negative")
    p_a0 = inv_binary_entropy_upper(min(1.0, max(0.0, h_B - i_B)))
    p_a1 = inv_binary_entropy_upper(min(1.0, max(0.0, h_Bxorb - i_Bxorb)))
    return 0.5 * (p_a0 + p_a1)


@dataclass(frozen=True)
class BoundSurface:
    """Row-major grid of SurfacePoints over [0, 1]^2 (p1 outer, endpoints included)."""

    resolution: int
    points: tuple[SurfacePoint, ...]

    def point(self, i: int, j: int) -> SurfacePoint:
        return self.points[i * self.resolution + j]

    @cached_property
    def max_beta_max(self) -> float:
        return max(p.beta_max for p in self.points)

    @cached_property
    def min_beta_max(self) -> float:
        return min(p.beta_max for p in self.points)

    @cached_property
    def max_alpha_max(self) -> float:
        return max(p.alpha_max for p in self.points)

    @cached_property
    def min_alpha_max(self) -> float:
        return min(p.alpha_max for p in self.points)

    def argmax_beta_max(self) -> list[tuple[float, float]]:
        top = self.max_beta_max
        return [(p.p1, p.p2) for p in self.points if top - p.beta_max <= EXTREMUM_ATOL]

    def argmin_beta_max(self) -> list[tuple[float, float]]:
        bottom = self.min_beta_max
        return [(p.p1, p.p2) for p in self.points if p.beta_max - bottom <= EXTREMUM_ATOL]

    def argmax_alpha_max(self) -> list[tuple[float, float]]:
        top = self.max_alpha_max
        return [(p.p1, p.p2) for p in self.points if top - p.alpha_max <= EXTREMUM_ATOL]


def resolve_workers(workers: int | None = None) -> int:
    """Worker count for grid scans; 0 or None consults BELLBOUND_THREADS (0 = auto)."""
    if workers is None:
        raw = os.environ.get("BELLBOUND_THREADS", "1")
        try:
            workers = int(raw)
        except ValueError as exc:
            raise ValueError(f"BELLBOUND_THREADS={raw!r} is not an integer") from exc
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"worker count must be nonnegative, got {workers}")
    return workers


def scan_surface(resolution: int, workers: int | None = 1) -> BoundSurface:
    """Evaluate the Fano ceilings on a uniform inclusive grid.

    The entropy inversions are memoised: across the grid the entropy
    arguments take only O(resolution) distinct values, so a 201 x 201 scan
    costs a few hundred bisections.  Rows are independent and may be
    partitioned across threads.
    """
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    grid = [i / (resolution - 1) for i in range(resolution)]
    cache: dict[float, float] = {}

    def inv(h: float) -> float:
        p = cache.get(h)
        if p is None:
            p = inv_binary_entropy_upper(h)
            cache[h] = p
        return p

    def row(p1: float) -> list[SurfacePoint]:
        return [_surface_point(p1, p2, inv) for p2 in grid]

    n = resolve_workers(workers)
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(row, grid))
    else:
        rows = [row(p1) for p1 in grid]
    return BoundSurface(resolution, tuple(p for r in rows for p in r))


def format_sig12(value: float) -> str:
    """Decimal rendering with 12 significant digits (diff-stable output)."""
    return f"{value:.12g}"


def write_surface_csv(surface: BoundSurface, stream: TextIO) -> None:
    """Row-major CSV of the grid, header included, 12 significant digits."""
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for p in surface.points:
        row = (p.p1, p.p2, p.h_B, p.h_Bxorb, p.p_max_a0, p.p_max_a1, p.beta_max, p.alpha_max)
        stream.write(",".join(format_sig12(v) for v in row) + "\n")


def surface_rows(surface: BoundSurface) -> Iterable[dict[str, float]]:
    """Grid rows as dicts matching the CSV schema (for JSON output)."""
    for p in surface.points:
        yield {
            "p1": p.p1,
            "p2": p.p2,
            "h_B": p.h_B,
            "h_Bxorb": p.h_Bxorb,
            "p_max_a0": p.p_max_a0,
            "p_max_a1": p.p_max_a1,
            "beta_max": p.beta_max,
            "alpha_max": p.alpha_max,
        }


def _truncated(points: Sequence[tuple[float, float]], limit: int = 16) -> list[list[float]]:
    return [[p1, p2] for p1, p2 in points[:limit]]


def surface_summary(surface: BoundSurface) -> dict:
    """Global extrema and where they are attained (argmax lists truncated)."""
    argmax_beta = surface.argmax_beta_max()
    argmin_beta = surface.argmin_beta_max()
    argmax_alpha = surface.argmax_alpha_max()
    return {
        "resolution": surface.resolution,
        "max_beta_max": surface.max_beta_max,
        "min_beta_max": surface.min_beta_max,
        "max_alpha_max": surface.max_alpha_max,
        "min_alpha_max": surface.min_alpha_max,
        "argmax_beta_max_count": len(argmax_beta),
        "argmax_beta_max": _truncated(argmax_beta),
        "argmin_beta_max_count": len(argmin_beta),
        "argmin_beta_max": _truncated(argmin_beta),
        "argmax_alpha_max_count": len(argmax_alpha),
        "argmax_alpha_max": _truncated(argmax_alpha),
        "theorem_beta_ok": surface.max_beta_max <= 0.75 + THEOREM_ATOL,
        "theorem_alpha_ok": surface.max_alpha_max <= 1.0 + THEOREM_ATOL,
    }
