"""Lifting the discrete construction to densities on an interval.

Pipeline: wrap the density from [-A, A] onto [0, 2A) (the negative half
moves up by 2A), cut [0, 2A) into p equal bins of width delta = 2A/p, and
quantize the wrapped value to its bin index. That turns the density into a
pmf on Z_p; the discrete machinery builds the code and the cell. Scaling the
lattice by delta and attaching a delta-cube to every cell point recovers the
continuous picture, whose divergence has a closed form for piecewise-linear
densities.

All breakpoint arithmetic (knots, bin edges, clipping) runs in exact
rationals so no mass ever straddles a boundary due to float fuzz; only the
final logarithmic integrals are evaluated in floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import eps_star
from .codes import LinearCode, sample_generator
from .distributions import (
    ContinuousTarget,
    DiscreteTarget,
    TypicalityParams,
    validate_discrete,
)
from .errors import NotPermissibleError
from .partition import (
    FundamentalRegion,
    build_ml_partition,
    build_typicality_partition,
)
from .zplinalg import ensure_prime

BOUND_TOL = 1e-9
_MIDPOINT_CUTOFF = 1e-9


@dataclass(frozen=True)
class LinearPiece:
    """One linear segment of the wrapped density, on [x0, x1)."""

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    def value(self, t: Fraction) -> Fraction:
        if self.x1 == self.x0:
            return self.y0
        return self.y0 + (self.y1 - self.y0) * (t - self.x0) / (self.x1 - self.x0)


def _pieces_from_knots(knots) -> list[LinearPiece]:
    out = []
    for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
        out.append(
            LinearPiece(Fraction(x0), Fraction(x1), Fraction(y0), Fraction(y1))
        )
    return out


def _split_at(pieces: list[LinearPiece], t: Fraction) -> list[LinearPiece]:
    out = []
    for pc in pieces:
        if pc.x0 < t < pc.x1:
            mid = pc.value(t)
            out.append(LinearPiece(pc.x0, t, pc.y0, mid))
            out.append(LinearPiece(t, pc.x1, mid, pc.y1))
        else:
            out.append(pc)
    return out


def fold_density(target: ContinuousTarget) -> tuple[LinearPiece, ...]:
    """Wrap the density onto [0, 2A): [0, A) stays, [-A, 0) moves up by 2A."""
    a = Fraction(target.half_width)
    pieces = _split_at(_pieces_from_knots(target.knots), Fraction(0))
    lower = [pc for pc in pieces if pc.x1 <= 0]
    upper = [pc for pc in pieces if pc.x0 >= 0]
    shifted = [
        LinearPiece(pc.x0 + 2 * a, pc.x1 + 2 * a, pc.y0, pc.y1) for pc in lower
    ]
    folded = sorted(upper + shifted, key=lambda pc: pc.x0)
    return tuple(folded)


def choose_delta(target: ContinuousTarget, p: int) -> Fraction:
    """Bin width 2A/p as an exact rational; p must be prime."""
    ensure_prime(p)
    return 2 * Fraction(target.half_width) / p


def _clip(pieces, lo: Fraction, hi: Fraction) -> list[LinearPiece]:
    """Restrict the piece list to [lo, hi), keeping endpoint values exact."""
    out = []
    for pc in pieces:
        u = max(pc.x0, lo)
        v = min(pc.x1, hi)
        if u < v:
            out.append(LinearPiece(u, v, pc.value(u), pc.value(v)))
    return out


def _bin_slices(folded, p: int, delta: Fraction) -> list[list[LinearPiece]]:
    return [_clip(folded, y * delta, (y + 1) * delta) for y in range(p)]


def bin_pdf(folded, p: int, delta: Fraction) -> DiscreteTarget:
    """Exact bin masses of the wrapped density, normalized by its total mass.

    The masses of a density that integrates to 1 + r for tiny r are divided
    by 1 + r, so the pmf is exactly normalized whatever rounding the caller's
    knot values carry.
    """
    ensure_prime(p)
    masses = []
    for chunks in _bin_slices(folded, p, delta):
        if any(pc.y0 <= 0 or pc.y1 <= 0 for pc in chunks):
            raise NotPermissibleError("density touches zero inside a bin")
        masses.append(
            sum(((pc.y0 + pc.y1) * (pc.x1 - pc.x0) / 2 for pc in chunks), Fraction(0))
        )
    total = sum(masses, Fraction(0))
    if total <= 0:
        raise NotPermissibleError("wrapped density has no mass")
    return validate_discrete([float(m / total) for m in masses], p)


def eta_and_r(folded, p: int, delta: Fraction) -> tuple[float, float]:
    """Conservative within-bin spread.

    r is the worst over bins of (smallest density value / largest density
    value) inside the bin; eta = delta / r bounds the reciprocal of the
    conditional density given the bin from above.
    """
    r = Fraction(1)
    for chunks in _bin_slices(folded, p, delta):
        vals = [v for pc in chunks for v in (pc.y0, pc.y1)]
        if not vals:
            raise NotPermissibleError("empty bin")
        lo, hi = min(vals), max(vals)
        if lo <= 0:
            raise NotPermissibleError("density touches zero inside a bin")
        r = min(r, lo / hi)
    return float(delta / r), float(r)


def _piece_log_integral(c0: float, c1: float, width: float) -> float:
    """Integral of ln(density) over one linear piece with endpoint values c0, c1."""
    if width == 0.0:
        return 0.0
    if abs(c1 - c0) <= _MIDPOINT_CUTOFF * max(c0, c1):
        return width * math.log(0.5 * (c0 + c1))
    slope = (c1 - c0) / width
    return ((c1 * math.log(c1) - c1) - (c0 * math.log(c0) - c0)) / slope


def mean_log2_by_bin(folded, p: int, delta: Fraction) -> np.ndarray:
    """L[b] = (1/delta) * integral over bin b of log2(density), closed form."""
    out = np.empty(p, dtype=np.float64)
    for y, chunks in enumerate(_bin_slices(folded, p, delta)):
        acc = 0.0
        for pc in chunks:
            acc += _piece_log_integral(
                float(pc.y0), float(pc.y1), float(pc.x1 - pc.x0)
            )
        out[y] = acc / math.log(2.0) / float(delta)
    return out


@dataclass(frozen=True, eq=False)
class ContinuousConstruction:
    """A binned target plus the discrete region built for it."""

    target: ContinuousTarget
    p: int
    delta: Fraction
    binned: DiscreteTarget
    code: LinearCode
    region: FundamentalRegion
    eta: float
    r: float

    @property
    def spread_penalty_bits(self) -> float:
        """-log2(r): the per-dimension price of within-bin density variation."""
        return -math.log2(self.r)


@dataclass(frozen=True, eq=False)
class ContinuousReport:
    D_total_bits: float
    D_per_dim: float
    bad_fraction: float
    epsilon: float
    eps_star: float
    spread_penalty_bits: float
    bound_per_dim: float
    bound_satisfied: bool
    delta: float
    eta: float
    r: float


def build_continuous(
    target: ContinuousTarget,
    p: int,
    n: int,
    k: int,
    seed,
    *,
    criterion: str = "typicality",
    tp: TypicalityParams | None = None,
    max_points: int | None = None,
) -> ContinuousConstruction:
    """Fold, bin, and build the discrete region for the binned pmf."""
    folded = fold_density(target)
    delta = choose_delta(target, p)
    binned = bin_pdf(folded, p, delta)
    code = sample_generator(seed, k, n, p)
    build = build_ml_partition if criterion == "ml" else build_typicality_partition
    region = build(code, binned, tp=tp, max_points=max_points)
    eta, r = eta_and_r(folded, p, delta)
    return ContinuousConstruction(
        target=target,
        p=p,
        delta=delta,
        binned=binned,
        code=code,
        region=region,
        eta=eta,
        r=r,
    )


def continuous_divergence(cc: ContinuousConstruction) -> ContinuousReport:
    """Exact divergence of the uniform-on-cell density from the product target.

    D = -log2(delta**n * |cell|) - mean over reps of sum_i L(rep_i), with L
    the per-bin average of log2(density). The reported ceiling adds the
    within-bin spread penalty to the discrete divergence budget.
    """
    region = cc.region
    n = region.code.n
    ltab = mean_log2_by_bin(fold_density(cc.target), cc.p, cc.delta)
    per_rep = ltab[region.reps].sum(axis=1)
    d = (
        -n * math.log2(float(cc.delta))
        - math.log2(region.size)
        - float(per_rep.sum()) / region.size
    )
    bf, budget, _ = eps_star(region, cc.binned)
    penalty = cc.spread_penalty_bits
    bound = budget + penalty
    return ContinuousReport(
        D_total_bits=d,
        D_per_dim=d / n,
        bad_fraction=bf,
        epsilon=region.epsilon,
        eps_star=budget,
        spread_penalty_bits=penalty,
        bound_per_dim=bound,
        bound_satisfied=bool(d / n <= bound + BOUND_TOL),
        delta=float(cc.delta),
        eta=cc.eta,
        r=cc.r,
    )


@dataclass(frozen=True, eq=False)
class LiftedCell:
    """The scaled lattice and cell: generator rows for delta*(code + p Z^n),
    cube side delta, and the cell as lower corners of delta-cubes."""

    scale: float
    generator_rows: np.ndarray
    cell_side: float
    cell_lower_corners: np.ndarray
    volume: float


def lift_region(region: FundamentalRegion, delta) -> LiftedCell:
    """Scale the integer construction by the bin width."""
    code = region.code
    d = float(delta)
    rows = np.vstack(
        [code.generator.astype(np.float64), code.p * np.eye(code.n)]
    )
    return LiftedCell(
        scale=d,
        generator_rows=d * rows,
        cell_side=d,
        cell_lower_corners=d * region.reps.astype(np.float64),
        volume=d**code.n * region.size,
    )
