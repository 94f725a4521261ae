"""Shifted moment quadrature and the matching size prediction.

The central quantity is the window integral over [T, 2T] of
prod_k |zeta(1/2 + i(t + alpha_k))|^(2*beta_k), evaluated on a shared
modulus grid by exact index offsets: each shift is snapped to a grid
multiple, so one sampling sweep serves every shift and duplicate
shifts collapse to a single power exactly.

Predictions multiply T * (log T)^(sum beta_k^2) by pairwise one-line
zeta moduli at separation alpha_j - alpha_k, offset 1/log T.  Every
published moment carries a step-halving delta: the grid is sampled at
half the publication step, the published value uses every other
sample, and the delta compares the two quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CoverageError, DomainError
from .primes import PrimeInterval, half_square_sum, tapered_block_sum
from .sums import KahanAccumulator
from .zeta import ZetaGrid, zeta_one_line

_Q_CHUNK = 1 << 20          # quadrature nodes per chunk; fixed for determinism
STEP_LIMIT = 0.05           # moment grids must resolve the unit-scale wiggle
_SNAP_WARN = 1e-12          # residuals above this get reported


@dataclass(frozen=True)
class ShiftSpec:
    """One moment configuration: shifts, exponents, and the height T."""

    alpha: tuple
    beta: tuple
    t_height: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if len(self.alpha) != len(self.beta) or not self.alpha:
            raise DomainError(
                f"need matching nonempty shift/exponent vectors, got "
                f"{len(self.alpha)} and {len(self.beta)}")
        if self.t_height < 16.0:
            raise DomainError(f"height must be >= 16, got {self.t_height}")
        half_t = self.t_height / 2.0
        for a in self.alpha:
            if abs(a) > half_t:
                raise DomainError(f"|shift| = {abs(a)} exceeds T/2 = {half_t}")
        for b in self.beta:
            if b < 0:
                raise DomainError(f"exponents must be >= 0, got {b}")

    @property
    def m(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class MomentReport:
    """Published moment plus the numbers that certify it."""

    moment: float
    prediction: float
    ratio: float
    quadrature_step: float
    step_halving_delta: float
    nsw_value: float | None
    rule: str
    snapped_alpha: tuple
    snap_residuals: tuple
    warnings: tuple


def snap_shifts(alpha, step: float):
    """Round each shift to the nearest grid multiple of `step`.

    Returns (snapped, residuals); residual = alpha_k - snapped_k.
    """
    snapped, residuals = [], []
    for a in alpha:
        s = step * round(a / step)
        snapped.append(s)
        residuals.append(a - s)
    return tuple(snapped), tuple(residuals)


def _shift_groups(grid: ZetaGrid, t_lo: float, snapped, beta):
    """Merge shifts landing on the same grid node; drop zero exponents.

    Returns sorted (base_index, exponent_sum) pairs, so products are
    evaluated in a canonical order regardless of input permutation.
    """
    groups: dict[int, float] = {}
    for a, b in zip(snapped, beta):
        if b == 0.0:
            continue
        base = grid.index_of(t_lo + a)
        groups[base] = groups.get(base, 0.0) + b
    return sorted(groups.items())


def _quadrature(grid: ZetaGrid, groups, n_steps: int, partial: float,
                rule: str) -> float:
    """Composite quadrature of prod moduli[base + i]^(2*beta) over
    nodes i = 0..n_steps, plus an interpolated partial end cell.

    Simpson needs an even interval count; an odd count runs Simpson on
    the first n-1 intervals and a trapezoid on the last.  Chunked with
    compensated merging, single threaded: bit-deterministic.
    """
    if rule not in ("simpson", "trapezoid"):
        raise DomainError(f"unknown quadrature rule {rule!r}")
    h = grid.step
    moduli = grid.moduli()
    n_nodes = n_steps + 1

    simpson_top = n_steps if n_steps % 2 == 0 else n_steps - 1
    use_simpson = rule == "simpson" and n_steps >= 2

    def node_values(i0: int, i1: int) -> np.ndarray:
        out = None
        for base, b in groups:
            seg = np.power(moduli[base + i0:base + i1], 2.0 * b)
            out = seg if out is None else out * seg
        if out is None:
            out = np.ones(i1 - i0, dtype=np.float64)
        return out

    acc = KahanAccumulator()
    for i0 in range(0, n_nodes, _Q_CHUNK):
        i1 = min(i0 + _Q_CHUNK, n_nodes)
        vals = node_values(i0, i1)
        idx = np.arange(i0, i1, dtype=np.int64)
        if use_simpson:
            # 1,4,2,4,...,4,1 over 0..simpson_top, then trapezoid tail
            w = np.where(idx % 2 == 1, 4.0, 2.0) / 3.0
            w[idx == 0] = 1.0 / 3.0
            w[idx == simpson_top] = 1.0 / 3.0
            w[idx > simpson_top] = 0.0
            if simpson_top < n_steps:      # one trailing trapezoid cell
                w[idx == simpson_top] += 0.5
                w[idx == n_steps] = 0.5
        else:
            w = np.ones(i1 - i0, dtype=np.float64)
            w[idx == 0] = 0.5
            w[idx == n_steps] = 0.5
            if n_steps == 0:
                w[idx == 0] = 0.0
        acc.add(float(np.add.reduce(vals * w)) * h)
    if partial > 0.0:
        f_lo = float(node_values(n_steps, n_steps + 1)[0])
        f_hi = float(node_values(n_steps + 1, n_steps + 2)[0])
        f_end = f_lo + (partial / h) * (f_hi - f_lo)
        acc.add(partial * (f_lo + f_end) / 2.0)
    return acc.total


def shifted_moment(
    spec: ShiftSpec,
    grid: ZetaGrid,
    *,
    rule: str = "simpson",
    window_offset: float = 0.0,
) -> float:
    """Quadrature of the shifted product over [T, 2T] (+offset).

    Shifts snap to grid multiples; the window start must lie on the
    grid.  `window_offset` translates the window, which together with
    translating every shift the opposite way leaves the value exactly
    unchanged on snapped data.
    """
    if grid.step > STEP_LIMIT + 1e-15:
        raise CoverageError(
            f"grid step {grid.step} exceeds the {STEP_LIMIT} resolution bound")
    t_len = spec.t_height
    snapped, _ = snap_shifts(spec.alpha, grid.step)
    t_lo = t_len + window_offset
    groups = _shift_groups(grid, t_lo, snapped, spec.beta)

    h = grid.step
    n_steps = int(math.floor(t_len / h + 1e-9))
    partial = t_len - n_steps * h
    if partial < 1e-9 * h:
        partial = 0.0
    need_top = n_steps + (2 if partial > 0.0 else 0)
    for base, _ in groups:
        if base < 0 or base + need_top >= grid.count:
            raise CoverageError(
                f"grid [{grid.t_start}, {grid.t_stop}] cannot cover the "
                f"window [{t_lo}, {t_lo + t_len}] for all shifts")
    if not groups:
        # all exponents zero: the integrand is identically 1
        return t_len
    return _quadrature(grid, groups, n_steps, partial, rule)


def subsample_grid(grid: ZetaGrid, factor: int = 2) -> ZetaGrid:
    """Every `factor`-th sample as a coarser grid over the same span."""
    if factor < 1:
        raise DomainError(f"subsample factor must be >= 1, got {factor}")
    return replace(grid, step=grid.step * factor,
                   values=grid.values[::factor])


def predict_bound(spec: ShiftSpec, one_line=zeta_one_line) -> float:
    """Size prediction T (log T)^(sum beta^2) times the pairwise
    one-line moduli at the shift differences, offset 1/log T."""
    log_t = math.log(spec.t_height)
    offset = 1.0 / log_t
    value = spec.t_height * log_t ** math.fsum(b * b for b in spec.beta)
    for j in range(spec.m):
        for k in range(j + 1, spec.m):
            w = 2.0 * spec.beta[j] * spec.beta[k]
            if w == 0.0:
                continue
            point = one_line(spec.alpha[j] - spec.alpha[k], offset)
            value *= point.modulus ** w
    return value


def nsw_F(alpha1: float, alpha2: float, t_height: float) -> float:
    """Piecewise comparison factor for a shift pair.

    min(1/|d|, log T) when |d| <= 1/100 (so d = 0 gives log T), and
    log(2 + |d|) beyond the breakpoint.
    """
    if t_height < 16.0:
        raise DomainError(f"height must be >= 16, got {t_height}")
    d = abs(alpha1 - alpha2)
    log_t = math.log(t_height)
    if d <= 0.01:
        return log_t if d == 0.0 else min(1.0 / d, log_t)
    return math.log(2.0 + d)


def moment_report(
    spec: ShiftSpec,
    fine_grid: ZetaGrid,
    *,
    rule: str = "simpson",
    window_offset: float = 0.0,
) -> MomentReport:
    """Published moment at step 2*fine_grid.step with its halving delta.

    The fine grid is sampled at half the publication step; the
    published value uses every other sample and the delta is the
    relative gap to the full-resolution quadrature.
    """
    pub_grid = subsample_grid(fine_grid, 2)
    step = pub_grid.step
    snapped, residuals = snap_shifts(spec.alpha, step)
    snapped_spec = replace(spec, alpha=snapped)
    moment = shifted_moment(
        snapped_spec, pub_grid, rule=rule, window_offset=window_offset)
    fine_val = shifted_moment(
        snapped_spec, fine_grid, rule=rule, window_offset=window_offset)
    scale = max(abs(fine_val), 1e-300)
    halving = abs(moment - fine_val) / scale

    warnings = []
    worst = max((abs(r) for r in residuals), default=0.0)
    if worst > _SNAP_WARN:
        warnings.append(
            f"shifts snapped to step {step} grid, max residual {worst:.3e}")
    prediction = predict_bound(spec)
    nsw = nsw_F(spec.alpha[0], spec.alpha[1], spec.t_height) if spec.m == 2 else None
    return MomentReport(
        moment=moment,
        prediction=prediction,
        ratio=moment / prediction,
        quadrature_step=step,
        step_halving_delta=halving,
        nsw_value=nsw,
        rule=rule,
        snapped_alpha=snapped,
        snap_residuals=residuals,
        warnings=tuple(warnings),
    )


def lemma21_rhs(
    t_values,
    alpha: float,
    x_cutoff: float,
    engines,
    *,
    t_height: float | None = None,
):
    """Surrogate majorant for log|zeta| on the half line: the tapered
    prime sum at sigma = 1/2 + 1/log X, the half square sum over primes
    up to min(sqrt X, log T), and the ratio log T / log X.  The bounded
    remainder is deliberately not included; audits measure it.
    """
    table = getattr(engines, "table", engines)
    t = np.asarray(t_values, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if x_cutoff < 2.0:
        raise DomainError(f"cutoff must be >= 2, got {x_cutoff}")
    if t_height is None:
        t_height = float(t.min())
    if x_cutoff > t_height * t_height * (1 + 1e-12):
        raise DomainError(
            f"cutoff {x_cutoff} exceeds T^2 = {t_height * t_height}")
    log_x = math.log(x_cutoff)
    log_t = math.log(t_height)
    shifted = t + alpha

    sigma = 0.5 + 1.0 / log_x
    term1 = tapered_block_sum(
        table, PrimeInterval(1.0, x_cutoff), x_cutoff, sigma, shifted).real

    square_top = min(math.sqrt(x_cutoff), log_t)
    if square_top > 2.0 - 1e-12:
        band = PrimeInterval(1.0, square_top)
        term2 = half_square_sum(table, band, 0.5, shifted).real
    else:
        term2 = np.zeros_like(term1)

    out = term1 + term2 + log_t / log_x
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class CurveRow:
    """One correlation-curve sample at separation delta."""

    delta: float
    moment: float
    prediction: float
    ratio: float
    nsw_value: float
    step_halving_delta: float


def correlation_curve(
    t_height: float,
    beta_value: float,
    deltas,
    fine_grid: ZetaGrid,
    *,
    rule: str = "simpson",
) -> list:
    """Two-shift decorrelation sweep: one row per separation delta,
    with shifts (0, delta) and equal exponents."""
    rows = []
    for d in deltas:
        spec = ShiftSpec(alpha=(0.0, float(d)), beta=(beta_value, beta_value),
                         t_height=t_height)
        rep = moment_report(spec, fine_grid, rule=rule)
        rows.append(CurveRow(
            delta=float(d),
            moment=rep.moment,
            prediction=rep.prediction,
            ratio=rep.ratio,
            nsw_value=rep.nsw_value,
            step_halving_delta=rep.step_halving_delta,
        ))
    return rows
