"""Block decomposition of the sampling range and point classification.

A scheme slices the primes into blocks (T_{j-1}, T_j] with cutoffs K_j
that shrink as the blocks grow, plus square-sum bands (e^l, e^(l+1)]
with thresholds J_l.  Points t are classified by whether every tapered
block polynomial stays under its cutoff (good), which block fails
first (bad index), and the largest square band over threshold (square
index).  Shift tuples get the induced partition label.

With the published scale constant the first block only activates at
astronomically large heights; `exponent_scale_override` keeps every
structural relation but lets desk-scale runs have L >= 1.  A scheme
that still ends up with L = 0 is flagged degenerate and classifies
every point as (vacuously) good.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientSieveError, ResourceError
from .primes import (
    PrimeInterval,
    PrimeTable,
    half_square_sum,
    square_band_interval,
    tapered_block_sum,
)

_LEVELS_MAX = 64
T_HEIGHT_MIN = 16.0


def beta_star(betas) -> float:
    """sum of max(1, beta_k); the scale constant behind all degree caps."""
    betas = [float(b) for b in betas]
    if not betas:
        raise DomainError("need at least one exponent")
    if any(b < 0 for b in betas):
        raise DomainError(f"exponents must be >= 0, got {betas}")
    return math.fsum(max(1.0, b) for b in betas)


def default_exponent_scale(bs: float) -> float:
    """Published scale constant 1/(200 * beta_star^2)."""
    return 1.0 / (200.0 * bs * bs)


def square_threshold(band: int) -> float:
    """Threshold J_l = e^(-l/10) for the l-th square band."""
    if band < 1:
        raise DomainError(f"band index must be >= 1, got {band}")
    return math.exp(-band / 10.0)


@dataclass(frozen=True)
class BlockScheme:
    """Block boundaries and cutoffs for one height T.

    All boundary data is kept in log space (`log_t`, `log_t_seq`) so
    schemes remain exact even when T itself overflows a double; the
    float `t_seq` mirrors are infinity in that regime.
    """

    log_t: float
    betas: tuple
    beta_star: float
    exponent_scale: float
    levels: int
    log_t_seq: tuple      # log T_0 .. log T_L
    k_seq: tuple          # K_1 .. K_L

    @property
    def degenerate(self) -> bool:
        return self.levels == 0

    @property
    def t_height(self) -> float:
        return math.exp(self.log_t) if self.log_t < 709.0 else math.inf

    @property
    def t_seq(self) -> tuple:
        return tuple(
            math.exp(x) if x < 709.0 else math.inf for x in self.log_t_seq)

    @property
    def log2_t(self) -> float:
        return math.log(self.log_t)

    @property
    def log3_t(self) -> float:
        return math.log(self.log2_t)

    @property
    def square_band_count(self) -> int:
        """Bands 1..floor(log2 T) participate in classification."""
        return int(math.floor(self.log2_t))

    @property
    def ell_cap(self) -> int:
        """Partition labels cap square indices at floor(2 * log3 T)."""
        return max(0, int(math.floor(2.0 * self.log3_t)))

    def sigma0(self, s_index: int, *, abscissa: str = "half") -> float:
        """Classification abscissa for the cutoff at T_s.

        The half convention (1/2 + 1/log T_s) is the one every other
        piece of the apparatus is consistent with; "one" switches to
        1 + 1/log T_s, kept as an explicitly selectable variant.
        """
        if not (1 <= s_index <= self.levels):
            raise DomainError(f"scale index {s_index} outside 1..{self.levels}")
        base = {"half": 0.5, "one": 1.0}.get(abscissa)
        if base is None:
            raise DomainError(f"unknown abscissa variant {abscissa!r}")
        return base + 1.0 / self.log_t_seq[s_index]

    def block_interval(self, j: int) -> PrimeInterval:
        if not (1 <= j <= self.levels):
            raise DomainError(f"block index {j} outside 1..{self.levels}")
        return PrimeInterval(self.t_seq[j - 1], self.t_seq[j])


def build_scheme(
    t_height: float | None = None,
    betas=(1.0,),
    exponent_scale_override: float | None = None,
    *,
    log_t: float | None = None,
) -> BlockScheme:
    """Construct the block scheme at height T.

    Pass either `t_height` or `log_t` (the latter admits heights whose
    T overflows a double).  Without an override the published scale
    constant applies, and any desk-scale T yields a degenerate scheme.
    """
    if (t_height is None) == (log_t is None):
        raise DomainError("pass exactly one of t_height and log_t")
    if log_t is None:
        if t_height < T_HEIGHT_MIN:
            raise DomainError(
                f"height must be >= {T_HEIGHT_MIN}, got {t_height}")
        log_t = math.log(t_height)
    elif log_t < math.log(T_HEIGHT_MIN):
        raise DomainError(f"log height {log_t} below log {T_HEIGHT_MIN}")
    betas = tuple(float(b) for b in betas)
    bs = beta_star(betas)
    scale = (default_exponent_scale(bs) if exponent_scale_override is None
             else float(exponent_scale_override))
    if scale <= 0:
        raise DomainError(f"exponent scale must be positive, got {scale}")

    l2 = math.log(log_t)
    # T_j = T^(e^(j-1) / (log2 T)^2) <= T^scale needs e^(j-1) <= scale*l2^2
    budget = scale * l2 * l2
    levels = int(math.floor(1.0 + math.log(budget) + 1e-12)) if budget >= 1.0 else 0
    if levels > _LEVELS_MAX:
        raise ResourceError(f"scheme would have {levels} levels (cap {_LEVELS_MAX})")

    log_t_seq = [math.log(2.0)]
    for j in range(1, levels + 1):
        log_t_seq.append(log_t * math.exp(j - 1) / (l2 * l2))
    k_seq = [l2 ** 1.5 * math.exp(-j / 2.0) for j in range(1, levels + 1)]
    for a, b in zip(log_t_seq, log_t_seq[1:]):
        if not a < b:
            raise DomainError("block boundaries failed to increase")
    for a, b in zip(k_seq, k_seq[1:]):
        if not a > b:
            raise DomainError("block cutoffs failed to decrease")
    return BlockScheme(
        log_t=float(log_t),
        betas=betas,
        beta_star=bs,
        exponent_scale=scale,
        levels=levels,
        log_t_seq=tuple(log_t_seq),
        k_seq=tuple(k_seq),
    )


class SieveBlockEngines:
    """Real evaluators for the block and square-band sums."""

    def __init__(self, scheme: BlockScheme, table: PrimeTable,
                 *, abscissa: str = "half"):
        self.scheme = scheme
        self.table = table
        self.abscissa = abscissa
        if scheme.levels >= 1:
            top = scheme.t_seq[scheme.levels]
            if not math.isfinite(top) or top > table.limit:
                raise InsufficientSieveError(
                    f"scheme blocks reach {top}, sieve covers {table.limit}")

    def block_sum(self, j: int, s: int, t_values) -> np.ndarray:
        """P over block j, tapered at T_s, on the classification line."""
        scheme = self.scheme
        if not (1 <= j <= s <= scheme.levels):
            raise DomainError(f"need 1 <= j <= s <= L, got j={j}, s={s}")
        return tapered_block_sum(
            self.table,
            scheme.block_interval(j),
            scheme.t_seq[s],
            scheme.sigma0(s, abscissa=self.abscissa),
            t_values,
        )

    def square_sum(self, band: int, t_values) -> np.ndarray:
        """Q over the band (e^l, e^(l+1)] on the half line."""
        return half_square_sum(
            self.table, square_band_interval(band), 0.5, t_values)


class SyntheticBlockEngines:
    """Injectable evaluators for exercising classifier logic in tests.

    `block_fn(j, s, t_values)` and `square_fn(band, t_values)` return
    arrays shaped like t_values.
    """

    def __init__(self, scheme: BlockScheme, block_fn=None, square_fn=None):
        self.scheme = scheme
        self._block_fn = block_fn or (
            lambda j, s, t: np.zeros(np.shape(t), dtype=np.complex128))
        self._square_fn = square_fn or (
            lambda band, t: np.zeros(np.shape(t), dtype=np.complex128))

    def block_sum(self, j, s, t_values):
        return np.asarray(self._block_fn(j, s, np.asarray(t_values)))

    def square_sum(self, band, t_values):
        return np.asarray(self._square_fn(band, np.asarray(t_values)))


@dataclass
class GridClassification:
    """Vector classification of a t grid.

    bad_index[k] = 0 means good; j >= 1 means the smallest failing
    block.  square_index[k] = 0 means no band over threshold; l >= 1 is
    the largest band over threshold within the evaluated range.
    """

    t_values: np.ndarray
    bad_index: np.ndarray
    square_index: np.ndarray
    band_count: int
    gb_vacuous: bool

    @property
    def good(self) -> np.ndarray:
        return self.bad_index == 0


@dataclass(frozen=True)
class PointClass:
    """Classification of a single point."""

    t: float
    good: bool
    bad_index: int | None
    square_index: int
    gb_vacuous: bool = False


def classify_grid(
    t_values,
    scheme: BlockScheme,
    engines,
    *,
    band_count: int | None = None,
) -> GridClassification:
    """Classify every grid point; smallest failing block wins.

    `band_count` widens (or narrows) the square-band range; the default
    is the scheme's floor(log2 T).  All comparisons are strict
    exceedance, so boundary values count as within threshold.
    """
    t = np.asarray(t_values, dtype=np.float64)
    if t.size == 0:
        raise DomainError("cannot classify an empty grid")
    if band_count is None:
        band_count = scheme.square_band_count
    bad = np.zeros(t.shape, dtype=np.int16)
    for j in range(1, scheme.levels + 1):
        exceeded = np.zeros(t.shape, dtype=bool)
        for s in range(j, scheme.levels + 1):
            vals = engines.block_sum(j, s, t)
            exceeded |= np.abs(vals) > scheme.k_seq[j - 1]
        bad = np.where((bad == 0) & exceeded, np.int16(j), bad)
    square = np.zeros(t.shape, dtype=np.int16)
    for band in range(1, band_count + 1):
        vals = engines.square_sum(band, t)
        over = np.abs(vals) > square_threshold(band)
        square = np.where(over, np.int16(band), square)
    return GridClassification(
        t_values=t,
        bad_index=bad,
        square_index=square,
        band_count=band_count,
        gb_vacuous=scheme.degenerate,
    )


def classify_point(
    t: float,
    scheme: BlockScheme,
    engines,
    *,
    band_count: int | None = None,
) -> PointClass:
    grid = classify_grid(np.array([t]), scheme, engines, band_count=band_count)
    j = int(grid.bad_index[0])
    return PointClass(
        t=float(t),
        good=j == 0,
        bad_index=j if j else None,
        square_index=int(grid.square_index[0]),
        gb_vacuous=grid.gb_vacuous,
    )


@dataclass
class ShiftPartitionLabel:
    """Partition cell of one shift tuple at one point.

    good_set holds the (1-based) shift indices whose translates are
    good; block_map sends each remaining index to its failing block.
    band_map holds per-shift square indices capped at the scheme's
    ell cap; band_sup is their max, attained first at k_star.
    """

    good_set: frozenset
    block_map: dict
    band_map: dict
    band_sup: int
    k_star: int
    raw_band_map: dict = field(default_factory=dict)

    @property
    def block_map_is_increasing(self) -> bool:
        keys = sorted(self.block_map)
        vals = [self.block_map[k] for k in keys]
        return all(a < b for a, b in zip(vals, vals[1:]))


def classify_shift_tuple(
    t: float,
    spec,
    scheme: BlockScheme,
    engines,
    *,
    band_count: int | None = None,
) -> ShiftPartitionLabel:
    """Partition label of (t + alpha_1, ..., t + alpha_m).

    `spec` is anything with an `alpha` attribute (a moment spec) or a
    plain sequence of shifts.
    """
    shifts = [float(a) for a in getattr(spec, "alpha", spec)]
    if not shifts:
        raise DomainError("need at least one shift")
    half_t = scheme.t_height / 2.0
    for a in shifts:
        if abs(a) > half_t:
            raise DomainError(f"|shift| = {abs(a)} exceeds T/2 = {half_t}")
    pts = np.array([t + a for a in shifts], dtype=np.float64)
    grid = classify_grid(pts, scheme, engines, band_count=band_count)
    good = frozenset(
        k + 1 for k in range(len(shifts)) if grid.bad_index[k] == 0)
    blocks = {
        k + 1: int(grid.bad_index[k])
        for k in range(len(shifts)) if grid.bad_index[k] != 0
    }
    cap = scheme.ell_cap
    raw = {k + 1: int(grid.square_index[k]) for k in range(len(shifts))}
    bands = {k: min(v, cap) for k, v in raw.items()}
    sup = max(bands.values())
    k_star = min(k for k, v in bands.items() if v == sup)
    return ShiftPartitionLabel(
        good_set=good,
        block_map=blocks,
        band_map=bands,
        band_sup=sup,
        k_star=k_star,
        raw_band_map=raw,
    )


@dataclass(frozen=True)
class MeasureEstimate:
    """Empirical fraction of a bad/square set, with the published
    rarity bound (in fraction scale, constant dropped) when one exists."""

    fraction: float
    bound: float | None
    hits: int
    total: int


def block_measure_bound(scheme: BlockScheme, j: int) -> float | None:
    """Fraction-scale rarity bound for the first block's bad set."""
    if j == 1:
        l2 = scheme.log2_t
        return math.exp(-l2 * l2 / 5.0)
    return None


def square_measure_bound(band: int) -> float:
    """Fraction-scale rarity bound e^(-l * e^(3l/4)) for band l."""
    if band < 1:
        raise DomainError(f"band index must be >= 1, got {band}")
    return math.exp(-band * math.exp(0.75 * band))


def estimate_bad_measure(
    scheme: BlockScheme,
    t_values,
    engines,
    which,
    *,
    band_count: int | None = None,
) -> MeasureEstimate:
    """Empirical fraction of grid points in one bad set.

    `which` is ("B", j) for a block bad set or ("C", l) for a square
    band set.  The grid must sit inside [T/2, 5T/2].
    """
    t = np.asarray(t_values, dtype=np.float64)
    if t.size == 0:
        raise DomainError("empty grid")
    half_t, top = scheme.t_height / 2.0, 2.5 * scheme.t_height
    if t.min() < half_t or t.max() > top:
        raise DomainError(
            f"grid [{t.min()}, {t.max()}] outside [{half_t}, {top}]")
    kind, index = which
    index = int(index)
    if kind == "C" and band_count is None:
        band_count = max(scheme.square_band_count, index)
    grid = classify_grid(t, scheme, engines, band_count=band_count)
    if kind == "B":
        if not (1 <= index <= scheme.levels):
            raise DomainError(
                f"block index {index} outside 1..{scheme.levels}")
        hits = int(np.count_nonzero(grid.bad_index == index))
        bound = block_measure_bound(scheme, index)
    elif kind == "C":
        if index < 1:
            raise DomainError(f"band index must be >= 1, got {index}")
        hits = int(np.count_nonzero(grid.square_index == index))
        bound = square_measure_bound(index)
    else:
        raise DomainError(f"unknown set kind {kind!r}")
    return MeasureEstimate(
        fraction=hits / t.size, bound=bound, hits=hits, total=int(t.size))
