"""Prime tables, tapered prime sums, and the on-disk prime cache.

Interval convention used throughout the package: a range (lo, hi] is
open on the left and closed on the right, matching how the block
decomposition slices the primes.  `primes_between` implements exactly
that.

The vectorized sums reduce over primes in fixed-size chunks (see
`sums.SUM_CHUNK`) so results do not depend on how a caller splits the
evaluation grid across workers.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    CacheFormatError,
    ConfigError,
    DomainError,
    InsufficientSieveError,
)
from .sums import SUM_CHUNK

_PRIME_MAGIC = b"ZPRM"
_PRIME_VERSION = 1
_SIEVE_LIMIT_MAX = 1_000_000_000
_SEGMENT_ODDS = 1 << 21  # odd numbers per sieve segment (~2 MB of flags)

# prime-axis chunk for the vectorized sums; fixed for determinism
_P_CHUNK = 2048
# grid-axis chunk; bounds the outer-product workspace at ~128 MB
_T_CHUNK = 4096


@dataclass(frozen=True)
class PrimeInterval:
    """Primes p with lo < p <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise DomainError(f"empty prime interval ({self.lo}, {self.hi}]")

    def contains(self, p: float) -> bool:
        return self.lo < p <= self.hi


@dataclass
class PrimeTable:
    """All primes up to `limit`, ascending, as uint64."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())

    def primes_between(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo < p <= hi, as a read-only view."""
        if hi > self.limit:
            raise InsufficientSieveError(
                f"table sieved to {self.limit}, range asks for {hi}")
        i = np.searchsorted(self.primes, lo, side="right")
        j = np.searchsorted(self.primes, hi, side="right")
        return self.primes[i:j]

    def in_interval(self, interval: PrimeInterval) -> np.ndarray:
        return self.primes_between(interval.lo, interval.hi)

    def count_below(self, x: float) -> int:
        """Number of primes <= x."""
        if x > self.limit:
            raise InsufficientSieveError(
                f"table sieved to {self.limit}, count asked at {x}")
        return int(np.searchsorted(self.primes, x, side="right"))


def sieve_primes(limit: int) -> PrimeTable:
    """Segmented sieve of all primes <= limit."""
    limit = int(limit)
    if limit < 2 or limit > _SIEVE_LIMIT_MAX:
        raise ConfigError(
            f"sieve limit must lie in [2, {_SIEVE_LIMIT_MAX}], got {limit}")

    root = int(math.isqrt(limit))
    # base sieve over odds up to root
    base_flags = np.ones((root // 2) + 1, dtype=bool)  # index i -> 2i+1
    base_flags[0] = False  # 1 is not prime
    for i in range(1, (int(math.isqrt(root)) // 2) + 1):
        if base_flags[i]:
            p = 2 * i + 1
            start = (p * p) // 2
            base_flags[start::p] = False
    base_odd = (2 * np.nonzero(base_flags)[0] + 1).astype(np.uint64)

    chunks = [np.array([2], dtype=np.uint64)] if limit >= 2 else []
    lo = 3
    while lo <= limit:
        hi = min(lo + 2 * _SEGMENT_ODDS - 1, limit)
        n_odds = (hi - lo) // 2 + 1
        flags = np.ones(n_odds, dtype=bool)  # index i -> lo + 2i
        for p in base_odd.tolist():
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start > hi:
                continue
            flags[(start - lo) // 2::p] = False
        seg = (np.uint64(lo) + 2 * np.nonzero(flags)[0].astype(np.uint64))
        chunks.append(seg)
        lo = hi + 2 if hi % 2 == 1 else hi + 1
    primes = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.uint64)
    primes = primes[primes <= limit]
    return PrimeTable(limit=limit, primes=primes)


def write_prime_cache(table: PrimeTable, path) -> None:
    """Serialize a table to `path` (a filename or a binary file object)."""
    payload = np.ascontiguousarray(table.primes, dtype="<u8").tobytes()
    header = _PRIME_MAGIC + struct.pack(
        "<IQQ", _PRIME_VERSION, table.limit, len(table))
    if hasattr(path, "write"):
        path.write(header)
        path.write(payload)
        return
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_prime_cache(path) -> PrimeTable:
    if hasattr(path, "read"):
        blob = path.read()
    else:
        with open(path, "rb") as fh:
            blob = fh.read()
    if len(blob) < 24 or blob[:4] != _PRIME_MAGIC:
        raise CacheFormatError(f"{path}: not a prime cache")
    version, limit, count = struct.unpack("<IQQ", blob[4:24])
    if version != _PRIME_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if len(blob) != 24 + 8 * count:
        raise CacheFormatError(
            f"{path}: payload length {len(blob) - 24} != 8 * {count}")
    primes = np.frombuffer(blob, dtype="<u8", offset=24).astype(np.uint64)
    if count:
        if primes[0] < 2 or primes[-1] > limit:
            raise CacheFormatError(f"{path}: primes outside [2, limit]")
        if np.any(np.diff(primes.astype(np.int64)) <= 0):
            raise CacheFormatError(f"{path}: primes not strictly ascending")
    return PrimeTable(limit=int(limit), primes=primes)


def taper_weight(p: float, x_cutoff: float) -> float:
    """Logarithmic taper log(X/p)/log(X); 1 near p=1, 0 at p=X."""
    if x_cutoff <= 1:
        raise DomainError(f"taper cutoff must exceed 1, got {x_cutoff}")
    if not (2 <= p <= x_cutoff):
        raise DomainError(f"taper weight needs 2 <= p <= {x_cutoff}, got {p}")
    return math.log(x_cutoff / p) / math.log(x_cutoff)


def reciprocal_prime_sum(table: PrimeTable, x_cutoff: float) -> float:
    """Sum of 1/p over primes p <= x_cutoff."""
    ps = table.primes_between(1, x_cutoff).astype(np.float64)
    if ps.size == 0:
        return 0.0
    acc = 0.0
    for lo in range(0, ps.size, SUM_CHUNK):
        acc += float(np.add.reduce(1.0 / ps[lo:lo + SUM_CHUNK]))
    return acc


def pretentious_cos_sum(table: PrimeTable, x_cutoff: float, deltas) -> np.ndarray:
    """sum over p <= X of cos(delta * log p) / p, vectorized in delta.

    This is the prime-side quantity that tracks log|zeta| just right of
    the 1-line at height delta; it is even in delta.
    """
    if x_cutoff < 2:
        raise DomainError(f"cutoff must be >= 2, got {x_cutoff}")
    ps = table.primes_between(1, x_cutoff).astype(np.float64)
    d = np.asarray(deltas, dtype=np.float64)
    scalar = d.ndim == 0
    d = np.atleast_1d(d)
    out = np.zeros(d.shape, dtype=np.complex128)
    _chunked_weighted_phase_sum(ps, 1.0 / ps, d, out)
    real = np.ascontiguousarray(out.real)
    return float(real[0]) if scalar else real


def _chunked_weighted_phase_sum(ps, amp, t_values, out):
    """out[k] += sum_p amp[p] * exp(-i * t_values[k] * log p).

    Chunked on both axes; only the prime axis is reduced, with fixed
    chunk boundaries and compensated cross-chunk accumulation, so the
    result is independent of how callers partition the grid.
    """
    logp = np.log(ps)
    t = np.asarray(t_values, dtype=np.float64)
    for t_lo in range(0, t.size, _T_CHUNK):
        tc = t[t_lo:t_lo + _T_CHUNK]
        acc = np.zeros(tc.shape, dtype=np.complex128)
        comp = np.zeros_like(acc)
        for lo in range(0, ps.size, _P_CHUNK):
            lp = logp[lo:lo + _P_CHUNK]
            am = amp[lo:lo + _P_CHUNK]
            # rows: grid points; columns: primes
            phase = np.multiply.outer(tc, lp)
            block = np.add.reduce(am * np.exp(-1j * phase), axis=1)
            y = block - comp
            tot = acc + y
            comp = (tot - acc) - y
            acc = tot
        out[t_lo:t_lo + _T_CHUNK] += acc
    return out


def tapered_block_sum(
    table: PrimeTable,
    interval: PrimeInterval,
    x_cutoff: float,
    sigma: float,
    t_values,
) -> np.ndarray:
    """Tapered prime Dirichlet sum over an interval, vectorized in t.

    Returns, for each t, sum over primes p in (lo, hi] of
    p^(-sigma - i t) * log(X/p) / log(X).
    """
    if x_cutoff <= 1:
        raise DomainError(f"cutoff must exceed 1, got {x_cutoff}")
    if interval.hi > x_cutoff:
        raise DomainError(
            f"interval top {interval.hi} exceeds taper cutoff {x_cutoff}")
    ps = table.in_interval(interval).astype(np.float64)
    t = np.asarray(t_values, dtype=np.float64)
    out = np.zeros(t.shape, dtype=np.complex128)
    if ps.size == 0:
        return out
    amp = ps ** (-sigma) * (np.log(x_cutoff / ps) / math.log(x_cutoff))
    return _chunked_weighted_phase_sum(ps, amp, t, out)


def tapered_prime_sum(
    table: PrimeTable, x_cutoff: float, s: complex
) -> complex:
    """Scalar tapered sum over all primes p <= x_cutoff at one point s."""
    interval = PrimeInterval(1.0, float(x_cutoff))
    return tapered_block_value(table, interval, x_cutoff, s)


def tapered_block_value(
    table: PrimeTable,
    interval: PrimeInterval,
    x_cutoff: float,
    s: complex,
) -> complex:
    """Scalar tapered prime sum over one interval at one point s."""
    s = complex(s)
    out = tapered_block_sum(
        table, interval, x_cutoff, s.real, np.array([s.imag]))
    return complex(out[0])


def half_square_sum(
    table: PrimeTable,
    interval: PrimeInterval,
    sigma: float,
    t_values,
) -> np.ndarray:
    """Prime-square tail sum, vectorized in t.

    Returns, for each t, sum over p in (lo, hi] of p^(-2(sigma + i t))/2.
    """
    ps = table.in_interval(interval).astype(np.float64)
    t = np.asarray(t_values, dtype=np.float64)
    out = np.zeros(t.shape, dtype=np.complex128)
    if ps.size == 0:
        return out
    amp = 0.5 * ps ** (-2.0 * sigma)
    return _chunked_weighted_phase_sum(ps, amp, 2.0 * t, out)


def square_band_interval(band: int) -> PrimeInterval:
    """The prime band (e^l, e^(l+1)] backing the l-th square sum."""
    if not (isinstance(band, int) and band >= 1):
        raise DomainError(f"band index must be an int >= 1, got {band}")
    return PrimeInterval(math.exp(band), math.exp(band + 1))


def prime_square_value(table: PrimeTable, band: int, s: complex) -> complex:
    """Scalar square-band sum sum_{e^l < p <= e^(l+1)} p^(-2s) / 2."""
    s = complex(s)
    out = half_square_sum(
        table, square_band_interval(band), s.real, np.array([s.imag]))
    return complex(out[0])


def prime_sum_cos(delta: float, x_cutoff: float, table: PrimeTable) -> float:
    """Point form of the reciprocal cosine sum: sum cos(delta log p)/p."""
    return float(pretentious_cos_sum(table, x_cutoff, float(delta)))


def prime_block_sum(
    interval: PrimeInterval, x_cutoff: float, s: complex, table: PrimeTable
) -> complex:
    """Point form of the tapered interval sum at one s."""
    return tapered_block_value(table, interval, x_cutoff, s)


def prime_square_poly(band, s: complex, table: PrimeTable) -> complex:
    """Point form of the square-band sum; `band` may also be a
    PrimeInterval, covering synthetic (possibly prime-free) bands."""
    if isinstance(band, PrimeInterval):
        out = half_square_sum(
            table, band, complex(s).real, np.array([complex(s).imag]))
        return complex(out[0])
    return prime_square_value(table, band, s)
