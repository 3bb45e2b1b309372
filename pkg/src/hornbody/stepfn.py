"""Step functions on [0, 1) and the trace-algebra layer of the inequality
family.

A decreasing step function stands for the singular-value function
``t -> s(t)`` of an element of a tracial algebra: right-continuous,
nonincreasing, nonnegative, with finitely many pieces.  Breakpoints are kept
as exact rationals so that the measure bookkeeping (interval unions,
complements, overlaps with pieces) is exact; the only floating point enters
through the values and their logarithms.

The membership check here is the integral form of the matrix-level family:
for a triple ``(I, J, K)`` at level ``n``, the subset ``I`` turns into the
union ``F_I`` of the intervals ``[(i-1)/n, i/n]`` and the products of
selected singular values turn into integrals of ``log f`` over those
unions.  The full system quantifies over every level ``n``; the checker
truncates at a caller-chosen level and says so in its report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .combinatorics import (
    HornTriple,
    IndexSubset,
    TripleCatalog,
    bar,
    enumerate_catalog,
)
from .reports import (
    COMPLEMENT,
    FORWARD,
    InequalityRecord,
    MembershipReport,
    NEG_INF,
    default_log_tol,
    slack_of,
)
from .spectra import RngLike, haar_unitary, product_spectrum

ENDPOINT_TOL = 1e-12

RationalLike = Union[Fraction, int, float, str]


def _to_fraction(x: RationalLike) -> Fraction:
    """Exact rational from user input.

    Floats are converted exactly (every float is a dyadic rational) except
    that values within 1e-12 of the endpoints 0 and 1 snap to them; strings
    such as ``"3/4"`` are parsed exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if abs(x) <= ENDPOINT_TOL:
            return Fraction(0)
        if abs(x - 1.0) <= ENDPOINT_TOL:
            return Fraction(1)
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational breakpoint")


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous nonincreasing step function on [0, 1).

    ``values[j]`` is taken on ``[breakpoints[j], breakpoints[j+1])``.
    Adjacent pieces with equal values are merged on construction, so equality
    of step functions is equality of the maps they describe.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        breaks = tuple(_to_fraction(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(breaks) != len(vals) + 1:
            raise ValueError("need exactly one more breakpoint than values")
        if breaks[0] != 0 or breaks[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(breaks[i] >= breaks[i + 1] for i in range(len(breaks) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("values must be nonnegative")
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("values must be nonincreasing")
        merged_b = [breaks[0]]
        merged_v: list[float] = []
        for i, v in enumerate(vals):
            if merged_v and merged_v[-1] == v:
                merged_b[-1] = breaks[i + 1]
            else:
                merged_v.append(v)
                merged_b.append(breaks[i + 1])
        object.__setattr__(self, "breakpoints", tuple(merged_b))
        object.__setattr__(self, "values", tuple(merged_v))

    @classmethod
    def constant(cls, value: float) -> "StepFunction":
        return cls(breakpoints=(Fraction(0), Fraction(1)), values=(float(value),))

    def pieces(self) -> Iterator[tuple[Fraction, Fraction, float]]:
        for j, v in enumerate(self.values):
            yield self.breakpoints[j], self.breakpoints[j + 1], v

    def value_at(self, t: RationalLike) -> float:
        x = _to_fraction(t)
        if not 0 <= x < 1:
            raise ValueError("the function lives on [0, 1)")
        for lo, hi, v in self.pieces():
            if lo <= x < hi:
                return v
        raise AssertionError("unreachable: breakpoints cover [0, 1)")

    def scaled(self, c: float) -> "StepFunction":
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values))


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of closed subintervals of [0, 1] with rational endpoints,
    stored sorted, disjoint, and with touching intervals merged."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for lo, hi in self.intervals:
            lo, hi = _to_fraction(lo), _to_fraction(hi)
            if not (0 <= lo <= hi <= 1):
                raise ValueError(f"interval [{lo}, {hi}] must sit inside [0, 1]")
            if lo < hi:
                cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[tuple[Fraction, Fraction]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(intervals=())

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(intervals=((Fraction(0), Fraction(1)),))

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def complement(self) -> "IntervalSet":
        """Closure of [0, 1] minus this set."""
        out = []
        cursor = Fraction(0)
        for lo, hi in self.intervals:
            if cursor < lo:
                out.append((cursor, lo))
            cursor = hi
        if cursor < 1:
            out.append((cursor, Fraction(1)))
        return IntervalSet(intervals=tuple(out))


def interval_set(subset: Union[IndexSubset, Iterable[int]], n: Optional[int] = None) -> IntervalSet:
    """Union of the intervals ``[(i-1)/n, i/n]`` over the subset elements."""
    if isinstance(subset, IndexSubset):
        elements, n = subset.elements, subset.n
    else:
        if n is None:
            raise ValueError("n is required when passing bare indices")
        elements = tuple(sorted(subset))
    if n is not None and n < 1:
        raise ValueError("n must be positive")
    return IntervalSet(
        intervals=tuple((Fraction(i - 1, n), Fraction(i, n)) for i in elements)
    )


def complement_set(s: IntervalSet) -> IntervalSet:
    return s.complement()


def log_integral(f: StepFunction, s: IntervalSet) -> float:
    """Integral of ``log f`` over the interval set, in closed form.

    Returns ``-inf`` exactly when ``f`` vanishes on a positive-measure part
    of ``s``; overlap lengths are computed as exact rationals.
    """
    total = 0.0
    vanishing = False
    for lo, hi, v in f.pieces():
        overlap = Fraction(0)
        for a, b in s.intervals:
            cut_lo = max(lo, a)
            cut_hi = min(hi, b)
            if cut_lo < cut_hi:
                overlap += cut_hi - cut_lo
        if overlap > 0:
            if v == 0.0:
                vanishing = True
            else:
                total += float(overlap) * math.log(v)
    return NEG_INF if vanishing else total


def fk_determinant(f: StepFunction) -> float:
    """Log-determinant of the function: the integral of ``log f`` over [0, 1],
    ``-inf`` when ``f`` vanishes on positive measure."""
    return log_integral(f, IntervalSet.full())


def vn_inequality_check(
    f: StepFunction,
    g: StepFunction,
    h: StepFunction,
    triple: HornTriple,
    tol: Optional[float] = None,
) -> tuple[InequalityRecord, InequalityRecord]:
    """The forward and complementary integral inequalities for one triple.

    Forward: ``int_{F_I} log f + int_{F_J} log g <= int_{F_barK} log h``.
    Complementary (oriented as lhs <= rhs): the integral of ``log h`` over
    the complement of ``F_barK`` is at most the complementary integrals of
    the factors.
    """
    if tol is None:
        tol = default_log_tol(triple.n, f.values, g.values, h.values)
    fi = interval_set(triple.I)
    fj = interval_set(triple.J)
    fk = interval_set(bar(triple.K))
    lhs = log_integral(f, fi) + log_integral(g, fj)
    rhs = log_integral(h, fk)
    fwd = InequalityRecord(
        triple=triple, direction=FORWARD, lhs=lhs, rhs=rhs, slack=slack_of(lhs, rhs)
    )
    lhs_c = log_integral(h, fk.complement())
    rhs_c = log_integral(f, fi.complement()) + log_integral(g, fj.complement())
    comp = InequalityRecord(
        triple=triple,
        direction=COMPLEMENT,
        lhs=lhs_c,
        rhs=rhs_c,
        slack=slack_of(lhs_c, rhs_c),
    )
    return fwd, comp


def vn_membership(
    f: StepFunction,
    g: StepFunction,
    h: StepFunction,
    max_n: int = 6,
    tol: Optional[float] = None,
) -> MembershipReport:
    """Check the integral inequality family for every triple of every catalog
    up to level ``max_n``.

    The genuine condition quantifies over all levels; this is a finite
    truncation and the report's note says so.  Levels beyond the supported
    catalog range raise the catalog's capacity error.
    """
    if max_n < 1:
        raise ValueError("max_n must be positive")
    if tol is None:
        tol = default_log_tol(max_n, f.values, g.values, h.values)
    records: list[InequalityRecord] = []
    for n in range(1, max_n + 1):
        for t in enumerate_catalog(n):
            records.extend(vn_inequality_check(f, g, h, t, tol))
    return MembershipReport.from_records(
        records,
        tol,
        note=f"truncated at level {max_n} of an infinite inequality family",
    )


def discretize(f: StepFunction, n: int) -> np.ndarray:
    """Geometric averages of ``f`` over the ``n`` dyadic slots: entry ``j``
    is ``exp(n * int log f)`` over ``[(j-1)/n, j/n)``, and exactly 0 when
    ``f`` vanishes on part of the slot.

    When ``f`` is constant on a slot the value is returned exactly (no
    exp/log round trip), which makes discretization invert
    :func:`spectrum_to_step` on aligned data.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty(n)
    for j in range(1, n + 1):
        slot_lo = Fraction(j - 1, n)
        slot_hi = Fraction(j, n)
        seen: list[tuple[Fraction, float]] = []
        for lo, hi, v in f.pieces():
            cut_lo = max(lo, slot_lo)
            cut_hi = min(hi, slot_hi)
            if cut_lo < cut_hi:
                seen.append((cut_hi - cut_lo, v))
        if any(v == 0.0 for _, v in seen):
            out[j - 1] = 0.0
        elif len(seen) == 1:
            out[j - 1] = seen[0][1]
        else:
            out[j - 1] = math.exp(
                sum(float(n * length) * math.log(v) for length, v in seen)
            )
    # guard the weak monotonicity of geometric averages against rounding
    for j in range(1, n):
        if out[j] > out[j - 1]:
            out[j] = out[j - 1]
    return out


def spectrum_to_step(values: Sequence[float]) -> StepFunction:
    """Step function taking ``values[j]`` on ``[j/n, (j+1)/n)``."""
    vals = tuple(float(v) for v in values)
    n = len(vals)
    if n == 0:
        raise ValueError("need at least one value")
    return StepFunction(
        breakpoints=tuple(Fraction(j, n) for j in range(n + 1)), values=vals
    )


def matrix_model(
    f: StepFunction, g: StepFunction, n: int, seed: RngLike
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Finite model of the pair at level ``n``: both functions discretized
    and the product spectrum of their diagonal models coupled by one Haar
    unitary.  Returns ``(lam, mu, nu)``."""
    lam = discretize(f, n)
    mu = discretize(g, n)
    nu = product_spectrum(lam, mu, haar_unitary(n, seed))
    return lam, mu, nu
