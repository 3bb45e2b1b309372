"""Index subsets, partitions, Littlewood-Richardson numbers, and the catalog
of admissible triples.

The catalog for size ``n`` collects the triples ``(I, J, K)`` of ``r``-element
subsets of ``{1, ..., n}`` (for every ``r`` from 0 to ``n``) whose
Littlewood-Richardson number equals one.  These triples index the complete
family of trace inequalities for Hermitian sums and, in exponentiated form,
the singular-value inequalities for operator products checked elsewhere in
this package.

The dictionary between subsets and partitions is the classical one: a subset
``S = {s(1) < ... < s(r)}`` turns into the partition whose ``l``-th part is
``n - r + l - s(l)``, and the third partition is complemented inside the
``r x (n - r)`` box before the Littlewood-Richardson number is taken.
"""

from __future__ import annotations

import itertools
import json
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .reports import COMPLEMENT, FORWARD, InequalityRecord, MembershipReport

MAX_CATALOG_N = 8
CATALOG_FORMAT_VERSION = 1
CACHE_ENV_VAR = "HORNBODY_CACHE_DIR"

# Enumeration below this size is fast enough that persisting it buys nothing.
_CACHE_MIN_N = 6


class CatalogCapacityError(ValueError):
    """Requested a triple catalog beyond the supported size range."""


# ---------------------------------------------------------------------------
# index subsets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class IndexSubset:
    """A subset of ``{1, ..., n}`` kept strictly increasing."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("ambient size n must be nonnegative")
        elems = tuple(self.elements)
        if list(elems) != sorted(set(elems)):
            raise ValueError("subset elements must be strictly increasing")
        if elems and not (1 <= elems[0] and elems[-1] <= self.n):
            raise ValueError(f"elements must lie in 1..{self.n}, got {elems}")
        object.__setattr__(self, "elements", elems)

    @property
    def r(self) -> int:
        return len(self.elements)

    def complement(self) -> "IndexSubset":
        inside = set(self.elements)
        return IndexSubset(
            self.n, tuple(k for k in range(1, self.n + 1) if k not in inside)
        )

    def zero_based(self) -> tuple[int, ...]:
        """Elements shifted down by one, for indexing arrays."""
        return tuple(k - 1 for k in self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


def bar(subset: IndexSubset) -> IndexSubset:
    """Reflect a subset through the midpoint of ``{1, ..., n}``: k -> n+1-k."""
    return IndexSubset(
        subset.n, tuple(subset.n + 1 - k for k in reversed(subset.elements))
    )


def _displacement(subset: IndexSubset) -> int:
    """Total displacement sum_l (s(l) - l) of a subset."""
    return sum(s - pos for pos, s in enumerate(subset.elements, start=1))


# ---------------------------------------------------------------------------
# partitions and Littlewood-Richardson numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of nonnegative integers.

    Trailing zeros are stripped on construction, so two partitions that
    differ only in trailing zeros compare equal.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be nonnegative")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def padded(self, length: int) -> tuple[int, ...]:
        if len(self.parts) > length:
            raise ValueError(f"partition has more than {length} parts")
        return self.parts + (0,) * (length - len(self.parts))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


PartitionLike = Union[Partition, Sequence[int]]


def _as_parts(p: PartitionLike) -> tuple[int, ...]:
    if isinstance(p, Partition):
        return p.parts
    return Partition(tuple(p)).parts


def co_partition(subset: IndexSubset) -> Partition:
    """Partition encoding how far each element of the subset sits below the
    top of its available range; the ``l``-th part is ``n - r + l - s(l)``."""
    n, r = subset.n, subset.r
    return Partition(
        tuple(n - r + pos - s for pos, s in enumerate(subset.elements, start=1))
    )


def box_complement(p: PartitionLike, rows: int, width: int) -> Partition:
    """Complement of a partition inside the ``rows x width`` box, read upside
    down, so that complementing twice gives the original partition back."""
    parts = _as_parts(p)
    if len(parts) > rows or any(x > width for x in parts):
        raise ValueError(f"partition {parts} does not fit in a {rows}x{width} box")
    padded = parts + (0,) * (rows - len(parts))
    return Partition(tuple(width - padded[rows - 1 - i] for i in range(rows)))


@lru_cache(maxsize=1 << 18)
def _lr_count(lam: tuple[int, ...], mu: tuple[int, ...], nu: tuple[int, ...]) -> int:
    """Count lattice skew tableaux of shape nu/lam with content mu.

    Cells are filled in reverse reading order (each row right to left, rows
    top to bottom) so the lattice-word condition can be enforced
    incrementally; the semistandard constraints prune against the already
    placed right and upper neighbours.
    """
    if sum(nu) != sum(lam) + sum(mu):
        return 0
    rows = len(nu)
    if len(lam) > rows:
        return 0
    lam = lam + (0,) * (rows - len(lam))
    if any(l > v for l, v in zip(lam, nu)):
        return 0
    m = len(mu)
    cells = [(r, c) for r in range(rows) for c in range(nu[r] - 1, lam[r] - 1, -1)]
    if not cells:
        return 1

    filled: dict[tuple[int, int], int] = {}
    counts = [0] * (m + 1)  # counts[v] = copies of v placed so far
    remaining = list(mu)

    def place(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        lo, hi = 1, m
        above = filled.get((r - 1, c))
        if above is not None:
            lo = max(lo, above + 1)
        right = filled.get((r, c + 1))
        if right is not None:
            hi = min(hi, right)
        total = 0
        for v in range(lo, hi + 1):
            if remaining[v - 1] == 0:
                continue
            if v >= 2 and counts[v] + 1 > counts[v - 1]:
                continue  # would break the lattice-word property
            counts[v] += 1
            remaining[v - 1] -= 1
            filled[(r, c)] = v
            total += place(idx + 1)
            counts[v] -= 1
            remaining[v - 1] += 1
            del filled[(r, c)]
        return total

    return place(0)


def lr_coefficient(lam: PartitionLike, mu: PartitionLike, nu: PartitionLike) -> int:
    """Littlewood-Richardson number c(nu; lam, mu)."""
    return _lr_count(_as_parts(lam), _as_parts(mu), _as_parts(nu))


# ---------------------------------------------------------------------------
# triples and the catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class HornTriple:
    """Triple of equal-cardinality subsets of ``{1, ..., n}``."""

    I: IndexSubset
    J: IndexSubset
    K: IndexSubset

    def __post_init__(self) -> None:
        if not (self.I.n == self.J.n == self.K.n):
            raise ValueError("subsets must share the ambient size n")
        if not (self.I.r == self.J.r == self.K.r):
            raise ValueError("subsets must share the cardinality r")

    @property
    def n(self) -> int:
        return self.I.n

    @property
    def r(self) -> int:
        return self.I.r

    def index_identity_holds(self) -> bool:
        """Whether the total displacement of the three subsets is 2 r (n-r)."""
        total = _displacement(self.I) + _displacement(self.J) + _displacement(self.K)
        return total == 2 * self.r * (self.n - self.r)

    @property
    def label(self) -> str:
        return f"n={self.n} r={self.r} I={self.I} J={self.J} K={self.K}"


def triple_coefficient(triple: HornTriple) -> int:
    """Littlewood-Richardson number attached to a triple of subsets.

    Zero whenever the displacement identity fails; otherwise the number is
    computed through the subset/partition dictionary with the third
    partition complemented in the ``r x (n - r)`` box.
    """
    if not triple.index_identity_holds():
        return 0
    r, n = triple.r, triple.n
    if r == 0:
        return 1
    lam = co_partition(triple.I)
    mu = co_partition(triple.J)
    nu = box_complement(co_partition(triple.K), r, n - r)
    return lr_coefficient(lam, mu, nu)


@dataclass(frozen=True)
class TripleCatalog:
    """All admissible triples for one ambient size, in deterministic order."""

    n: int
    version: int
    triples: tuple[HornTriple, ...]

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[HornTriple]:
        return iter(self.triples)

    def by_r(self, r: int) -> tuple[HornTriple, ...]:
        return tuple(t for t in self.triples if t.r == r)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "version": self.version,
            "triples": [
                {
                    "r": t.r,
                    "I": list(t.I.elements),
                    "J": list(t.J.elements),
                    "K": list(t.K.elements),
                }
                for t in self.triples
            ],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TripleCatalog":
        n = int(payload["n"])
        version = int(payload["version"])
        triples = []
        for item in payload["triples"]:
            t = HornTriple(
                IndexSubset(n, tuple(item["I"])),
                IndexSubset(n, tuple(item["J"])),
                IndexSubset(n, tuple(item["K"])),
            )
            if t.r != int(item["r"]):
                raise ValueError(f"inconsistent cardinality in catalog entry {item}")
            triples.append(t)
        return cls(n=n, version=version, triples=tuple(triples))


def _cache_dir(override: Union[str, Path, None]) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "hornbody"


def _enumerate(n: int) -> TripleCatalog:
    empty = IndexSubset(n, ())
    triples = [HornTriple(empty, empty, empty)]
    for r in range(1, n + 1):
        subsets = [
            IndexSubset(n, combo)
            for combo in itertools.combinations(range(1, n + 1), r)
        ]
        by_disp: dict[int, list[IndexSubset]] = {}
        for s in subsets:
            by_disp.setdefault(_displacement(s), []).append(s)
        target = 2 * r * (n - r)
        for I in subsets:
            d_i = _displacement(I)
            for J in subsets:
                need = target - d_i - _displacement(J)
                for K in by_disp.get(need, ()):
                    t = HornTriple(I, J, K)
                    if triple_coefficient(t) == 1:
                        triples.append(t)
    return TripleCatalog(n=n, version=CATALOG_FORMAT_VERSION, triples=tuple(triples))


_memory: dict[int, TripleCatalog] = {}


def _persist(catalog: TripleCatalog, path: Path) -> None:
    """Atomic best-effort write; a read-only cache directory is not fatal."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    except OSError:
        return
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(catalog.to_json(), handle, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def enumerate_catalog(
    n: int, cache_dir: Union[str, Path, None] = None
) -> TripleCatalog:
    """The full triple catalog for size ``n``, ordered by ``r`` and then
    lexicographically by ``(I, J, K)``.

    Sizes up to ``MAX_CATALOG_N`` (= 8) are supported; anything larger
    raises :class:`CatalogCapacityError`.  For ``n >= 6`` the result is
    persisted as JSON under the cache directory (argument, else the
    ``HORNBODY_CACHE_DIR`` environment variable, else ``~/.cache/hornbody``)
    keyed by ``n`` and the catalog format version, and reused on later
    calls.  A corrupt cache file is ignored and rewritten.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("n must be an integer")
    if not 1 <= n <= MAX_CATALOG_N:
        raise CatalogCapacityError(
            f"catalog enumeration supports 1 <= n <= {MAX_CATALOG_N}, got {n}"
        )
    path: Optional[Path] = None
    if n >= _CACHE_MIN_N:
        path = _cache_dir(cache_dir) / f"catalog-n{n}-v{CATALOG_FORMAT_VERSION}.json"

    cached = _memory.get(n)
    if cached is not None:
        # Honour the requested cache directory even on a warm memo.
        if path is not None and not path.exists():
            _persist(cached, path)
        return cached

    catalog: Optional[TripleCatalog] = None
    if path is not None and path.exists():
        try:
            loaded = TripleCatalog.from_json(json.loads(path.read_text()))
            if loaded.n == n and loaded.version == CATALOG_FORMAT_VERSION:
                catalog = loaded
        except (ValueError, KeyError, TypeError, json.JSONDecodeError):
            catalog = None

    if catalog is None:
        catalog = _enumerate(n)
        if path is not None:
            _persist(catalog, path)

    _memory[n] = catalog
    return catalog


# ---------------------------------------------------------------------------
# additive inequalities
# ---------------------------------------------------------------------------


def _check_monotone(name: str, values: Sequence[float]) -> None:
    for i in range(len(values) - 1):
        if values[i] < values[i + 1]:
            raise ValueError(f"{name} must be nonincreasing, got {list(values)}")


def additive_horn_check(
    alpha: Sequence[float],
    beta: Sequence[float],
    rho: Sequence[float],
    catalog: TripleCatalog,
    tol: float = 1e-9,
) -> MembershipReport:
    """Check three nonincreasing eigenvalue vectors (two summands and their
    sum) against every inequality of the catalog, in the linear domain.

    For each triple the forward inequality bounds ``sum_I alpha + sum_J
    beta`` by the sum of ``rho`` over the reflected subset ``bar K``, and the
    complementary inequality bounds the sum of ``rho`` over the complement of
    ``bar K`` below by the complementary sums of ``alpha`` and ``beta``.
    Records are oriented as ``lhs <= rhs`` in both cases.
    """
    n = catalog.n
    if not (len(alpha) == len(beta) == len(rho) == n):
        raise ValueError(f"expected three vectors of length {n}")
    _check_monotone("alpha", alpha)
    _check_monotone("beta", beta)
    _check_monotone("rho", rho)

    records = []
    for t in catalog:
        kbar = bar(t.K)
        lhs = sum(alpha[i - 1] for i in t.I.elements) + sum(
            beta[j - 1] for j in t.J.elements
        )
        rhs = sum(rho[k - 1] for k in kbar.elements)
        records.append(
            InequalityRecord(
                triple=t, direction=FORWARD, lhs=lhs, rhs=rhs, slack=rhs - lhs
            )
        )
        lhs_c = sum(rho[k - 1] for k in kbar.complement().elements)
        rhs_c = sum(alpha[i - 1] for i in t.I.complement().elements) + sum(
            beta[j - 1] for j in t.J.complement().elements
        )
        records.append(
            InequalityRecord(
                triple=t,
                direction=COMPLEMENT,
                lhs=lhs_c,
                rhs=rhs_c,
                slack=rhs_c - lhs_c,
            )
        )
    return MembershipReport.from_records(records, tol)
