"""Singular spectra, Haar-random unitaries, and matrix-level inequality checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .combinatorics import IndexSubset, TripleCatalog, bar
from .reports import (
    COMPLEMENT,
    FORWARD,
    InequalityRecord,
    MembershipReport,
    default_log_tol,
    log_or_neg_inf,
    slack_of,
)

RngLike = Union[int, np.random.Generator]


class NumericalError(RuntimeError):
    """A numerical kernel failed to converge."""


def _rng(seed: RngLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _square(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def singular_values(a) -> np.ndarray:
    """Singular values of a square matrix, nonincreasing, clamped to >= 0.

    The LAPACK backend has an internal iteration cap; if it reports
    non-convergence this raises :class:`NumericalError` instead of returning
    garbage.
    """
    m = _square(a)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular value decomposition failed: {exc}") from exc
    return np.maximum(s, 0.0)


def haar_unitary(n: int, seed: RngLike) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary, deterministic for a given seed.

    A complex Ginibre matrix is QR-factored and the phases of the diagonal
    of R are pushed into Q, which corrects the raw QR distribution to the
    Haar measure.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


def _spectrum_vector(name: str, v: Sequence[float], n: Optional[int] = None) -> np.ndarray:
    vec = np.asarray(v, dtype=float)
    if vec.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if n is not None and vec.shape[0] != n:
        raise ValueError(f"{name} must have length {n}")
    if np.any(vec < 0):
        raise ValueError(f"{name} must be nonnegative")
    if np.any(vec[:-1] < vec[1:]):
        raise ValueError(f"{name} must be nonincreasing")
    return vec


def product_spectrum(
    lam: Sequence[float],
    mu: Sequence[float],
    u: np.ndarray,
    unitary_tol: Optional[float] = None,
) -> np.ndarray:
    """Singular values of ``diag(lam) @ u @ diag(mu)``.

    The diagonal scalings are applied elementwise, so exact zeros in ``lam``
    or ``mu`` produce exactly zero rows or columns and the degenerate
    singular values come out as exact zeros.
    """
    lam_v = _spectrum_vector("lam", lam)
    n = lam_v.shape[0]
    mu_v = _spectrum_vector("mu", mu, n)
    um = np.asarray(u, dtype=complex)
    if um.shape != (n, n):
        raise ValueError(f"unitary must have shape {(n, n)}")
    cut = n * 1e-8 if unitary_tol is None else unitary_tol
    defect = np.linalg.norm(um.conj().T @ um - np.eye(n))
    if defect > cut:
        raise ValueError(f"matrix is not unitary within tolerance ({defect:.3e})")
    return singular_values(lam_v[:, None] * um * mu_v[None, :])


def product_inequality_check(
    a,
    b,
    catalog: TripleCatalog,
    tol: Optional[float] = None,
) -> MembershipReport:
    """Check the singular spectra of ``A``, ``B`` and ``D = A @ B`` against
    every triple of the catalog, on the log scale.

    For a triple ``(I, J, K)`` the forward record bounds
    ``sum_I log s(A) + sum_J log s(B)`` by ``sum_{bar K} log s(D)`` and the
    complementary record bounds ``sum over the complement of bar K`` of
    ``log s(D)`` by the complementary log sums of the factors.  Vanishing
    singular values enter as ``-inf`` with the slack conventions of
    :mod:`hornbody.reports`.
    """
    am, bm = _square(a), _square(b)
    n = catalog.n
    if am.shape != (n, n) or bm.shape != (n, n):
        raise ValueError(f"matrices must be {n} x {n} to match the catalog")
    sa = singular_values(am)
    sb = singular_values(bm)
    sd = singular_values(am @ bm)
    if tol is None:
        tol = default_log_tol(n, sa, sb, sd)
    la = [log_or_neg_inf(x) for x in sa]
    lb = [log_or_neg_inf(x) for x in sb]
    ld = [log_or_neg_inf(x) for x in sd]

    records = []
    for t in catalog:
        kbar = bar(t.K)
        lhs = sum(la[i - 1] for i in t.I.elements) + sum(
            lb[j - 1] for j in t.J.elements
        )
        rhs = sum(ld[k - 1] for k in kbar.elements)
        records.append(
            InequalityRecord(
                triple=t, direction=FORWARD, lhs=lhs, rhs=rhs, slack=slack_of(lhs, rhs)
            )
        )
        lhs_c = sum(ld[k - 1] for k in kbar.complement().elements)
        rhs_c = sum(la[i - 1] for i in t.I.complement().elements) + sum(
            lb[j - 1] for j in t.J.complement().elements
        )
        records.append(
            InequalityRecord(
                triple=t,
                direction=COMPLEMENT,
                lhs=lhs_c,
                rhs=rhs_c,
                slack=slack_of(lhs_c, rhs_c),
            )
        )
    return MembershipReport.from_records(records, tol)


@dataclass(frozen=True)
class CompressionReport:
    """Margins of a two-sided compression against the chosen singular values."""

    singular_margins: tuple[float, ...]
    determinant_margin: float
    min_margin: float
    passed: bool


def schubert_compression_check(
    a,
    subset: IndexSubset,
    tol: Optional[float] = None,
    seed: RngLike = 0,
) -> CompressionReport:
    """Compress ``A`` between the span of selected right singular vectors and
    a subspace containing its image, and compare the compression's spectrum
    against the selected singular values of ``A``.

    For ``V`` spanned by the right singular vectors indexed by ``subset``,
    an ``r``-frame ``Q`` containing ``A V`` is completed (with seeded random
    directions when ``A V`` is rank deficient, never by thresholding) and the
    report records ``s_l(Q* A V) - s_{i(l)}(A)`` for every ``l`` together
    with the determinant margin ``|det(Q* A V)| - prod_l s_{i(l)}(A)``.  The
    default tolerance is ``1e-9 * s_1(A)``.
    """
    m = _square(a)
    n = m.shape[0]
    if subset.n != n:
        raise ValueError("subset ambient size must match the matrix")
    r = subset.r
    if r < 1:
        raise ValueError("compression requires a nonempty index subset")
    try:
        _, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular value decomposition failed: {exc}") from exc
    s = np.maximum(s, 0.0)
    if tol is None:
        tol = 1e-9 * (s[0] if s[0] > 0 else 1.0)

    chosen = list(subset.zero_based())
    v = vh.conj().T[:, chosen]
    image = m @ v
    # Orthonormal r-frame whose span contains col(image): QR of [image | G]
    # keeps the image inside the leading r columns and fills any rank deficit
    # from the seeded Gaussian block.
    rng = _rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q_full, _ = np.linalg.qr(np.concatenate([image, g], axis=1))
    q = q_full[:, :r]
    comp = q.conj().T @ m @ v
    cs = singular_values(comp)
    picked = s[chosen]
    margins = tuple(float(cs[l] - picked[l]) for l in range(r))
    det_margin = float(np.abs(np.linalg.det(comp)) - np.prod(picked))
    min_margin = min(list(margins) + [det_margin])
    return CompressionReport(
        singular_margins=margins,
        determinant_margin=det_margin,
        min_margin=min_margin,
        passed=bool(min_margin >= -tol),
    )
