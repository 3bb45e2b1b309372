"""Membership, sampling, and realization for the body of singular spectra of
products ``diag(lam) @ U @ diag(mu)`` over all unitaries ``U``.

Membership is decided by the exponentiated inequality family indexed by the
triple catalog: for every triple ``(I, J, K)`` the product of the selected
entries of ``lam`` and ``mu`` bounds the product of ``nu`` over the
reflected subset ``bar K`` from below, and the complementary products bound
it from above.  On the log scale zeros become ``-inf`` and every inequality
stays decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .combinatorics import TripleCatalog, bar, enumerate_catalog
from .reports import (
    COMPLEMENT,
    DETERMINANT,
    FORWARD,
    InequalityRecord,
    MembershipReport,
    default_log_tol,
    log_or_neg_inf,
    slack_of,
)
from .spectra import RngLike, _rng, _spectrum_vector, haar_unitary, product_spectrum


class InvertibleDomainError(ValueError):
    """A spectrum with zero entries reached the invertible-case checker."""


class NonMemberTargetError(ValueError):
    """Realization was asked for a target outside the body."""

    def __init__(self, report: MembershipReport):
        super().__init__(
            "target spectrum fails membership "
            f"(worst slack {report.worst_slack:.3e} at tol {report.tol:.3e})"
        )
        self.report = report


@dataclass(frozen=True)
class BodySpec:
    """Factor spectra together with the triple catalog that cuts the body."""

    lam: tuple[float, ...]
    mu: tuple[float, ...]
    catalog: TripleCatalog

    def __post_init__(self) -> None:
        lam = tuple(float(x) for x in self.lam)
        mu = tuple(float(x) for x in self.mu)
        _spectrum_vector("lam", lam)
        _spectrum_vector("mu", mu, len(lam))
        if self.catalog.n != len(lam):
            raise ValueError(
                f"catalog is for n={self.catalog.n}, spectra have length {len(lam)}"
            )
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def n(self) -> int:
        return len(self.lam)

    @classmethod
    def create(
        cls, lam: Sequence[float], mu: Sequence[float], catalog: Optional[TripleCatalog] = None
    ) -> "BodySpec":
        if catalog is None:
            catalog = enumerate_catalog(len(tuple(lam)))
        return cls(lam=tuple(lam), mu=tuple(mu), catalog=catalog)


def _log_vec(v: Sequence[float]) -> list[float]:
    return [log_or_neg_inf(float(x)) for x in v]


def membership(spec: BodySpec, nu: Sequence[float], tol: Optional[float] = None) -> MembershipReport:
    """Check a candidate spectrum against both inequality families of every
    catalog triple (including r = 0 and r = n, which pin the determinant)."""
    nu_v = _spectrum_vector("nu", nu, spec.n)
    if tol is None:
        tol = default_log_tol(spec.n, spec.lam, spec.mu, nu_v)
    ll = _log_vec(spec.lam)
    lm = _log_vec(spec.mu)
    ln = _log_vec(nu_v)

    records = []
    for t in spec.catalog:
        kbar = bar(t.K)
        lhs = sum(ll[i - 1] for i in t.I.elements) + sum(lm[j - 1] for j in t.J.elements)
        rhs = sum(ln[k - 1] for k in kbar.elements)
        records.append(
            InequalityRecord(
                triple=t, direction=FORWARD, lhs=lhs, rhs=rhs, slack=slack_of(lhs, rhs)
            )
        )
        lhs_c = sum(ln[k - 1] for k in kbar.complement().elements)
        rhs_c = sum(ll[i - 1] for i in t.I.complement().elements) + sum(
            lm[j - 1] for j in t.J.complement().elements
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


def membership_invertible(
    spec: BodySpec, nu: Sequence[float], tol: Optional[float] = None
) -> MembershipReport:
    """Invertible-case membership: the determinant identity plus the forward
    family only.  Any zero entry in the data is a domain error.

    On strictly positive data this agrees with :func:`membership`, because
    each complementary inequality is the forward one subtracted from the
    determinant identity.
    """
    nu_v = _spectrum_vector("nu", nu, spec.n)
    if min(spec.lam) <= 0 or min(spec.mu) <= 0 or nu_v[-1] <= 0:
        raise InvertibleDomainError(
            "invertible-case membership requires strictly positive spectra"
        )
    if tol is None:
        tol = default_log_tol(spec.n, spec.lam, spec.mu, nu_v)
    ll = _log_vec(spec.lam)
    lm = _log_vec(spec.mu)
    ln = _log_vec(nu_v)

    gap = sum(ln) - sum(ll) - sum(lm)
    records = [
        InequalityRecord(
            triple=None,
            direction=DETERMINANT,
            lhs=abs(gap),
            rhs=0.0,
            slack=-abs(gap),
        )
    ]
    for t in spec.catalog:
        kbar = bar(t.K)
        lhs = sum(ll[i - 1] for i in t.I.elements) + sum(lm[j - 1] for j in t.J.elements)
        rhs = sum(ln[k - 1] for k in kbar.elements)
        records.append(
            InequalityRecord(
                triple=t, direction=FORWARD, lhs=lhs, rhs=rhs, slack=rhs - lhs
            )
        )
    return MembershipReport.from_records(records, tol)


def epsilon_shift(nu: Sequence[float], eps: float) -> np.ndarray:
    """Shift every entry of a spectrum up by ``eps >= 0``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return _spectrum_vector("nu", nu) + eps


def sample_body(spec: BodySpec, count: int, seed: RngLike) -> np.ndarray:
    """``count`` spectra of ``diag(lam) @ U @ diag(mu)`` with independent
    Haar unitaries ``U``, as a ``count x n`` array; deterministic per seed."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = _rng(seed)
    out = np.empty((count, spec.n))
    for i in range(count):
        out[i] = product_spectrum(spec.lam, spec.mu, haar_unitary(spec.n, rng))
    return out


# ---------------------------------------------------------------------------
# realization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealizationResult:
    """Best unitary found, its achieved spectrum, and search accounting."""

    unitary: np.ndarray
    achieved: np.ndarray
    residual: float
    iterations: int
    restarts: int
    converged: bool
    seed: Optional[int]


def _expm_skew(x: np.ndarray) -> np.ndarray:
    """Exact unitary exponential of a skew-Hermitian matrix via eigh."""
    w, v = np.linalg.eigh(-1j * x)
    return (v * np.exp(1j * w)[None, :]) @ v.conj().T


def _singular_gradients(lam, mu, u, p, q):
    """Gradient matrices (skew-Hermitian) of each singular value of
    ``diag(lam) @ U @ diag(mu)`` with respect to a right-multiplied
    skew-Hermitian step on ``U``."""
    n = len(lam)
    lu = lam[:, None] * u
    grads = []
    for k in range(n):
        gk = (mu * q[:, k])[:, None] @ (p[:, k].conj()[None, :] @ lu)
        grads.append(0.5 * (gk.conj().T - gk))
    return grads


def _lm_descent(lam, mu, target, u0, max_iters, success2):
    """Damped least-squares descent on the unitary group.

    Steps are skew-Hermitian directions applied multiplicatively,
    ``U <- U expm(X)``; the damping factor shrinks on accepted steps and
    grows on rejected ones.  Returns (unitary, residual^2, evaluations).
    """
    n = len(lam)
    u = u0
    m = lam[:, None] * u * mu[None, :]
    p, s, qh = np.linalg.svd(m)
    q = qh.conj().T
    res = s - target
    f = float(res @ res)
    evals = 1
    damping = 1e-3

    while evals < max_iters and f > success2:
        grads = _singular_gradients(lam, mu, u, p, q)
        gram = np.empty((n, n))
        for a in range(n):
            for b in range(a, n):
                val = float(np.sum(grads[a].conj() * grads[b]).real)
                gram[a, b] = val
                gram[b, a] = val
        gnorm = math.sqrt(sum(gram[a, a] for a in range(n)))
        if gnorm <= 1e-15 * max(1.0, float(s[0])):
            break  # stationary point for this start

        improved = False
        for _ in range(25):
            try:
                y = np.linalg.solve(gram + damping * np.eye(n), -res)
            except np.linalg.LinAlgError:
                damping *= 4.0
                continue
            x = sum(y[k] * grads[k] for k in range(n))
            u_try = u @ _expm_skew(x)
            m_try = lam[:, None] * u_try * mu[None, :]
            p_try, s_try, qh_try = np.linalg.svd(m_try)
            res_try = s_try - target
            f_try = float(res_try @ res_try)
            evals += 1
            if f_try < f:
                u, m, p, s, qh, q = u_try, m_try, p_try, s_try, qh_try, qh_try.conj().T
                res, f = res_try, f_try
                damping = max(damping / 3.0, 1e-14)
                improved = True
                break
            damping *= 4.0
            if evals >= max_iters:
                break
        if not improved:
            break
    return u, f, evals


def realize(
    spec: BodySpec,
    nu: Sequence[float],
    tol: float = 1e-6,
    budget: int = 5000,
    seed: int = 0,
    restarts: int = 8,
    boundary_tol: float = 1e-4,
) -> RealizationResult:
    """Search for a unitary whose product spectrum matches ``nu``.

    The target must pass :func:`membership` first; otherwise
    :class:`NonMemberTargetError` carries the failing report.  The search
    runs up to ``restarts`` independent starts (the identity first, then
    Haar draws derived from ``seed``), merging results by lowest residual
    with ties broken toward the earliest start.  ``budget`` caps the total
    number of objective evaluations across all starts; exhausting it yields
    a non-converged result rather than an exception.

    Targets sitting on the boundary of the body (some membership slack is
    essentially tight) are accepted at the relaxed ``boundary_tol``, since
    the optimizer approaches such spectra from the inside.
    """
    report = membership(spec, nu, tol)
    if not report.passed:
        raise NonMemberTargetError(report)
    if budget < 1:
        raise ValueError("budget must be positive")
    if restarts < 1:
        raise ValueError("restarts must be positive")

    target = _spectrum_vector("nu", nu, spec.n)
    success = tol
    # The empty and full index triples encode the determinant identity and
    # are tight for every member; only a tight *proper* triple marks a
    # genuine boundary target.
    tight = min(
        (
            abs(r.slack)
            for r in report.records
            if math.isfinite(r.slack)
            and r.triple is not None
            and 0 < r.triple.r < r.triple.n
        ),
        default=math.inf,
    )
    if tight < 1e-7:
        success = max(tol, boundary_tol)
    success2 = success * success

    lam = np.asarray(spec.lam)
    mu = np.asarray(spec.mu)
    n = spec.n

    best_u: Optional[np.ndarray] = None
    best_f = math.inf
    used = 0
    starts = 0
    per_start = max(100, budget // restarts)
    for k in range(restarts):
        if used >= budget:
            break
        starts += 1
        u0 = np.eye(n, dtype=complex) if k == 0 else haar_unitary(n, np.random.default_rng((seed, k)))
        u, f, evals = _lm_descent(
            lam, mu, target, u0, min(per_start, budget - used), success2
        )
        used += evals
        if f < best_f:
            best_u, best_f = u, f
        if best_f <= success2:
            break

    assert best_u is not None
    achieved = product_spectrum(spec.lam, spec.mu, best_u)
    residual = float(np.linalg.norm(achieved - target))
    return RealizationResult(
        unitary=best_u,
        achieved=achieved,
        residual=residual,
        iterations=used,
        restarts=starts,
        converged=residual <= success,
        seed=seed if isinstance(seed, int) else None,
    )
