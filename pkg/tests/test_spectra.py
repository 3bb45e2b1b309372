import numpy as np
import pytest

from hornbody import (
    IndexSubset,
    NumericalError,
    enumerate_catalog,
    haar_unitary,
    product_inequality_check,
    product_spectrum,
    schubert_compression_check,
    singular_values,
)


def test_singular_values_examples():
    assert np.allclose(singular_values(np.eye(3)), [1, 1, 1])
    assert np.allclose(singular_values(np.diag([3.0, -4.0])), [4, 3])
    assert np.allclose(singular_values(np.array([[0.0, 1.0], [0.0, 0.0]])), [1, 0])


def test_singular_values_match_adjoint_and_modulus():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 6):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s = singular_values(a)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        assert np.allclose(s, singular_values(a.conj().T), atol=1e-10)
        # |a| = v diag(s) v*, rebuilt from the SVD factors
        _, sv, vh = np.linalg.svd(a)
        modulus = vh.conj().T @ np.diag(sv) @ vh
        assert np.allclose(s, singular_values(modulus), atol=1e-10)


def test_singular_values_determinant_identity():
    rng = np.random.default_rng(6)
    for n in range(2, 7):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        det = abs(np.linalg.det(a))
        assert np.prod(singular_values(a)) == pytest.approx(det, rel=1e-9)


def test_singular_values_rejects_bad_input():
    with pytest.raises(ValueError):
        singular_values(np.ones((2, 3)))
    with pytest.raises(NumericalError):
        singular_values(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_haar_determinism_and_unitarity():
    u1 = haar_unitary(3, 42)
    u2 = haar_unitary(3, 42)
    u3 = haar_unitary(3, 43)
    assert np.array_equal(u1, u2)
    assert not np.array_equal(u1, u3)
    for n in (1, 2, 5):
        u = haar_unitary(n, 7)
        assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= n * 1e-12


def test_haar_scalar_case():
    u = haar_unitary(1, 11)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_first_entry_statistic():
    # |u_11|^2 averages to 1/n over the group; n = 2 here
    rng = np.random.default_rng(1234)
    vals = [abs(haar_unitary(2, rng)[0, 0]) ** 2 for _ in range(10_000)]
    assert np.mean(vals) == pytest.approx(0.5, abs=0.02)


def test_product_spectrum_examples():
    u = haar_unitary(2, 3)
    assert np.allclose(product_spectrum([1.0, 1.0], [1.0, 1.0], u), [1, 1])
    assert np.allclose(product_spectrum([2.0, 1.0], [2.0, 1.0], np.eye(2)), [4, 1])
    exchange = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert np.array_equal(product_spectrum([1.0, 0.0], [1.0, 0.0], exchange), [0.0, 0.0])


def test_product_spectrum_zero_rows_exact():
    # zeros in either factor survive the product exactly, no epsilon dust
    u = haar_unitary(4, 9)
    out = product_spectrum([3.0, 1.0, 0.0, 0.0], [2.0, 1.0, 1.0, 0.0], u)
    assert out[-2:].tolist() == [0.0, 0.0]


def test_product_spectrum_validation():
    u = haar_unitary(2, 0)
    with pytest.raises(ValueError):
        product_spectrum([1.0], [1.0, 0.5], u)
    with pytest.raises(ValueError):
        product_spectrum([0.5, 1.0], [1.0, 0.5], u)  # not nonincreasing
    with pytest.raises(ValueError):
        product_spectrum([1.0, 0.5], [1.0, 0.5], np.ones((2, 2)))  # not unitary


def test_product_check_identity_pair():
    cat = enumerate_catalog(2)
    rep = product_inequality_check(np.eye(2), np.eye(2), cat)
    assert rep.passed
    assert all(r.slack == 0.0 for r in rep.records)


def test_product_check_orthogonal_ranges():
    # D = AB = 0: every right side is -inf, matched by -inf left sides
    cat = enumerate_catalog(2)
    rep = product_inequality_check(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), cat)
    assert rep.passed
    both_inf = [r for r in rep.records if r.lhs == -np.inf and r.rhs == -np.inf]
    assert both_inf and all(r.slack == 0.0 for r in both_inf)


def test_product_check_random_pairs():
    rng = np.random.default_rng(77)
    for n in (2, 3, 4):
        cat = enumerate_catalog(n)
        for _ in range(40):
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            rep = product_inequality_check(a, b, cat)
            assert rep.passed, rep.worst_record


def test_product_check_rank_deficient_pairs():
    rng = np.random.default_rng(78)
    for n in (2, 3, 4):
        cat = enumerate_catalog(n)
        for _ in range(25):
            lam = np.sort(rng.uniform(0.5, 2.0, n))[::-1]
            mu = np.sort(rng.uniform(0.5, 2.0, n))[::-1]
            lam[-1] = 0.0
            mu[-1] = 0.0
            a = np.diag(lam) @ haar_unitary(n, rng)
            b = haar_unitary(n, rng) @ np.diag(mu)
            rep = product_inequality_check(a, b, cat, tol=1e-8)
            assert rep.passed, rep.worst_record


def test_product_check_determinant_forced():
    # the full and empty triples pin the determinant on both sides
    rng = np.random.default_rng(79)
    n = 3
    cat = enumerate_catalog(n)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rep = product_inequality_check(a, b, cat)
    full = [r for r in rep.records if r.triple is not None and r.triple.r == n]
    empty = [r for r in rep.records if r.triple is not None and r.triple.r == 0]
    for r in full + empty:
        assert abs(r.slack) <= 1e-8


def test_compression_examples():
    rep = schubert_compression_check(np.diag([3.0, 2.0, 1.0]), IndexSubset(3, (1, 3)))
    assert rep.passed
    assert np.allclose(rep.singular_margins, 0.0, atol=1e-12)
    rep = schubert_compression_check(np.eye(3), IndexSubset(3, (2,)))
    assert rep.passed and rep.min_margin >= -1e-12


def test_compression_random_instances():
    rng = np.random.default_rng(80)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        r = int(rng.integers(1, n + 1))
        chosen = tuple(sorted(rng.choice(range(1, n + 1), size=r, replace=False).tolist()))
        rep = schubert_compression_check(a, IndexSubset(n, chosen), seed=3)
        norm = singular_values(a)[0]
        assert rep.min_margin >= -1e-9 * norm


def test_compression_validation():
    with pytest.raises(ValueError):
        schubert_compression_check(np.eye(3), IndexSubset(4, (1,)))
    with pytest.raises(ValueError):
        schubert_compression_check(np.eye(3), IndexSubset(3, ()))
