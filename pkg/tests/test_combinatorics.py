import itertools
import json

import numpy as np
import pytest

from hornbody import (
    CatalogCapacityError,
    HornTriple,
    IndexSubset,
    Partition,
    TripleCatalog,
    additive_horn_check,
    bar,
    box_complement,
    co_partition,
    enumerate_catalog,
    lr_coefficient,
    triple_coefficient,
)
from hornbody.combinatorics import _enumerate

from oracles import brute_lr, brute_triple_coefficient, pieri_triple_coefficient


def _subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


def _triple(n, I, J, K):
    return HornTriple(IndexSubset(n, I), IndexSubset(n, J), IndexSubset(n, K))


# ---------------------------------------------------------------------------
# index subsets and the bar map
# ---------------------------------------------------------------------------


def test_subset_validation():
    with pytest.raises(ValueError):
        IndexSubset(3, (0,))
    with pytest.raises(ValueError):
        IndexSubset(3, (4,))
    with pytest.raises(ValueError):
        IndexSubset(3, (2, 2))
    with pytest.raises(ValueError):
        IndexSubset(3, (3, 1))  # must be increasing


def test_bar_examples():
    assert bar(IndexSubset(2, (1,))).elements == (2,)
    assert bar(IndexSubset(5, (1, 3, 5))).elements == (1, 3, 5)
    assert bar(IndexSubset(3, (1, 2))).elements == (2, 3)


def test_bar_involution_exhaustive():
    for n in range(1, 9):
        for elems in _subsets(n):
            s = IndexSubset(n, elems)
            assert bar(bar(s)) == s
            assert bar(s).r == s.r


def test_complement():
    s = IndexSubset(4, (2, 3))
    assert s.complement().elements == (1, 4)
    assert IndexSubset(4, ()).complement().elements == (1, 2, 3, 4)


# ---------------------------------------------------------------------------
# partitions and coefficients
# ---------------------------------------------------------------------------


def test_co_partition_examples():
    assert co_partition(IndexSubset(2, (1,))).parts == (1,)
    assert co_partition(IndexSubset(2, (2,))).parts == ()
    assert co_partition(IndexSubset(4, (2, 3))).parts == (1, 1)


def test_box_complement():
    # complement of (1) in a 1x1 box is empty; of empty in 2x2 is the full box
    assert box_complement(Partition((1,)), 1, 1).parts == ()
    assert box_complement(Partition(()), 2, 2).parts == (2, 2)
    with pytest.raises(ValueError):
        box_complement(Partition((3,)), 1, 2)


def test_lr_examples():
    assert lr_coefficient(Partition((1,)), Partition(()), Partition((1,))) == 1
    assert lr_coefficient(Partition((2, 1)), Partition((2, 1)), Partition((3, 2, 1))) == 2
    assert lr_coefficient(Partition((1,)), Partition((1,)), Partition((3,))) == 0
    assert lr_coefficient(Partition((1,)), Partition((1,)), Partition((2,))) == 1
    assert lr_coefficient(Partition((1,)), Partition((1,)), Partition((1, 1))) == 1


def test_lr_matches_brute_oracle():
    shapes = [(), (1,), (2,), (1, 1), (2, 1), (2, 2), (3, 1), (3, 2, 1)]
    for lam in shapes:
        for mu in shapes:
            for nu in shapes:
                got = lr_coefficient(Partition(lam), Partition(mu), Partition(nu))
                assert got == brute_lr(lam, mu, nu), (lam, mu, nu)


def test_lr_symmetric_in_first_two_arguments():
    # all partitions inside a 4x4 box
    box = sorted({tuple(sorted(p, reverse=True)) for p in itertools.product(range(5), repeat=4)})
    for lam in box:
        for mu in box:
            want = sum(lam) + sum(mu)
            for nu in box:
                if sum(nu) != want:
                    continue
                assert lr_coefficient(Partition(lam), Partition(mu), Partition(nu)) == lr_coefficient(
                    Partition(mu), Partition(lam), Partition(nu)
                )


def test_triple_coefficient_examples():
    assert triple_coefficient(_triple(2, (1,), (2,), (2,))) == 1
    assert triple_coefficient(_triple(2, (1,), (1,), (1,))) == 0  # index identity fails
    assert triple_coefficient(_triple(3, (2,), (2,), (3,))) == 1


def test_triple_coefficient_permutation_invariance_exhaustive():
    for n in range(1, 6):
        for r in range(n + 1):
            subs = list(itertools.combinations(range(1, n + 1), r))
            for I, J, K in itertools.product(subs, repeat=3):
                base = triple_coefficient(_triple(n, I, J, K))
                for X, Y, Z in itertools.permutations((I, J, K)):
                    assert triple_coefficient(_triple(n, X, Y, Z)) == base


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def test_catalog_counts():
    assert len(enumerate_catalog(1)) == 2
    assert len(enumerate_catalog(2)) == 5
    assert len(enumerate_catalog(3)) == 14
    assert len(enumerate_catalog(4)) == 43


def test_catalog_n2_exact_content():
    got = [(t.I.elements, t.J.elements, t.K.elements) for t in enumerate_catalog(2)]
    assert got == [
        ((), (), ()),
        ((1,), (2,), (2,)),
        ((2,), (1,), (2,)),
        ((2,), (2,), (1,)),
        ((1, 2), (1, 2), (1, 2)),
    ]


def test_catalog_n3_group_sizes():
    cat = enumerate_catalog(3)
    assert [len(cat.by_r(r)) for r in range(4)] == [1, 6, 6, 1]


def test_catalog_members_satisfy_identity_and_coefficient():
    for n in range(1, 6):
        for t in enumerate_catalog(n):
            assert t.index_identity_holds()
            assert triple_coefficient(t) == 1


def test_catalog_order_lexicographic():
    for n in (3, 4, 5):
        keys = [(t.r, t.I.elements, t.J.elements, t.K.elements) for t in enumerate_catalog(n)]
        assert keys == sorted(keys)


def test_catalog_matches_both_oracles_small():
    # independent recomputation of the full catalog for n <= 3
    for n in (1, 2, 3):
        members = {(t.I.elements, t.J.elements, t.K.elements) for t in enumerate_catalog(n)}
        for r in range(n + 1):
            subs = list(itertools.combinations(range(1, n + 1), r))
            for I, J, K in itertools.product(subs, repeat=3):
                t = _triple(n, I, J, K)
                in_cat = (I, J, K) in members
                assert in_cat == (brute_triple_coefficient(t) == 1)
                assert in_cat == (pieri_triple_coefficient(t) == 1)


def test_catalog_capacity_errors():
    with pytest.raises(CatalogCapacityError):
        enumerate_catalog(0)
    with pytest.raises(CatalogCapacityError):
        enumerate_catalog(9)
    with pytest.raises(TypeError):
        enumerate_catalog(2.0)


def test_catalog_json_roundtrip():
    cat = enumerate_catalog(3)
    payload = json.loads(json.dumps(cat.to_json()))
    back = TripleCatalog.from_json(payload)
    assert back == cat


def test_catalog_disk_cache(tmp_path, monkeypatch):
    import hornbody.combinatorics as combi

    monkeypatch.setattr(combi, "_memory", {})
    first = enumerate_catalog(6, cache_dir=tmp_path)
    assert (tmp_path / "catalog-n6-v1.json").exists()
    monkeypatch.setattr(combi, "_memory", {})
    second = enumerate_catalog(6, cache_dir=tmp_path)
    assert first == second
    # corrupt cache is ignored, not fatal
    (tmp_path / "catalog-n6-v1.json").write_text("{broken")
    monkeypatch.setattr(combi, "_memory", {})
    third = enumerate_catalog(6, cache_dir=tmp_path)
    assert len(third) == len(first)


def test_catalog_cache_written_on_warm_memo(tmp_path):
    # a prior call has already memoized n = 6 in-process; an explicit cache
    # directory must still receive the file
    enumerate_catalog(6)
    warm = enumerate_catalog(6, cache_dir=tmp_path)
    assert (tmp_path / "catalog-n6-v1.json").exists()
    assert TripleCatalog.from_json(
        json.loads((tmp_path / "catalog-n6-v1.json").read_text())
    ) == warm


def test_fresh_enumeration_is_byte_stable():
    for n in (4, 5):
        a = json.dumps(_enumerate(n).to_json(), sort_keys=True)
        b = json.dumps(_enumerate(n).to_json(), sort_keys=True)
        assert a == b
        assert a == json.dumps(enumerate_catalog(n).to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# additive check
# ---------------------------------------------------------------------------


def test_additive_all_zero_passes():
    cat = enumerate_catalog(3)
    rep = additive_horn_check((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), cat)
    assert rep.passed and rep.worst_slack == 0.0


def test_additive_hand_violation():
    # alpha = beta = (1,0) cannot sum to the zero matrix spectrum
    cat = enumerate_catalog(2)
    rep = additive_horn_check((1.0, 0.0), (1.0, 0.0), (0.0, 0.0), cat)
    assert not rep.passed
    named = [
        r
        for r in rep.violations(1e-9)
        if r.triple is not None and r.triple.I.elements == (1,) and r.triple.J.elements == (2,)
    ]
    assert named and named[0].slack == pytest.approx(-1.0)  # 1 + 0 <= 0 fails
    assert rep.worst_slack == pytest.approx(-2.0)


def test_additive_hermitian_samples():
    for n in (2, 3):
        cat = enumerate_catalog(n)
        rng = np.random.default_rng(17 + n)
        for _ in range(50):
            x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a = (x + x.conj().T) / 2
            b = (y + y.conj().T) / 2
            alpha = np.linalg.eigvalsh(a)[::-1]
            beta = np.linalg.eigvalsh(b)[::-1]
            rho = np.linalg.eigvalsh(a + b)[::-1]
            scale = max(1.0, np.abs(alpha).max(), np.abs(beta).max(), np.abs(rho).max())
            assert additive_horn_check(alpha, beta, rho, cat, tol=1e-9 * scale).passed


def test_additive_dimension_mismatch():
    cat = enumerate_catalog(2)
    with pytest.raises(ValueError):
        additive_horn_check((1.0, 0.0, 0.0), (1.0, 0.0), (1.0, 0.0), cat)
