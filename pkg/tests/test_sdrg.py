import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from depletion import profiles as prof
from depletion.errors import DomainError, ValidationError
from depletion.sdrg import run_sdrg, sdrg_density, write_bonds_csv


def is_nested(bonds):
    """No two bonds cross: intervals are either disjoint or contained."""
    spans = [(b.left, b.right) for b in bonds]
    for a, b in spans:
        for c, d in spans:
            if a < c < b < d:
                return False
    return True


def test_three_link_example():
    bs = run_sdrg([2.0, 0.1, 1.0])
    assert [(b.left, b.right, b.strength, b.sign, b.rank) for b in bs] == [
        (1, 2, 2.0, 1, 1),
        (3, 4, 1.0, 1, 2),
    ]


def test_rainbow_four_sites():
    J = prof.sample_chain(prof.rainbow(4.0), 4)
    bs = run_sdrg(J)
    assert bs.pairs == [(2, 3), (1, 4)]
    last = bs.bonds[1]
    assert last.strength == pytest.approx(np.exp(-2.0), rel=1e-14)
    assert last.sign == -1


def test_uniform_ties_go_left():
    assert run_sdrg([1.0, 1.0, 1.0]).pairs == [(1, 2), (3, 4)]


@pytest.mark.parametrize("N", [10, 100, 400, 1000])
@pytest.mark.parametrize("h", [0.5, 4.0, 20.0, 100.0])
def test_rainbow_is_fully_nested(N, h):
    bs = run_sdrg(prof.sample_chain(prof.rainbow(h), N))
    assert bs.pairs == [(N // 2 - k, N // 2 + 1 + k) for k in range(N // 2)]


@given(J=arrays(float, st.sampled_from([1, 3, 5, 9, 21]), elements=st.floats(0.01, 10.0)))
def test_bonds_cover_every_site_once(J):
    bs = run_sdrg(J)
    sites = sorted(s for b in bs for s in (b.left, b.right))
    assert sites == list(range(1, J.size + 2))
    assert [b.rank for b in bs] == list(range(1, len(bs) + 1))
    assert is_nested(bs)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        run_sdrg([1.0, 1.0])
    with pytest.raises(ValidationError):
        run_sdrg([1.0, 0.0, 1.0])


def test_density_examples():
    bs = run_sdrg([2.0, 0.1, 1.0])
    np.testing.assert_array_equal(sdrg_density(bs, 1), [0.5, 0.5, 0, 0])
    np.testing.assert_array_equal(sdrg_density(bs, 2), [0.5] * 4)
    np.testing.assert_array_equal(sdrg_density(bs, 3), [0.5, 0.5, 1, 1])
    np.testing.assert_array_equal(sdrg_density(bs, 4), [1.0] * 4)
    np.testing.assert_array_equal(sdrg_density(bs, 0), [0.0] * 4)


@given(J=arrays(float, 19, elements=st.floats(0.01, 10.0)), m=st.integers(0, 20))
def test_density_sum_and_mirror(J, m):
    bs = run_sdrg(J)
    n = sdrg_density(bs, m)
    assert n.sum() == pytest.approx(m)
    np.testing.assert_array_equal(n + sdrg_density(bs, 20 - m), 1.0)
    assert set(np.unique(n)) <= {0.0, 0.5, 1.0}


def test_rainbow_density_is_a_plateau():
    N = 40
    bs = run_sdrg(prof.sample_chain(prof.rainbow(20.0), N))
    n = sdrg_density(bs, 10)
    np.testing.assert_array_equal(n[10:30], 0.5)
    np.testing.assert_array_equal(n[:10], 0.0)
    np.testing.assert_array_equal(n[30:], 0.0)


def test_density_rejects_bad_count():
    bs = run_sdrg([1.0])
    with pytest.raises(DomainError):
        sdrg_density(bs, 3)
    with pytest.raises(DomainError):
        sdrg_density(bs, 1, N=4)


def test_bonds_csv(tmp_path):
    write_bonds_csv(run_sdrg([2.0, 0.1, 1.0]), tmp_path / "b.csv")
    assert (tmp_path / "b.csv").read_text().splitlines() == [
        "rank,left,right,strength,sign",
        "1,1,2,2.0,1",
        "2,3,4,1.0,1",
    ]
