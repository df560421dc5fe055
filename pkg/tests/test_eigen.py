import math

import numpy as np
import pytest
from oracles import RINDLER4_ENERGIES, sturm_eigenvalues

from depletion import profiles as prof
from depletion.chain import build_chain
from depletion.eigen import (
    Spectrum,
    diagonalize,
    eigvalsh_dense,
    tridiagonal_eigvalsh,
    verify_spectrum,
    write_spectrum_csv,
)
from depletion.errors import ConvergenceError

# frozen oracle values; closed form: +-sqrt((7/8 +- sqrt(5/8)) / 2) for couplings (1/4, 1/2, 3/4)


def oracle_chains():
    for N in (2, 3, 10, 25, 50):
        yield f"homogeneous-{N}", np.ones(N - 1), np.zeros(N)
    for N in (4, 20, 50):
        yield f"rindler-{N}", prof.sample_chain(prof.rindler(0.0), N), np.zeros(N)
        for h in (1.0, 10.0, 20.0):
            yield f"rainbow{h:g}-{N}", prof.sample_chain(prof.rainbow(h), N), np.zeros(N)
    rng = np.random.default_rng(7)
    yield "random-potential-30", rng.uniform(0.2, 2.0, 29), rng.normal(size=30)


def test_two_site_chain():
    s = diagonalize(build_chain([1.0]))
    np.testing.assert_allclose(s.energies, [-1, 1], atol=1e-15)
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(s.modes, [[r, r], [r, -r]], atol=1e-15)
    rep = verify_spectrum(s, build_chain([1.0]))
    assert rep.max_residual < 1e-15 and rep.max_orthogonality_defect < 1e-15


def test_three_site_chain():
    s = diagonalize(build_chain([1.0, 1.0]))
    np.testing.assert_allclose(s.energies, [-math.sqrt(2), 0, math.sqrt(2)], atol=1e-14)


def test_rindler_four_sites_against_frozen_oracle():
    s = diagonalize(build_chain([0.25, 0.5, 0.75]))
    np.testing.assert_allclose(s.energies, RINDLER4_ENERGIES, atol=1e-14)
    np.testing.assert_allclose(s.energies, -s.energies[::-1], atol=1e-15)


@pytest.mark.parametrize("name, J, mu", list(oracle_chains()), ids=lambda v: v if isinstance(v, str) else "")
def test_matches_sturm_oracle(name, J, mu):
    s = diagonalize(build_chain(J, mu))
    ref = sturm_eigenvalues(mu, -J)
    np.testing.assert_allclose(s.energies, ref, rtol=0, atol=1e-12)
    assert verify_spectrum(s, build_chain(J, mu)).ok()


def test_particle_hole_symmetry():
    # sine has edge-localized near-degenerate pairs, so use a profile without them
    J = prof.sample_chain(prof.rindler(0.25), 200)
    s = diagonalize(build_chain(J))
    np.testing.assert_allclose(s.energies, -s.energies[::-1], atol=1e-10)
    np.testing.assert_allclose(np.abs(s.modes), np.abs(s.modes[::-1]), atol=1e-8)


def test_gauge_first_component_positive():
    s = diagonalize(build_chain(prof.sample_chain(prof.rindler(0.25), 60)))
    for row in s.modes:
        first = row[np.argmax(np.abs(row) > 1e-12 * np.abs(row).max())]
        assert first > 0


def test_deterministic():
    c = build_chain(prof.sample_chain(prof.rainbow(4.0), 300))
    a, b = diagonalize(c), diagonalize(c)
    assert a.energies.tobytes() == b.energies.tobytes()
    assert a.modes.tobytes() == b.modes.tobytes()


def test_graded_rainbow_contract():
    c = build_chain(prof.sample_chain(prof.rainbow(20.0), 400))
    rep = verify_spectrum(diagonalize(c), c)
    assert rep.ascending
    assert rep.max_residual <= 1e-10 * rep.scale
    assert rep.max_orthogonality_defect <= 1e-10


def test_verify_detects_corruption():
    c = build_chain(np.ones(9))
    s = diagonalize(c)
    U = s.modes.copy()
    U[3, 4] = -U[3, 4]
    rep = verify_spectrum(Spectrum(s.energies, U), c)
    assert rep.max_orthogonality_defect > 1e-3
    assert not rep.ok()


def test_eigenvalues_only_path_agrees():
    J = prof.sample_chain(prof.sine(1.0, 0.5), 80)
    np.testing.assert_array_equal(
        np.sort(tridiagonal_eigvalsh(np.zeros(80), -J)), diagonalize(build_chain(J)).energies
    )


@pytest.mark.parametrize("n", [1, 2, 3, 17, 120])
def test_dense_eigenvalues(n):
    rng = np.random.default_rng(n)
    A = rng.normal(size=(n, n))
    A = A + A.T
    np.testing.assert_allclose(eigvalsh_dense(A), np.linalg.eigvalsh(A), atol=1e-11)


def test_dense_eigenvalues_of_projector_block():
    V = np.linalg.qr(np.random.default_rng(1).normal(size=(60, 60)))[0][:, :20]
    C = V @ V.T
    lam = eigvalsh_dense(C[:30, :30])
    assert lam.min() > -1e-12 and lam.max() < 1 + 1e-12


def test_nonconvergence_reports_index(monkeypatch):
    import depletion.eigen as eig

    monkeypatch.setattr(eig, "_tql2", lambda d, e, Z, v: 3)
    with pytest.raises(ConvergenceError) as info:
        diagonalize(build_chain(np.ones(7)))
    assert info.value.index == 3 and "index 3" in str(info.value)


def test_spectrum_csv(tmp_path):
    s = diagonalize(build_chain([1.0]))
    path = tmp_path / "spec.csv"
    write_spectrum_csv(s, path)
    assert path.read_text().splitlines()[0] == "k,energy"
