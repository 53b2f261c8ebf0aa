import numpy as np
import pytest

from elocc.errors import NotSymmetric, SizeTooLarge
from elocc.eigensolver import full_spectrum, lowest_states
from elocc.models import build_ising, build_xxz, build_xy

import oracles


def test_classical_limit():
    assert lowest_states(build_ising(10, 0.0))[0].energy == pytest.approx(-10.0, abs=1e-12)


def test_heisenberg_pair():
    e = [p.energy for p in lowest_states(build_xxz(2, 1.0), 2)]
    np.testing.assert_allclose(e, [-6.0, 2.0], atol=1e-12)


@pytest.mark.parametrize("n", [8, 10])
def test_free_fermion_energies(n):
    rng = np.random.default_rng(n)
    for g in rng.uniform(0.5, 1.5, 20):
        e = lowest_states(build_ising(n, g))[0].energy
        assert e == pytest.approx(oracles.ising_ground_energy(n, g), rel=1e-8)


def test_residual_and_orthogonality():
    op = build_xy(8, 0.8660254, 1.3)
    pairs = lowest_states(op, 4)
    for p in pairs:
        assert abs(np.linalg.norm(p.state) - 1) < 1e-12
        assert p.residual(op) < 1e-9
    for i in range(4):
        for j in range(i):
            assert abs(pairs[i].state @ pairs[j].state) < 1e-9
    assert [p.index for p in pairs] == [0, 1, 2, 3]
    assert all(a.energy <= b.energy for a, b in zip(pairs, pairs[1:]))


def test_trace():
    op = build_xxz(8, 0.7)
    w = full_spectrum(op)
    assert w.sum() == pytest.approx(np.trace(op.to_dense()), abs=1e-8 * np.abs(w).sum())


def test_sign_convention_and_determinism():
    op = build_ising(8, 0.9)
    a = lowest_states(op, 2)
    b = lowest_states(build_ising(8, 0.9), 2)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.state, y.state)
        assert x.state[np.argmax(np.abs(x.state))] > 0


def test_degenerate_level_uses_parity_basis():
    # at g = 0 the doublet is spanned by |+...+> and |-...->
    n = 6
    op = build_ising(n, 0.0)
    ground, first = lowest_states(op, 2)
    assert ground.degenerate and first.degenerate
    plus = np.ones(1 << n) / np.sqrt(1 << n)
    minus = plus * oracles.spin_flip_parity(n)
    even = (plus + minus) / np.sqrt(2)
    odd = (plus - minus) / np.sqrt(2)
    assert abs(ground.state @ even) == pytest.approx(1, abs=1e-12)
    assert abs(first.state @ odd) == pytest.approx(1, abs=1e-12)


def test_returned_states_read_only():
    p = lowest_states(build_ising(4, 1.0))[0]
    with pytest.raises(ValueError):
        p.state[0] = 0.0


def test_errors():
    op = build_ising(3, 1.0)
    bad = op.to_dense().copy()
    bad[0, 1] += 1e-6
    bad.setflags(write=False)
    op._dense = bad
    with pytest.raises(NotSymmetric):
        lowest_states(op)
    with pytest.raises(ValueError):
        lowest_states(build_ising(4, 1.0), 0)


def test_size_budget(monkeypatch):
    import elocc.eigensolver as es

    monkeypatch.setattr(es, "MAX_DENSE_DIM", 8)
    with pytest.raises(SizeTooLarge):
        es.lowest_states(build_ising(4, 1.0))
