import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elocc.errors import AllTruncated, NegativeInput
from elocc.monotones import (
    AlphaGrid,
    ConversionVerdict,
    Direction,
    SchmidtVector,
    elocc_verdict,
    find_interceptions,
    locc_convertible,
    normalize_descending,
    read_schmidt_csv,
    renyi_curve,
    renyi_entropy,
    tensor_product,
    verify_catalyst,
    write_schmidt_csv,
)

from oracles import tail_sums_dominate

PSI = normalize_descending([0.4, 0.4, 0.1, 0.1])
PSI_P = normalize_descending([0.5, 0.25, 0.25, 0.0])
CAT = normalize_descending([0.6, 0.4])


def sv(*x):
    return normalize_descending(x)


def random_vectors(rng, count, max_dim=8):
    out = []
    for _ in range(count):
        d = rng.integers(1, max_dim + 1)
        out.append(normalize_descending(rng.dirichlet(np.ones(d) * rng.uniform(0.2, 3.0))))
    return out


probabilities = st.lists(st.floats(1e-3, 1.0), min_size=1, max_size=7).map(normalize_descending)


class TestNormalize:
    def test_sorting(self):
        assert sv(0.1, 0.4, 0.1, 0.4).coeffs.tolist() == [0.4, 0.4, 0.1, 0.1]

    def test_renormalization(self):
        assert normalize_descending([2.0, 2.0], 1e-12).coeffs.tolist() == [0.5, 0.5]

    def test_truncation(self):
        assert normalize_descending([0.5, 0.5, 1e-15], 1e-12).coeffs.tolist() == [0.5, 0.5]

    def test_all_truncated(self):
        with pytest.raises(AllTruncated):
            normalize_descending([1e-20, 0.0], 1e-12)

    def test_negative(self):
        with pytest.raises(NegativeInput):
            normalize_descending([0.5, -0.1])

    def test_tiny_negative_noise_dropped(self):
        assert normalize_descending([1.0, -1e-30], 1e-24).coeffs.tolist() == [1.0]

    def test_constructor_validates(self):
        with pytest.raises(ValueError):
            SchmidtVector([0.3, 0.7])
        with pytest.raises(ValueError):
            SchmidtVector([0.5, 0.4])
        v = SchmidtVector([0.7, 0.3])
        with pytest.raises(ValueError):
            v.coeffs[0] = 1.0


class TestMajorization:
    def test_textbook_pair_fails_both_ways(self):
        assert not locc_convertible(PSI, PSI_P)
        assert not locc_convertible(PSI_P, PSI)

    def test_maximally_entangled_converts_to_anything(self):
        rng = np.random.default_rng(1)
        for q in random_vectors(rng, 50, max_dim=2):
            assert locc_convertible(sv(0.5, 0.5), q)

    def test_identity(self):
        assert locc_convertible(sv(0.7, 0.3), sv(0.7, 0.3))

    def test_padding(self):
        assert locc_convertible(sv(1 / 3, 1 / 3, 1 / 3), sv(0.5, 0.5))
        assert not locc_convertible(sv(0.5, 0.5), sv(1 / 3, 1 / 3, 1 / 3))

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        ps = random_vectors(rng, 10_000, max_dim=6)
        qs = random_vectors(rng, 10_000, max_dim=6)
        for p, q in zip(ps, qs):
            assert locc_convertible(p, q) == tail_sums_dominate(p.coeffs, q.coeffs)


class TestRenyi:
    def test_flat(self):
        p = sv(0.25, 0.25, 0.25, 0.25)
        for a in (0, 0.3, 1, 2, 7.5, math.inf):
            assert renyi_entropy(p, a) == pytest.approx(2.0, abs=1e-12)

    def test_one_ebit(self):
        assert renyi_entropy(sv(0.5, 0.5), 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_min_entropy(self):
        assert renyi_entropy(sv(0.5, 0.3, 0.2), math.inf) == pytest.approx(1.0, abs=1e-12)

    def test_continuous_through_alpha_one(self):
        p = sv(0.6, 0.3, 0.1)
        vn = renyi_entropy(p, 1.0)
        for eps in (1e-3, 1e-5, 2e-6):
            assert renyi_entropy(p, 1 - eps) == pytest.approx(vn, abs=10 * eps)
            assert renyi_entropy(p, 1 + eps) == pytest.approx(vn, abs=10 * eps)

    def test_curve_matches_scalar(self):
        rng = np.random.default_rng(2)
        alphas = np.concatenate(([0.0, 1.0, 1 - 1e-7], np.geomspace(1e-3, 100, 200), [math.inf]))
        for p in random_vectors(rng, 100):
            scalar = [renyi_entropy(p, a) for a in alphas]
            np.testing.assert_allclose(renyi_curve(p, alphas), scalar, rtol=0, atol=1e-12)

    def test_negative_alpha_rejected(self):
        with pytest.raises(ValueError):
            renyi_entropy(sv(1.0), -0.5)

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(3)
        alphas = np.concatenate(([0.0], np.geomspace(1e-3, 200, 300), [math.inf]))
        for p in random_vectors(rng, 1000):
            s = renyi_curve(p, alphas)
            assert np.all(np.diff(s) <= 1e-9)

    def test_limits(self):
        rng = np.random.default_rng(4)
        for p in random_vectors(rng, 1000):
            assert abs(renyi_entropy(p, 0) - math.log2(len(p))) <= 1e-9
            assert abs(renyi_entropy(p, math.inf) + math.log2(p.coeffs[0])) <= 1e-9
            # the finite-α branch approaches both limits
            assert renyi_entropy(p, 1e4) == pytest.approx(renyi_entropy(p, math.inf), abs=1e-3)


class TestTensorProduct:
    def test_catalyst_spectra(self):
        lam = tensor_product(PSI, CAT)
        np.testing.assert_allclose(lam.coeffs, [0.24, 0.24, 0.16, 0.16, 0.06, 0.06, 0.04, 0.04], atol=1e-12)
        lam_p = tensor_product(PSI_P, CAT)
        np.testing.assert_allclose(lam_p.coeffs, [0.30, 0.20, 0.15, 0.15, 0.10, 0.10], atol=1e-12)

    def test_trivial_catalyst(self):
        assert tensor_product(PSI, sv(1.0)).allclose(PSI)

    @given(probabilities, probabilities, probabilities)
    @settings(max_examples=200, deadline=None)
    def test_commutative_and_associative(self, a, b, c):
        assert tensor_product(a, b).allclose(tensor_product(b, a))
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        assert left.allclose(right)
        assert abs(left.coeffs.sum() - 1) <= 1e-10


class TestInterceptions:
    def test_identical(self):
        assert find_interceptions(PSI, PSI) == []

    def test_dominated(self):
        assert find_interceptions(sv(0.5, 0.5), sv(0.9, 0.1)) == []

    def test_known_crossing(self):
        # H0 favours p (rank 3), H_inf favours q
        p, q = sv(0.7, 0.2, 0.1), sv(0.6, 0.4)
        cross = find_interceptions(p, q)
        assert len(cross) == 1
        a = cross[0]
        dense = np.linspace(a - 0.01, a + 0.01, 5)
        d = [renyi_entropy(p, x) - renyi_entropy(q, x) for x in dense]
        assert d[0] * d[-1] < 0

    def test_refine_tolerance(self):
        p, q = sv(0.7, 0.2, 0.1), sv(0.6, 0.4)
        fine = find_interceptions(p, q, AlphaGrid(refine_tol=1e-9))[0]
        coarse = find_interceptions(p, q)[0]
        assert abs(fine - coarse) <= 1e-3

    def test_crossing_beyond_scan_found_through_limit(self):
        grid = AlphaGrid(alpha_min=0.01, alpha_max=0.5, points=50)
        p, q = sv(0.7, 0.2, 0.1), sv(0.6, 0.4)
        assert find_interceptions(p, q, grid) == find_interceptions(p, q, grid)
        assert len(find_interceptions(p, q, grid)) == 1

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            AlphaGrid(alpha_min=2.0, alpha_max=1.0)
        with pytest.raises(ValueError):
            AlphaGrid(points=1)
        with pytest.raises(ValueError):
            AlphaGrid(refine_tol=0)


class TestVerdict:
    def test_equivalent(self):
        assert elocc_verdict(PSI, PSI).direction is Direction.Equivalent

    def test_flat_dominates(self):
        assert elocc_verdict(sv(0.25, 0.25, 0.25, 0.25), sv(0.5, 0.5)).direction is Direction.AtoB
        assert elocc_verdict(sv(0.5, 0.5), sv(0.25, 0.25, 0.25, 0.25)).direction is Direction.BtoA

    def test_catalysable_pair_is_not_incomparable(self):
        # a catalyst exists, so the Rényi curves cannot cross
        v = elocc_verdict(PSI, PSI_P)
        assert v.direction is Direction.AtoB
        assert v.crossings == ()

    def test_incomparable(self):
        v = elocc_verdict(sv(0.7, 0.2, 0.1), sv(0.6, 0.4))
        assert v.direction is Direction.Incomparable and len(v.crossings) == 1

    def test_verdict_invariant(self):
        with pytest.raises(ValueError):
            ConversionVerdict(Direction.Incomparable, ())
        with pytest.raises(ValueError):
            ConversionVerdict(Direction.AtoB, (1.0,))

    def test_majorization_implies_dominance(self):
        rng = np.random.default_rng(11)
        grid = AlphaGrid()
        hits = 0
        for p, q in zip(random_vectors(rng, 10_000, 6), random_vectors(rng, 10_000, 6)):
            if locc_convertible(p, q):
                hits += 1
                assert find_interceptions(p, q, grid) == []
                assert elocc_verdict(p, q, grid).direction in (Direction.AtoB, Direction.Equivalent)
        assert hits > 500


class TestCatalyst:
    def test_textbook(self):
        assert verify_catalyst(PSI, PSI_P, CAT)

    def test_trivial_catalyst_fails(self):
        assert not verify_catalyst(PSI, PSI_P, sv(1.0))

    def test_self(self):
        assert verify_catalyst(PSI, PSI, CAT)

    def test_soundness(self):
        rng = np.random.default_rng(5)
        found = 0
        for _ in range(3000):
            p, q = random_vectors(rng, 2, 4)
            c = random_vectors(rng, 1, 3)[0]
            if verify_catalyst(p, q, c):
                found += 1
                assert elocc_verdict(p, q).direction in (Direction.AtoB, Direction.Equivalent)
        assert found > 0


class TestCsv:
    @given(probabilities)
    @settings(max_examples=50, deadline=None)
    def test_roundtrip(self, tmp_path_factory, p):
        path = tmp_path_factory.mktemp("csv") / "p.csv"
        write_schmidt_csv(p, path)
        assert read_schmidt_csv(path).allclose(p, atol=1e-15)

    def test_unordered_input(self, tmp_path):
        path = tmp_path / "q.csv"
        path.write_text("lambda\n0.2\n0.5\n0.3\n")
        assert read_schmidt_csv(path).coeffs.tolist() == [0.5, 0.3, 0.2]

    def test_missing_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("p\n0.5\n0.5\n")
        with pytest.raises(ValueError):
            read_schmidt_csv(path)
