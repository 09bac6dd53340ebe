"""Triadic random graph model: sampling, analytics, and profile design."""

import numpy as np
import pytest

from triadnet import motifs, steiner, trgm, triads
from triadnet.graphs import DirectedGraph


def dist_on(pattern_weights: dict) -> np.ndarray:
    d = np.zeros(16)
    for pid, w in pattern_weights.items():
        d[pid - 1] = w
    return d / d.sum()


class TestErDistribution:
    def test_extremes(self):
        np.testing.assert_allclose(trgm.er_distribution(0.0), dist_on({1: 1.0}))
        np.testing.assert_allclose(trgm.er_distribution(1.0), dist_on({16: 1.0}))

    def test_symbolic_completeness(self):
        import sympy

        p = sympy.Symbol("p")
        total = sum(
            info.orbit_size * p**info.arcs * (1 - p) ** (6 - info.arcs)
            for info in triads.PATTERNS
        )
        assert sympy.simplify(total - 1) == 0

    @pytest.mark.parametrize("p", [0.05, 0.3, 0.77])
    def test_numeric_normalization(self, p):
        assert trgm.er_distribution(p).sum() == pytest.approx(1.0, abs=1e-12)

    def test_known_terms(self):
        p = 0.3
        d = trgm.er_distribution(p)
        assert d[0] == pytest.approx((1 - p) ** 6)
        assert d[1] == pytest.approx(6 * p * (1 - p) ** 5)
        assert d[2] == pytest.approx(3 * p * p * (1 - p) ** 4)  # mutual dyad
        assert d[15] == pytest.approx(p**6)


class TestExpectedDensity:
    def test_worked_mixture(self):
        # 60% of triples get a two-arc pattern, 40% a five-arc pattern
        d = dist_on({4: 0.6, 15: 0.4})
        assert trgm.expected_density(d) == pytest.approx((0.6 * 2 + 0.4 * 5) / 6)

    def test_empty(self):
        assert trgm.expected_density(dist_on({1: 1.0})) == 0.0

    def test_monte_carlo_agreement(self):
        d = trgm.er_distribution(0.08)
        n = 25
        pred = trgm.expected_density(d)
        dens = []
        for s in range(100):
            g = trgm.sample_trgm(n, d, rng_seed=s)
            dens.append(g.arc_count / (n * (n - 1)))
        dens = np.array(dens)
        se = dens.std(ddof=1) / np.sqrt(dens.size)
        assert abs(dens.mean() - pred) < 3 * se


class TestUniformSimplexCounts:
    def test_sum_constraint(self):
        assert trgm.uniform_simplex_counts(49, 0).sum() == 392
        assert trgm.uniform_simplex_counts(7, 1).sum() == 7

    def test_marginal_mean(self):
        draws = np.array([trgm.uniform_simplex_counts(49, s) for s in range(10_000)])
        means = draws.mean(axis=0)
        se = draws.std(axis=0, ddof=1) / np.sqrt(draws.shape[0])
        assert (np.abs(means - 392 / 16) < 3 * se).all()


class TestSampling:
    def test_full_pattern_gives_complete_graph(self):
        g = trgm.sample_trgm(7, dist_on({16: 1.0}), rng_seed=0)
        assert g.arc_count == 7 * 6

    def test_seed_counts_give_exact_arcs(self):
        for seed in range(5):
            g = trgm.sample_trgm(49, trgm.FFL_SEED_COUNTS_49, rng_seed=seed)
            assert g.arc_count == 98
            g = trgm.sample_trgm(49, trgm.LOOP_SEED_COUNTS_49, rng_seed=seed)
            assert g.arc_count == 98

    def test_arc_count_is_exact_for_any_counts(self):
        counts = trgm.uniform_simplex_counts(25, 3)
        expected = int((counts * triads.ARCS_PER_PATTERN).sum())
        for seed in range(4):
            g = trgm.sample_trgm(25, counts, rng_seed=seed)
            assert g.arc_count == expected

    def test_degree_balance_for_asymmetric_pattern(self):
        g = trgm.sample_trgm(25, dist_on({4: 1.0}), rng_seed=9)
        ins = sum(g.in_degree(i) for i in range(g.n))
        outs = sum(g.out_degree(i) for i in range(g.n))
        assert ins == outs == g.arc_count

    def test_counts_census_matches_assignment(self):
        counts = trgm.FFL_SEED_COUNTS_49
        g = trgm.sample_trgm(49, counts, rng_seed=11)
        # FFLs can only arise on the 30 designated triples plus chance
        # overlaps, which dyad-disjointness forbids entirely for triangles
        assert triads.census(g)[7] >= 30

    def test_er_spec_matches_directed_er_statistics(self):
        p = 0.1
        g = trgm.sample_trgm(49, trgm.er_distribution(p), rng_seed=21)
        n_arcs = 49 * 48 * p
        sigma = np.sqrt(49 * 48 * p * (1 - p))
        assert abs(g.arc_count - n_arcs) < 4 * sigma

    def test_determinism(self):
        d = trgm.er_distribution(0.1)
        assert trgm.sample_trgm(25, d, 5) == trgm.sample_trgm(25, d, 5)

    def test_inadmissible_order(self):
        with pytest.raises(steiner.AdmissibilityError):
            trgm.sample_trgm(48, trgm.er_distribution(0.1), 0)

    def test_bad_counts_sum(self):
        with pytest.raises(ValueError):
            trgm.sample_trgm(49, np.ones(16, dtype=np.int64), 0)


class TestDegreeDistribution:
    def test_normalization(self):
        d = trgm.er_distribution(0.12)
        for direction in ("in", "out"):
            probs = trgm.degree_distribution(d, 49, direction)
            assert abs(probs.sum() - 1.0) < 1e-10

    def test_pure_single_arc_limit_is_poisson(self):
        from scipy import stats as sps

        # only single-arc patterns: no slot ever has in-degree 2
        d = dist_on({1: 0.4, 2: 0.6})
        probs = trgm.degree_distribution(d, 49, "in", form="limit")
        mean_s = 24 * 0.6 / 3.0
        want = sps.poisson.pmf(np.arange(49), mean_s)
        np.testing.assert_allclose(probs, want, atol=1e-10)

    def test_reversal_symmetric_support_balances(self):
        d = dist_on({1: 0.7, 8: 0.1, 9: 0.1, 16: 0.1})
        np.testing.assert_allclose(
            trgm.degree_distribution(d, 25, "in"),
            trgm.degree_distribution(d, 25, "out"),
            atol=1e-12,
        )

    def test_broader_than_poisson_with_double_arcs(self):
        # same mean in-degree, rising double-arc share -> rising variance
        in_pair = next(
            info.pattern_id
            for info in triads.PATTERNS
            if info.connected
            and info.arcs == 2
            and max(triads._in_slot_degrees(info.canonical_code)) == 2
        )
        kappa = np.arange(49)
        stats = []
        total = 0.5  # alpha + 2 beta, fixing the mean at T * total / 3
        for beta in (0.0, 0.125, 0.25):
            alpha = total - 2 * beta
            d = dist_on({1: 1 - alpha - beta, 2: alpha, in_pair: beta})
            probs = trgm.degree_distribution(d, 49, "in")
            mean = (kappa * probs).sum()
            stats.append((mean, ((kappa - mean) ** 2 * probs).sum()))
        means = [s[0] for s in stats]
        variances = [s[1] for s in stats]
        np.testing.assert_allclose(means, means[0], rtol=1e-9)
        assert variances[0] < variances[1] < variances[2]

    def test_monte_carlo_total_variation(self):
        d = dist_on({1: 0.55, 2: 0.15, 3: 0.1, 8: 0.1, 16: 0.1})
        probs = trgm.degree_distribution(d, 25, "in")
        hist = np.zeros(25)
        samples = 300
        for s in range(samples):
            g = trgm.sample_trgm(25, d, rng_seed=s + 500)
            for i in range(25):
                hist[g.in_degree(i)] += 1
        hist /= hist.sum()
        assert 0.5 * np.abs(hist - probs).sum() < 0.03


@pytest.fixture(scope="module")
def sweep_samples():
    """Uniform parameter sweep with Z profiles, shared across tests."""
    samples = []
    n = 25
    for s in range(120):
        counts = trgm.uniform_simplex_counts(n, 9000 + s)
        dist = counts / counts.sum()
        g = trgm.sample_trgm(n, counts, rng_seed=s)
        prof = motifs.z_profile(g, instances=25, steps_per_edge=3.0, rng_seed=s)
        samples.append((dist, prof))
    return samples


class TestPZCorrelation:
    def test_diagonal_dominance(self, sweep_samples):
        c = trgm.p_to_z_correlation(sweep_samples)
        for j, pid in enumerate(triads.CONNECTED_IDS):
            assert c[j, pid - 1] > 0, f"pattern {pid} self-correlation not positive"

    def test_linear_pairs(self):
        rng = np.random.default_rng(12)
        samples = []
        for _ in range(40):
            x = rng.random()
            dist = dist_on({1: 1 - x, 8: x})
            z = np.zeros(13)
            z[4] = 2.0 * x  # pattern 8 slot moves linearly with its mass
            z[5] = -1.0 * x
            prof = motifs.ZProfile(
                z, np.zeros(13), np.zeros(13), np.ones(13), 5,
                np.zeros(13, dtype=np.uint8),
            )
            samples.append((dist, prof))
        c = trgm.p_to_z_correlation(samples)
        assert c[4, 7] == pytest.approx(1.0, abs=1e-9)
        assert c[5, 7] == pytest.approx(-1.0, abs=1e-9)

    def test_uncorrelated_noise(self):
        rng = np.random.default_rng(13)
        samples = []
        n = 500
        for _ in range(n):
            dist = np.full(16, 1 / 16)
            dist = dist + rng.normal(scale=1e-3, size=16)
            dist = np.clip(dist, 0, None)
            dist /= dist.sum()
            z = rng.normal(size=13)
            prof = motifs.ZProfile(
                z, np.zeros(13), np.zeros(13), np.ones(13), 5,
                np.zeros(13, dtype=np.uint8),
            )
            samples.append((dist, prof))
        c = trgm.p_to_z_correlation(samples)
        assert np.nanmax(np.abs(c)) < 3.0 / np.sqrt(n) * 1.8


class TestDesign:
    def test_round_trip_cosine(self, sweep_samples):
        c = trgm.p_to_z_correlation(sweep_samples)
        p0 = dist_on({1: 0.88, 8: 0.08, 4: 0.04})
        target = c @ p0
        target /= np.linalg.norm(target)
        result = trgm.design_distribution(target, c)
        cosine = float(result.predicted_sp @ target)
        assert cosine >= 0.9

    def test_unidirectional_mode(self, sweep_samples):
        c = trgm.p_to_z_correlation(sweep_samples)
        p0 = dist_on({1: 0.85, 2: 0.05, 8: 0.06, 9: 0.04})
        target = c @ p0
        target /= np.linalg.norm(target)
        result = trgm.design_distribution(
            target, c, allowed_patterns=trgm.UNIDIRECTIONAL_IDS
        )
        blocked = [pid - 1 for pid in range(1, 17) if pid not in trgm.UNIDIRECTIONAL_IDS]
        assert result.distribution[blocked].sum() == 0.0
        assert float(result.predicted_sp @ target) >= 0.9

    def test_everything_overrepresented_is_infeasible(self, sweep_samples):
        c = trgm.p_to_z_correlation(sweep_samples)
        target = np.ones(13) / np.sqrt(13)
        try:
            result = trgm.design_distribution(target, c)
        except trgm.InfeasibleTargetError:
            return
        assert float(result.predicted_sp @ target) < 0.9
