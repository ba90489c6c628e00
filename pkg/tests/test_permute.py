import math
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmine.graphs import GraphDatabase, LabeledGraph, occurrence_bitvector
from sigmine.mining import MinerConfig
from sigmine.permute import (
    PermutationPlan,
    effective_num_tests,
    empirical_fwer,
    min_p_distribution,
    permutation_mask,
    permuted_positive_count,
    write_min_p_samples,
)
from sigmine.search import find_root
from sigmine.stats import min_attainable_pvalue

CONFIG = MinerConfig(min_frequency=1)


def edgeless(gid, labels):
    return LabeledGraph(gid, labels, ())


@pytest.fixture
def enriched_db():
    # A fills the ten class 1 graphs, B the ten class 0 graphs
    graphs = [edgeless(i, (0,)) for i in range(10)]
    graphs += [edgeless(10 + i, (1,)) for i in range(10)]
    return GraphDatabase.from_graphs(
        tuple(graphs), (1,) * 10 + (0,) * 10, vertex_tokens=("A", "B")
    )


@pytest.fixture
def enriched_result(enriched_db):
    return find_root(enriched_db, 0.05, CONFIG, "right")


class TestPlan:
    def test_validation(self):
        with pytest.raises(ValueError):
            PermutationPlan(0, 1, (4, 4))
        with pytest.raises(ValueError):
            PermutationPlan(10, 1, (0, 4))

    def test_mask_popcount_and_width(self):
        plan = PermutationPlan(50, 123, (7, 9))
        for j in range(50):
            mask = permutation_mask(plan, j)
            assert mask.bit_count() == 7
            assert mask < (1 << 16)

    def test_masks_depend_only_on_seed_and_index(self):
        plan = PermutationPlan(20, 99, (5, 5))
        late = permutation_mask(plan, 17)
        early = permutation_mask(plan, 3)
        assert permutation_mask(plan, 3) == early
        assert permutation_mask(plan, 17) == late
        other = PermutationPlan(20, 100, (5, 5))
        assert permutation_mask(other, 3) != early or permutation_mask(other, 17) != late

    def test_index_bounds(self):
        plan = PermutationPlan(5, 0, (2, 2))
        with pytest.raises(ValueError):
            permutation_mask(plan, 5)
        with pytest.raises(ValueError):
            permutation_mask(plan, -1)


class TestPermutedCounts:
    def test_popcount_identity(self):
        assert permuted_positive_count(0b1011, 0b0110) == 1
        assert permuted_positive_count(0b1111, 0b1111) == 4
        assert permuted_positive_count(0b1000, 0b0111) == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
    def test_matches_explicit_membership_count(self, occ, mask):
        explicit = sum(1 for t in range(16) if occ >> t & 1 and mask >> t & 1)
        assert permuted_positive_count(occ, mask) == explicit


class TestMinPDistribution:
    def test_empty_testable_rejected(self, enriched_db):
        plan = PermutationPlan(10, 0, (10, 10))
        with pytest.raises(ValueError):
            min_p_distribution((), plan, enriched_db, "right")

    def test_plan_mismatch_rejected(self, enriched_db, enriched_result):
        plan = PermutationPlan(10, 0, (9, 11))
        with pytest.raises(ValueError):
            min_p_distribution(enriched_result.testable, plan, enriched_db, "right")

    def test_reproducible_and_bounded_below(self, enriched_db, enriched_result):
        plan = PermutationPlan(200, 7, (10, 10))
        samples = min_p_distribution(enriched_result.testable, plan, enriched_db, "right")
        assert len(samples) == 200
        again = min_p_distribution(enriched_result.testable, plan, enriched_db, "right")
        assert samples == again
        floor = min(
            min_attainable_pvalue(p.frequency, 10, 10, "right")
            for p in enriched_result.testable
        )
        assert all(floor <= s <= 1.0 for s in samples)

    def test_other_seed_differs(self, enriched_db, enriched_result):
        a = min_p_distribution(
            enriched_result.testable, PermutationPlan(50, 7, (10, 10)), enriched_db, "right"
        )
        b = min_p_distribution(
            enriched_result.testable, PermutationPlan(50, 8, (10, 10)), enriched_db, "right"
        )
        assert a != b

    def test_threads_do_not_change_values(self, enriched_db, enriched_result):
        plan = PermutationPlan(64, 21, (10, 10))
        serial = min_p_distribution(enriched_result.testable, plan, enriched_db, "right")
        threaded = min_p_distribution(
            enriched_result.testable, plan, enriched_db, "right", threads=4
        )
        assert serial == threaded

    def test_single_pattern_tracks_its_own_table(self, enriched_db, enriched_result):
        # with one pattern the minimum is that pattern's p-value, which can
        # be recomputed from the mask by explicit membership counting
        pattern = next(p for p in enriched_result.testable if p.x == 10)
        plan = PermutationPlan(40, 5, (10, 10))
        samples = min_p_distribution([pattern], plan, enriched_db, "right")
        bits = occurrence_bitvector(enriched_db, pattern.occurrences)
        from sigmine.stats import ContingencyTable, fisher_pvalue

        for j, sample in enumerate(samples):
            mask = permutation_mask(plan, j)
            x = sum(1 for t in pattern.occurrences if mask >> t & 1)
            assert x == permuted_positive_count(bits, mask)
            table = ContingencyTable(x=x, x_prime=pattern.frequency - x, n=10, n_prime=10)
            assert sample == fisher_pvalue(table, "right").pvalue


class TestEffectiveNumTests:
    def test_quantile_equal_to_alpha_gives_one(self):
        samples = [0.01, 0.02, 0.03, 0.04, 0.05] + [0.9] * 95
        assert effective_num_tests(samples, 0.05, 50) == 1.0

    def test_worked_example(self):
        samples = [0.005] * 50 + [0.9] * 950
        m_eff = effective_num_tests(samples, 0.05, 1000)
        assert m_eff == pytest.approx(math.log1p(-0.05) / math.log1p(-0.005), rel=1e-15)
        assert m_eff == pytest.approx(10.23, rel=1e-3)

    @pytest.mark.parametrize("m", [10, 100])
    def test_sidak_inversion_recovers_m(self, m):
        alpha_prime = 1.0 - (1.0 - 0.05) ** (1.0 / m)
        samples = [alpha_prime] * 50 + [0.999] * 950
        assert effective_num_tests(samples, 0.05, 1000) == pytest.approx(m, rel=1e-12)

    def test_zero_quantile_clamps_to_smallest_positive(self):
        samples = [0.0] * 50 + [1e-8] + [0.9] * 949
        # alpha' becomes 1e-8, so the implied count explodes and the
        # num_testable ceiling takes over
        assert effective_num_tests(samples, 0.05, 20) == 20.0

    def test_all_zero_samples_still_finite(self):
        assert effective_num_tests([0.0] * 100, 0.05, 7) == 7.0

    def test_degenerate_quantile_at_one(self):
        assert effective_num_tests([1.0] * 100, 0.05, 50) == 1.0

    def test_never_below_one(self):
        samples = [0.5] * 100
        assert effective_num_tests(samples, 0.05, 50) == 1.0

    def test_single_sample(self):
        assert effective_num_tests([0.01], 0.05, 10) == pytest.approx(
            math.log1p(-0.05) / math.log1p(-0.01), rel=1e-15
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            effective_num_tests([], 0.05, 5)
        with pytest.raises(ValueError):
            effective_num_tests([0.5], 1.5, 5)
        with pytest.raises(ValueError):
            effective_num_tests([0.5], 0.05, 0)


class TestEmpiricalFwer:
    def test_zero_threshold(self, enriched_db, enriched_result):
        plan = PermutationPlan(50, 3, (10, 10))
        assert empirical_fwer(enriched_result.testable, 0.0, plan, enriched_db, "right") == 0.0

    def test_threshold_one_with_disjoint_patterns(self, enriched_db, enriched_result):
        # A and B partition the transactions, so whenever one sits at a
        # central table the other sits at an extreme one; some p-value is
        # always below 1
        plan = PermutationPlan(100, 3, (10, 10))
        assert empirical_fwer(enriched_result.testable, 1.0, plan, enriched_db, "right") == 1.0

    def test_attainable_bound_is_never_beaten(self, enriched_db, enriched_result):
        pattern = next(p for p in enriched_result.testable if p.x == 10)
        floor = min_attainable_pvalue(pattern.frequency, 10, 10, "right")
        plan = PermutationPlan(300, 17, (10, 10))
        assert empirical_fwer([pattern], floor, plan, enriched_db, "right") == 0.0

    def test_empty_testable_is_zero(self, enriched_db):
        plan = PermutationPlan(10, 0, (10, 10))
        assert empirical_fwer((), 0.5, plan, enriched_db, "right") == 0.0

    def test_null_database_respects_alpha(self):
        # labels carry no signal, so rejecting at alpha / |tau| must keep the
        # family-wise error rate near or below alpha
        import random

        rnd = random.Random(3)
        graphs = []
        for gid in range(8):
            nv = rnd.randint(2, 4)
            labels = tuple(rnd.randint(0, 1) for _ in range(nv))
            edges = []
            for u in range(nv):
                for v in range(u + 1, nv):
                    if rnd.random() < 0.5:
                        edges.append((u, v, 0))
            graphs.append(LabeledGraph(gid, labels, tuple(edges)))
        db = GraphDatabase.from_graphs(tuple(graphs), (1, 1, 1, 1, 0, 0, 0, 0))
        alpha = 0.2
        result = find_root(db, alpha, CONFIG, "two")
        assert result.testable
        plan = PermutationPlan(1000, 11, (db.n, db.n_prime))
        rate = empirical_fwer(
            result.testable, alpha / len(result.testable), plan, db, "two"
        )
        assert rate <= alpha + 3 * math.sqrt(alpha * (1 - alpha) / plan.iterations)


def test_write_min_p_samples_round_trips(tmp_path):
    path = tmp_path / "minp.txt"
    samples = (0.12345678901234567, 1.0, sys.float_info.min)
    write_min_p_samples(path, samples)
    lines = path.read_text(encoding="ascii").splitlines()
    assert len(lines) == 3
    assert tuple(float(line) for line in lines) == samples
