"""Class-label permutation machinery for empirical multiplicity estimates.

Occurrence sets never change under permutation, only which transactions count
as positive. Each pattern's occurrence list is packed into an integer bit
vector once; a permuted contingency table is then a single popcount against
the permuted positive-class mask. Masks are derived independently per
permutation index from a spawned seed sequence, so any subset of permutations
can be recomputed in any order, on any number of workers, with identical
results.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import GraphDatabase, occurrence_bitvector
from .mining import Pattern
from .stats import TailMode, pvalues_over_support

_TAILS = ("left", "right", "two")


@dataclass(frozen=True)
class PermutationPlan:
    """How many label shuffles to draw and from which seed."""

    iterations: int
    seed: int
    class_counts: tuple[int, int]

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        n, n_prime = self.class_counts
        if n < 1 or n_prime < 1:
            raise ValueError(f"class counts must be positive, got {self.class_counts}")


def permutation_mask(plan: PermutationPlan, index: int) -> int:
    """Bit vector of positive positions under permutation ``index``.

    Exactly n bits are set among the n + n' transaction positions. The mask
    depends only on (seed, index), never on previously drawn masks.
    """
    if not 0 <= index < plan.iterations:
        raise ValueError(f"index {index} outside [0, {plan.iterations})")
    n, n_prime = plan.class_counts
    total = n + n_prime
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=plan.seed, spawn_key=(index,))
    )
    slots = np.zeros(total, dtype=np.uint8)
    slots[:n] = 1
    rng.shuffle(slots)
    mask = 0
    for position in np.flatnonzero(slots):
        mask |= 1 << int(position)
    return mask


def permuted_positive_count(occurrence_bits: int, mask: int) -> int:
    return (occurrence_bits & mask).bit_count()


def _check_plan_matches(plan: PermutationPlan, db: GraphDatabase) -> None:
    if plan.class_counts != (db.n, db.n_prime):
        raise ValueError(
            f"plan counts {plan.class_counts} do not match database "
            f"({db.n}, {db.n_prime})"
        )


def min_p_distribution(
    testable: Sequence[Pattern],
    plan: PermutationPlan,
    db: GraphDatabase,
    tail: TailMode = "two",
    threads: int = 1,
) -> tuple[float, ...]:
    """Per-permutation minima of the exact-test p-value over ``testable``.

    Element j is reproducible from (seed, j) alone. Raises on an empty
    testable set: the minimum over nothing has no meaning and callers must
    treat the estimate as unavailable rather than receive a vacuous one.
    """
    if not testable:
        raise ValueError("min-p distribution needs at least one testable pattern")
    _check_plan_matches(plan, db)
    internal_tail = db.internal_tail(tail)

    prepared = []
    for pattern in testable:
        lo, pvals = pvalues_over_support(
            pattern.frequency, db.n, db.n_prime, internal_tail
        )
        bits = occurrence_bitvector(db, pattern.occurrences)
        prepared.append((bits, lo, pvals))

    def one(index: int) -> float:
        mask = permutation_mask(plan, index)
        best = math.inf
        for bits, lo, pvals in prepared:
            p = pvals[permuted_positive_count(bits, mask) - lo]
            if p < best:
                best = p
        return best

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return tuple(pool.map(one, range(plan.iterations)))
    return tuple(one(j) for j in range(plan.iterations))


def effective_num_tests(
    min_p_samples: Sequence[float], alpha: float, num_testable: int
) -> float:
    """Effective test count implied by the permutation min-p distribution.

    Reads the empirical lower-alpha quantile alpha' off the sorted samples and
    inverts the Sidak relation alpha' = 1 - (1 - alpha)^(1/m). Clamped to
    [1, num_testable]: dependence can only reduce the count, never raise it
    past the literal number of testable patterns.
    """
    if not min_p_samples:
        raise ValueError("need at least one permutation sample")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if num_testable < 1:
        raise ValueError(f"num_testable must be >= 1, got {num_testable}")
    ordered = sorted(min_p_samples)
    rank = math.ceil(alpha * len(ordered))
    alpha_prime = ordered[rank - 1]
    if alpha_prime <= 0.0:
        positive = [s for s in ordered if s > 0.0]
        alpha_prime = positive[0] if positive else sys.float_info.min
    if alpha_prime >= 1.0:
        return 1.0
    m_eff = math.log1p(-alpha) / math.log1p(-alpha_prime)
    return min(float(num_testable), max(1.0, m_eff))


def empirical_fwer(
    testable: Sequence[Pattern],
    threshold: float,
    plan: PermutationPlan,
    db: GraphDatabase,
    tail: TailMode = "two",
    threads: int = 1,
) -> float:
    """Fraction of permutations whose best p-value beats ``threshold``.

    The comparison is strict, matching the significance rule. An empty
    testable set can never produce a rejection, so its rate is 0.
    """
    if not testable:
        return 0.0
    samples = min_p_distribution(testable, plan, db, tail, threads)
    return sum(1 for s in samples if s < threshold) / len(samples)


def write_min_p_samples(path, samples: Iterable[float]) -> None:
    """One sample per line, full round-trip precision."""
    with open(path, "w", encoding="ascii") as handle:
        for sample in samples:
            handle.write(f"{sample:.17g}\n")
