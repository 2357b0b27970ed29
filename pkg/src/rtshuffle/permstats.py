"""Exact permutation statistics and the Monte Carlo shuffle simulator.

The exact side (fixed-point law, q-cycle probabilities, counts of
permutations with only short cycles) is integer/rational arithmetic.  The
simulator drives the lazy transposition walk with numpy generators; each
trajectory derives its own stream from ``(seed, trajectory index)``, so
runs are reproducible and trivially parallel.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import SizeLimitError
from .characters import class_size
from .partitions import enumerate_partitions

# Exhaustive sweep over conjugacy classes stays trivial up to here.
QCYCLE_N_MAX = 12

_SIM_CHUNK = 1024


def fixed_point_law(n: int, m: int) -> Fraction:
    """P(a uniform permutation of n points has exactly m fixed points), exactly.

    Inclusion-exclusion gives ``(1/m!) * sum_{i<=n-m} (-1)^i / i!``.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not 0 <= m <= n:
        raise ValueError(f"fixed-point count must satisfy 0 <= m <= n, got m={m}, n={n}")
    inner = sum(Fraction((-1) ** i, factorial(i)) for i in range(n - m + 1))
    return inner / factorial(m)


def qcycle_probability(n: int, q: int, m: int) -> Fraction:
    """P(a uniform permutation of n points has exactly m cycles of length q).

    Computed exactly by summing class sizes over all cycle types with the
    prescribed q-cycle count, hence the small-n limit.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > QCYCLE_N_MAX:
        raise SizeLimitError(f"qcycle_probability supports n <= {QCYCLE_N_MAX}, got {n}")
    if q < 1:
        raise ValueError(f"cycle length must be positive, got {q}")
    if m < 0:
        raise ValueError(f"cycle count must be non-negative, got {m}")
    total = 0
    for mu in enumerate_partitions(n):
        if sum(1 for part in mu if part == q) == m:
            total += class_size(mu)
    return Fraction(total, factorial(n))


def count_small_cycle_perms(n: int, j: int) -> int:
    """Number of permutations of n points whose cycles all have length <= j.

    Recurrence on the cycle containing the last point: a(0) = 1 and
    ``a(n) = sum_{q<=min(j,n)} C(n-1, q-1) * (q-1)! * a(n-q)``.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if j < 1:
        raise ValueError(f"cycle-length bound must be positive, got {j}")
    a = [1] + [0] * n
    for k in range(1, n + 1):
        total = 0
        for q in range(1, min(j, k) + 1):
            total += comb(k - 1, q - 1) * factorial(q - 1) * a[k - q]
        a[k] = total
    return a[n]


def small_cycle_log_margin(n: int, j: int) -> float:
    """Margin of the exponential-rarity bound for all-short-cycle permutations.

    Returns ``log(count / n!) + n log(n) / T(j)`` with ``T(j) = 1 + ... + j``.
    A negative value certifies, at this (n, j), that permutations with all
    cycles of length <= j occupy at most an exp(-n log(n) / T(j)) fraction
    of the group.  The bound is asymptotic, so small n may legitimately
    give a positive margin; callers should report rather than assert it.
    """
    if j < 2:
        raise ValueError(f"margin is defined for j >= 2, got {j}")
    count = count_small_cycle_perms(n, j)
    t_j = j * (j + 1) // 2
    return math.log(count) - math.lgamma(n + 1) + n * math.log(n) / t_j


@dataclass(frozen=True)
class PermState:
    """A permutation of {0, ..., n-1} in one-line notation."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(n)):
            raise ValueError("mapping must be a bijection of 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "PermState":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def compose(self, other: "PermState") -> "PermState":
        """self after other: x -> self(other(x))."""
        if len(self.mapping) != len(other.mapping):
            raise ValueError("cannot compose permutations of different degrees")
        return PermState(tuple(self.mapping[other.mapping[x]] for x in range(self.n)))


@dataclass
class CycleCensus:
    """Cycle-length counts of a permutation: counts[q] = number of q-cycles."""

    counts: dict[int, int]

    @property
    def total_points(self) -> int:
        return sum(q * k for q, k in self.counts.items())

    def fixed_points(self) -> int:
        return self.counts.get(1, 0)

    def cycle_type(self) -> tuple[int, ...]:
        parts = []
        for q in sorted(self.counts, reverse=True):
            parts.extend([q] * self.counts[q])
        return tuple(parts)


def cycle_census(state) -> CycleCensus:
    """Cycle-length counts of a permutation given as PermState or one-line sequence."""
    mapping = state.mapping if isinstance(state, PermState) else tuple(int(x) for x in state)
    n = len(mapping)
    seen = [False] * n
    counts: Counter[int] = Counter()
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = mapping[x]
            length += 1
        counts[length] += 1
    return CycleCensus(counts=dict(counts))


@dataclass(frozen=True)
class SimConfig:
    """Reproducible walk experiment: the seed fully determines all output."""

    n: int
    t: int
    sample_count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"walk needs n >= 2, got {self.n}")
        if self.t < 0:
            raise ValueError(f"step count must be non-negative, got {self.t}")
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def _trajectory_rng(seed: int, trajectory: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(trajectory,))
    return np.random.Generator(np.random.PCG64(seq))


def _trajectory_draws(seed: int, trajectory: int, n: int, t: int) -> np.ndarray:
    # One (i, j) pair per step: i == j is the lazy step (probability 1/n),
    # otherwise {i, j} is a uniform transposition, each pair mass 2/n^2 --
    # exactly the lazy transposition step distribution.
    rng = _trajectory_rng(seed, trajectory)
    return rng.integers(0, n, size=(t, 2), dtype=np.int64)


def simulate_walk(cfg: SimConfig, trajectory: int = 0) -> PermState:
    """Final state of one trajectory of the lazy transposition walk.

    Trajectory ``k`` here is bit-identical to row ``k`` of a batched
    histogram run with the same config.
    """
    if not 0 <= trajectory < cfg.sample_count:
        raise ValueError(f"trajectory index {trajectory} outside 0..{cfg.sample_count - 1}")
    draws = _trajectory_draws(cfg.seed, trajectory, cfg.n, cfg.t)
    perm = list(range(cfg.n))
    for i, j in draws:
        perm[i], perm[j] = perm[j], perm[i]
    return PermState(tuple(int(x) for x in perm))


@dataclass
class FixedPointHistogram:
    """Empirical law of the fixed-point count at time t, with a Poisson reference."""

    counts: dict[int, int]
    sample_count: int
    ref_rate: float
    tv: float
    config: "SimConfig | None" = field(repr=False, default=None)

    def empirical_probability(self, m: int) -> float:
        return self.counts.get(m, 0) / self.sample_count


def empirical_fixed_point_hist(cfg: SimConfig, ref_rate: float = 1.0) -> FixedPointHistogram:
    """Histogram of fixed points over independent trajectories, plus TV to Poisson.

    The distance is computed on support {0, ..., max observed}, and the
    reference Poisson mass beyond that support is added in full, so the
    result is a genuine total variation distance between the empirical law
    and the infinite-support reference.
    """
    from .profiles import poisson_pmf

    if ref_rate <= 0:
        raise ValueError(f"reference rate must be positive, got {ref_rate}")
    n, t = cfg.n, cfg.t
    counts: Counter[int] = Counter()
    identity = np.arange(n, dtype=np.int64)
    done = 0
    while done < cfg.sample_count:
        size = min(_SIM_CHUNK, cfg.sample_count - done)
        draws = np.empty((size, t, 2), dtype=np.int64)
        for k in range(size):
            draws[k] = _trajectory_draws(cfg.seed, done + k, n, t)
        perms = np.tile(identity, (size, 1))
        rows = np.arange(size)
        for s in range(t):
            i = draws[:, s, 0]
            j = draws[:, s, 1]
            vi = perms[rows, i]
            vj = perms[rows, j]
            perms[rows, i] = vj
            perms[rows, j] = vi
        fixed = (perms == identity).sum(axis=1)
        for m, c in zip(*np.unique(fixed, return_counts=True)):
            counts[int(m)] += int(c)
        done += size

    max_observed = max(counts)
    acc = 0.0
    ref_mass = 0.0
    for m in range(max_observed + 1):
        p = poisson_pmf(ref_rate, m)
        ref_mass += p
        acc += abs(counts.get(m, 0) / cfg.sample_count - p)
    tail = max(0.0, 1.0 - ref_mass)
    tv = 0.5 * (acc + tail)
    return FixedPointHistogram(
        counts=dict(sorted(counts.items())),
        sample_count=cfg.sample_count,
        ref_rate=ref_rate,
        tv=tv,
        config=cfg,
    )
