"""Exact distance to stationarity of the random-transposition walk.

The walk applies, per step, the identity with probability 1/n and a
uniform transposition otherwise.  Its distribution after t steps is a
class function, so the L1 distance from uniform decomposes over the
irreducible representations:

    d1(t) = (1/n!) * sum over classes |C| * | sum over shapes
            dimension * eigenvalue^t * character |,

with the trivial (single-row) shape removed.  Public results are total
variation, i.e. half of d1.

Truncation keeps only the shapes within ``M`` boxes of the single-row or
the single-column shape (both towers; the column side is evaluated
through the sign twist character(conjugate) = sign * character).  The
dropped shapes are certified by the exact bound
``|d1 - d1_truncated| <= sum over dropped shapes of dimension *
|eigenvalue|^t``, which holds for any subset of shapes.

Exact mode carries every eigenvalue power as an integer over the common
denominator ``(n * C(n, 2))^t``, so results are exact rationals.  Float
mode evaluates eigenvalue powers with 113-bit mantissas and folds an
explicit rounding budget into the reported error bound.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np

from .characters import (
    CharacterCache,
    character_ratio_numerator,
    class_sign,
    class_size,
    default_cache,
)
from .errors import SizeLimitError
from .partitions import Partition, conjugate, dimension, enumerate_partitions
from .profiles import limit_profile

EXACT_N_MAX = 30
FLOAT_N_MAX = 45
ORACLE_N_MAX = 8
ORACLE_T_MAX = 50

# Mantissa bits for float-mode reductions (>= 80 required for the
# advertised accuracy; 113 is quad-precision width).
FLOAT_PREC = 113

MODE_EXACT = "exact"
MODE_FLOAT = "float"

THREADS_ENV_VAR = "RTSHUFFLE_THREADS"
_PARALLEL_MIN_CLASSES = 256


@dataclass(frozen=True)
class WalkParams:
    """Deck size and step count of one walk evaluation."""

    n: int
    t: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"walk needs n >= 2, got {self.n}")
        if self.t < 0:
            raise ValueError(f"step count must be non-negative, got {self.t}")

    @classmethod
    def from_window(cls, n: int, c: float) -> "WalkParams":
        """Parameters at time floor(n log(n) / 2 + c n)."""
        return cls(n=n, t=mixing_time_steps(n, c))


def mixing_time_steps(n: int, c: float) -> int:
    """floor(n log(n) / 2 + c n), the step count at window parameter c.

    log is the natural logarithm.  A negative result is an argument error:
    the window starts before the walk does.
    """
    if n < 2:
        raise ValueError(f"walk needs n >= 2, got {n}")
    t = math.floor(0.5 * n * math.log(n) + c * n)
    if t < 0:
        raise ValueError(f"window c={c} gives a negative step count at n={n}")
    return t


@dataclass(frozen=True)
class ProfilePoint:
    """One row of a distance-profile curve."""

    n: int
    c: float
    t: int
    tv_main: float
    error_bound: float
    tv_limit: float
    mode: str


@dataclass
class ClassDistribution:
    """Probability mass per conjugacy class (total over its elements), exact."""

    masses: dict[Partition, Fraction]

    def __post_init__(self):
        total = Fraction(0)
        for mu, mass in self.masses.items():
            if mass < 0:
                raise ValueError(f"negative mass {mass} at class {mu}")
            total += mass
        if total != 1:
            raise ValueError(f"class masses must sum to 1, got {total}")


def _check_mode(mode: str) -> str:
    if mode not in (MODE_EXACT, MODE_FLOAT):
        raise ValueError(f"mode must be '{MODE_EXACT}' or '{MODE_FLOAT}', got {mode!r}")
    return mode


def _check_size(n: int, mode: str) -> None:
    limit = EXACT_N_MAX if mode == MODE_EXACT else FLOAT_N_MAX
    if n > limit:
        raise SizeLimitError(f"spectral computation in {mode} mode supports n <= {limit}, got {n}")


def _eigen_numerator(lam: Partition, n: int) -> int:
    """Integer A with walk eigenvalue A / (n * C(n, 2))."""
    return comb(n, 2) + (n - 1) * character_ratio_numerator(lam)


def principal_shapes(n: int, max_deficit: int) -> list[Partition]:
    """Nontrivial shapes within ``max_deficit`` boxes of a single row or column.

    These are the partitions of n whose first row is at least
    ``n - max_deficit`` long or whose first column is at least that tall,
    minus the single-row shape.  Returned in reverse-lexicographic
    descending order so downstream sums are deterministic.
    """
    if max_deficit < 1:
        raise ValueError(f"deficit bound must be >= 1, got {max_deficit}")
    if max_deficit >= n - 1:
        return [lam for lam in enumerate_partitions(n) if lam != (n,)]
    found = set()
    for j in range(max_deficit + 1):
        for rest in enumerate_partitions(j):
            if rest and rest[0] > n - j:
                continue
            lam = (n - j,) + rest
            if lam != (n,):
                found.add(lam)
            tall = conjugate(lam)
            if tall != (n,):
                found.add(tall)
    return sorted(found, reverse=True)


def _class_rows(n: int) -> list[tuple[Partition, int, int]]:
    return [(mu, class_size(mu), class_sign(mu)) for mu in enumerate_partitions(n)]


def _eval_plan(n: int, t: int, shapes) -> list[tuple[Partition, bool, int]]:
    """Per-shape (evaluation shape, sign-twisted?, weight d * A^t).

    Shapes taller than wide are evaluated through their conjugate with the
    sign twist, which keeps the recursion on few-row shapes and shares the
    memo table between a shape and its mirror.
    """
    plan = []
    for lam in shapes:
        weight = dimension(lam) * _eigen_numerator(lam, n) ** t
        if len(lam) > lam[0]:
            plan.append((conjugate(lam), True, weight))
        else:
            plan.append((lam, False, weight))
    return plan


def _chunk_distance_sum(rows, plan, table) -> int:
    """sum over the given class rows of |C| * |inner spectral sum|, exact."""
    from .characters import _strip_char

    total = 0
    for mu, cls, sgn in rows:
        plain = 0
        twisted = 0
        for shape, tw, w in plan:
            chval = _strip_char(shape, mu, table)
            if tw:
                twisted += w * chval
            else:
                plain += w * chval
        total += cls * abs(plain + sgn * twisted)
    return total


_worker_env: dict = {}


def _parallel_init(plan):
    _worker_env["plan"] = plan
    _worker_env["cache"] = CharacterCache()


def _parallel_chunk(rows) -> int:
    return _chunk_distance_sum(rows, _worker_env["plan"], _worker_env["cache"]._table)


def _workers_from_env() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _distance_numerator_exact(n: int, t: int, shapes) -> int:
    """S with TV = S / (2 * n! * (n C(n,2))^t), summed over all classes."""
    plan = _eval_plan(n, t, shapes)
    rows = _class_rows(n)
    workers = _workers_from_env()
    if workers > 1 and len(rows) >= _PARALLEL_MIN_CLASSES:
        chunks = [rows[i::workers] for i in range(workers)]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers, initializer=_parallel_init, initargs=(plan,)) as pool:
            # integer partial sums merge exactly regardless of chunk order
            return sum(pool.map(_parallel_chunk, chunks))
    return _chunk_distance_sum(rows, plan, default_cache()._table)


def _float_relative_error(t: int, n_terms: int) -> float:
    # one rounding per power-step bit, per addition, plus slack
    return (2 * max(t, 1).bit_length() + n_terms + 16) * 2.0 ** (1 - FLOAT_PREC)


def _distance_float(n: int, t: int, shapes) -> tuple[float, float]:
    """(tv, rounding budget) with 113-bit mantissa reductions, fixed order."""
    from .characters import _strip_char

    rows = _class_rows(n)
    table = default_cache()._table
    with mpmath.workprec(FLOAT_PREC):
        big_b = mpmath.mpf(n * comb(n, 2))
        weights = []
        for lam in shapes:
            s_pow = (mpmath.mpf(_eigen_numerator(lam, n)) / big_b) ** t if t else mpmath.mpf(1)
            w = dimension(lam) * s_pow
            if len(lam) > lam[0]:
                weights.append((conjugate(lam), True, w))
            else:
                weights.append((lam, False, w))
        total = mpmath.mpf(0)
        absmass = mpmath.mpf(0)
        for mu, cls, sgn in rows:
            plain = mpmath.mpf(0)
            twisted = mpmath.mpf(0)
            row_abs = mpmath.mpf(0)
            for shape, tw, w in weights:
                chval = _strip_char(shape, mu, table)
                term = w * chval
                row_abs += abs(term)
                if tw:
                    twisted += term
                else:
                    plain += term
            total += cls * abs(plain + sgn * twisted)
            absmass += cls * row_abs
        half_mass = mpmath.mpf(2) * factorial(n)
        tv = float(total / half_mass)
        budget = float(absmass / half_mass) * _float_relative_error(t, len(shapes))
    return tv, budget


def _tail_numerator_exact(n: int, t: int, included) -> int:
    """sum of d * |A|^t over all shapes outside ``included`` (trivial shape excluded)."""
    total = 0
    skip = set(included)
    skip.add((n,))
    for lam in enumerate_partitions(n):
        if lam in skip:
            continue
        total += dimension(lam) * abs(_eigen_numerator(lam, n)) ** t
    return total


def _tail_float(n: int, t: int, included) -> float:
    skip = set(included)
    skip.add((n,))
    with mpmath.workprec(FLOAT_PREC):
        big_b = mpmath.mpf(n * comb(n, 2))
        total = mpmath.mpf(0)
        count = 0
        for lam in enumerate_partitions(n):
            if lam in skip:
                continue
            s_abs = mpmath.mpf(abs(_eigen_numerator(lam, n))) / big_b
            total += dimension(lam) * (s_abs**t if t else mpmath.mpf(1))
            count += 1
        value = float(total)
    return value * (1.0 + _float_relative_error(t, count + 1))


def exact_tv_fourier(params: WalkParams, mode: str = MODE_EXACT):
    """Total variation distance to uniform after t steps, over all shapes.

    Exact mode returns a Fraction; float mode returns a float computed
    with 113-bit mantissas (call truncated_tv with M = n to get the same
    value alongside its rounding budget).
    """
    mode = _check_mode(mode)
    _check_size(params.n, mode)
    shapes = principal_shapes(params.n, params.n)
    if mode == MODE_EXACT:
        n, t = params.n, params.t
        s = _distance_numerator_exact(n, t, shapes)
        return Fraction(s, 2 * factorial(n) * (n * comb(n, 2)) ** t)
    return _distance_float(params.n, params.t, shapes)[0]


def truncated_tv(params: WalkParams, max_deficit: int, mode: str = MODE_EXACT):
    """(main term, certified error bound), both in TV units.

    The main term runs over the shapes within ``max_deficit`` boxes of a
    single row or column; the bound is half the spectral mass of every
    dropped shape, so ``|exact TV - main| <= error_bound`` always.  In
    float mode the bound additionally absorbs the rounding budget of the
    main-term reduction.
    """
    mode = _check_mode(mode)
    n, t = params.n, params.t
    _check_size(n, mode)
    if not 1 <= max_deficit <= n:
        raise ValueError(f"truncation depth must satisfy 1 <= M <= n, got {max_deficit}")
    shapes = principal_shapes(n, max_deficit)
    big_b = n * comb(n, 2)
    if mode == MODE_EXACT:
        s = _distance_numerator_exact(n, t, shapes)
        main = Fraction(s, 2 * factorial(n) * big_b**t)
        bound = Fraction(_tail_numerator_exact(n, t, shapes), 2 * big_b**t)
        return main, bound
    main, budget = _distance_float(n, t, shapes)
    bound = 0.5 * _tail_float(n, t, shapes) + budget
    return main, bound


def remainder_bound(params: WalkParams, max_deficit: int) -> float:
    """Spectral mass of all shapes with first row at most ``n - M`` long.

    This is the raw L1-scale remainder ``sum d * |eigenvalue|^t`` over
    those shapes (not halved), evaluated with 113-bit mantissas; the
    relative error of the reported float is below 1e-30.  It decreases to
    0 as t grows and shrinks as M grows.
    """
    n, t = params.n, params.t
    if n > FLOAT_N_MAX:
        raise SizeLimitError(f"remainder_bound supports n <= {FLOAT_N_MAX}, got {n}")
    if max_deficit < 1:
        raise ValueError(f"truncation depth must be >= 1, got {max_deficit}")
    with mpmath.workprec(FLOAT_PREC):
        big_b = mpmath.mpf(n * comb(n, 2))
        total = mpmath.mpf(0)
        for lam in enumerate_partitions(n):
            if lam[0] > n - max_deficit:
                continue
            s_abs = mpmath.mpf(abs(_eigen_numerator(lam, n))) / big_b
            total += dimension(lam) * (s_abs**t if t else mpmath.mpf(1))
        return float(total)


def fourier_class_distribution(params: WalkParams) -> ClassDistribution:
    """Reconstruct the exact walk distribution per class from the spectrum.

    Inverts the spectral transform: the mass of class ``mu`` is
    ``|C_mu| * sum over all shapes of (d / n!) * eigenvalue^t * character``.
    """
    n, t = params.n, params.t
    _check_size(n, MODE_EXACT)
    shapes = enumerate_partitions(n)
    plan = _eval_plan(n, t, shapes)
    table = default_cache()._table
    from .characters import _strip_char

    big_b = n * comb(n, 2)
    denom = factorial(n) * big_b**t
    masses = {}
    for mu, cls, sgn in _class_rows(n):
        plain = 0
        twisted = 0
        for shape, tw, w in plan:
            chval = _strip_char(shape, mu, table)
            if tw:
                twisted += w * chval
            else:
                plain += w * chval
        masses[mu] = Fraction(cls * (plain + sgn * twisted), denom)
    return ClassDistribution(masses=masses)


def profile_curve(n: int, c_values, max_deficit: int, mode: str = MODE_EXACT) -> list[ProfilePoint]:
    """One certified ProfilePoint per window parameter c, deterministic."""
    mode = _check_mode(mode)
    points = []
    for c in c_values:
        params = WalkParams.from_window(n, float(c))
        main, bound = truncated_tv(params, max_deficit, mode)
        points.append(
            ProfilePoint(
                n=n,
                c=float(c),
                t=params.t,
                tv_main=float(main),
                error_bound=float(bound),
                tv_limit=limit_profile(float(c)),
                mode=mode,
            )
        )
    return points


def walk_distribution_series(n: int, t_max: int):
    """Exact walk distributions for t = 0..t_max by brute-force convolution.

    Iterates the one-step recursion over all n! group elements with
    integer masses over the denominator n^(2t), fully independent of the
    spectral machinery.  Yields (t, ClassDistribution, exact TV) triples.
    """
    if n < 2:
        raise ValueError(f"walk needs n >= 2, got {n}")
    if n > ORACLE_N_MAX:
        raise SizeLimitError(f"convolution oracle supports n <= {ORACLE_N_MAX}, got {n}")
    if t_max > ORACLE_T_MAX:
        raise SizeLimitError(f"convolution oracle supports t <= {ORACLE_T_MAX}, got {t_max}")

    from .permstats import cycle_census

    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    class_ids = []
    class_types: list[Partition] = []
    type_to_id: dict[Partition, int] = {}
    for p in perms:
        mu = cycle_census(p).cycle_type()
        if mu not in type_to_id:
            type_to_id[mu] = len(class_types)
            class_types.append(mu)
        class_ids.append(type_to_id[mu])

    neighbor_rows = []
    for a in range(n):
        for b in range(a + 1, n):
            row = np.empty(size, dtype=np.int64)
            for i, p in enumerate(perms):
                q = list(p)
                q[a], q[b] = q[b], q[a]
                row[i] = index[tuple(q)]
            neighbor_rows.append(row)

    # int64 is safe while masses (bounded by n^(2t)) stay below 2^62
    use_int64 = n ** (2 * t_max) < 2**62
    dtype = np.int64 if use_int64 else object
    masses = np.zeros(size, dtype=dtype)
    masses[index[tuple(range(n))]] = 1

    n_fact = factorial(n)
    for t in range(t_max + 1):
        denom = n ** (2 * t)
        mass_list = masses.tolist()
        per_class = [0] * len(class_types)
        for i, q in enumerate(mass_list):
            per_class[class_ids[i]] += q
        dist = ClassDistribution(
            masses={mu: Fraction(per_class[cid], denom) for mu, cid in type_to_id.items()}
        )
        tv = Fraction(sum(abs(q * n_fact - denom) for q in mass_list), 2 * n_fact * denom)
        yield t, dist, tv
        if t == t_max:
            break
        new = n * masses
        for row in neighbor_rows:
            new = new + 2 * masses[row]
        masses = new


def convolution_oracle(n: int, t: int) -> tuple[ClassDistribution, Fraction]:
    """Exact (class distribution, TV) after t steps, by brute-force convolution."""
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    for step, dist, tv in walk_distribution_series(n, t):
        if step == t:
            return dist, tv
    raise AssertionError("unreachable")
