"""Exact symmetric-group characters, class sizes, and shuffle eigenvalues.

Character values come from the border-strip recursion: peel off one cycle
at a time (largest first), summing over the removable border strips of
that length with sign ``(-1) ** height``.  Strips are manipulated through
first-column hook lengths (beta numbers), which makes removal a single
subtraction.  Values are exact integers, ratios exact rationals.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .partitions import Partition, conjugate, dimension, validate_partition


class CharacterCache:
    """Memo table for the border-strip recursion.

    Keys are ``(shape, remaining cycles)`` pairs, values exact integers.
    Unbounded by default; when ``max_entries`` is set, a top-level call
    that finds the table at capacity clears the whole table first (a
    generation clear) rather than evicting piecemeal, so memory behavior
    stays predictable.

    Lookups and stores are single dict operations, so a cache warmed on
    one thread can afterwards be read concurrently without extra locking.
    """

    def __init__(self, max_entries: int | None = None):
        self.max_entries = max_entries
        self.hits = 0
        self.generation = 0
        self._table: dict[tuple[Partition, Partition], int] = {((), ()): 1}

    @property
    def entries(self) -> int:
        return len(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def clear(self) -> None:
        self._table = {((), ()): 1}
        self.generation += 1

    def corrupt_entry_for_testing(self) -> tuple[Partition, Partition]:
        """Fault-injection hook: offset one cached value by 1.

        Picks the largest non-base key so the damage is deterministic.
        Returns the corrupted key so callers can restore it.
        """
        key = max(k for k in self._table if k[1])
        self._table[key] += 1
        return key


_default_cache = CharacterCache()


def default_cache() -> CharacterCache:
    """The process-wide memo table used when no cache is passed explicitly."""
    return _default_cache


def _strip_char(shape, cycles, table):
    # shape and cycles are partitions of the same integer; cycles is peeled
    # from the front (largest part first).
    val = table.get((shape, cycles))
    if val is not None:
        return val
    q = cycles[0]
    rest = cycles[1:]
    k = len(shape)
    beta = [shape[i] + k - 1 - i for i in range(k)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - q
        if nb < 0 or nb in bset:
            continue
        height = 0
        newbeta = []
        for c in beta:
            if c == b:
                continue
            if nb < c < b:
                height += 1
            newbeta.append(c)
        newbeta.append(nb)
        newbeta.sort(reverse=True)
        kk = len(newbeta)
        newshape = tuple(nb2 - (kk - 1 - i) for i, nb2 in enumerate(newbeta))
        while newshape and newshape[-1] == 0:
            newshape = newshape[:-1]
        sub = _strip_char(newshape, rest, table)
        total += -sub if height & 1 else sub
    table[(shape, cycles)] = total
    return total


def mn_character(rep, cycle_type, cache: CharacterCache | None = None) -> int:
    """Irreducible character of shape ``rep`` at the class of ``cycle_type``.

    Both arguments must partition the same integer.  The cycle multiset is
    canonicalized to weakly decreasing order; memoization is keyed on the
    (remaining shape, remaining cycles) pairs of the recursion.
    """
    lam = validate_partition(rep)
    mu = tuple(sorted((int(q) for q in cycle_type), reverse=True))
    if mu and mu[-1] < 1:
        raise ValueError(f"cycle lengths must be positive, got {cycle_type}")
    if sum(lam) != sum(mu):
        raise ValueError(
            f"shape and cycle type must partition the same integer: {lam} vs {mu}"
        )
    cache = cache if cache is not None else _default_cache
    table = cache._table
    if (lam, mu) in table:
        cache.hits += 1
        return table[(lam, mu)]
    if cache.max_entries is not None and len(table) >= cache.max_entries:
        cache.clear()
        table = cache._table
    return _strip_char(lam, mu, table)


def class_size(mu) -> int:
    """Number of permutations with cycle type ``mu``."""
    mu = validate_partition(mu)
    denom = 1
    for q, k in Counter(mu).items():
        denom *= q**k * factorial(k)
    return factorial(sum(mu)) // denom


def class_sign(mu) -> int:
    """Sign of any permutation with cycle type ``mu``."""
    return -1 if (sum(mu) - len(mu)) & 1 else 1


def transposition_class(n: int) -> Partition:
    """Cycle type of a single transposition in the group of degree ``n``."""
    if n < 2:
        raise ValueError(f"transpositions need degree >= 2, got {n}")
    return (2,) + (1,) * (n - 2)


def character_ratio_numerator(lam: Partition) -> int:
    """Integer N with character ratio N / C(n, 2): row minus column binomials."""
    conj = conjugate(lam)
    return sum(comb(p, 2) for p in lam) - sum(comb(p, 2) for p in conj)


def character_ratio(lam) -> Fraction:
    """Character at a transposition divided by the dimension, exactly."""
    lam = validate_partition(lam)
    n = sum(lam)
    if n < 2:
        raise ValueError(f"character ratio needs a partition of n >= 2, got {lam}")
    return Fraction(character_ratio_numerator(lam), comb(n, 2))


@dataclass(frozen=True)
class Eigenvalue:
    """Spectral data of one representation under the lazy transposition step."""

    value: Fraction  # 1/n + ((n-1)/n) * ratio
    ratio: Fraction  # character ratio at a transposition


def eigenvalue(lam) -> Eigenvalue:
    """Walk eigenvalue of the representation ``lam``.

    The step distribution puts mass 1/n on the identity and spreads the
    rest uniformly over transpositions, so the eigenvalue is
    ``1/n + ((n-1)/n) * ratio``.
    """
    lam = validate_partition(lam)
    n = sum(lam)
    ratio = character_ratio(lam)
    value = Fraction(1, n) + Fraction(n - 1, n) * ratio
    return Eigenvalue(value=value, ratio=ratio)
