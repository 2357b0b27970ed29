"""Integer partitions, Young diagrams, hooks, and dimension combinatorics.

A partition is a plain tuple of weakly decreasing positive integers; the
empty tuple is the unique partition of 0.  The same tuples index both the
irreducible representations of the symmetric group and its conjugacy
classes (as cycle types).  Everything in this module is exact integer or
rational arithmetic; no floating point.  All functions are pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping, Union

from .errors import SizeLimitError

Partition = tuple[int, ...]
Weight = Union[int, Fraction]

# p(60) is just under a million partitions; refuse to materialize more.
MAX_ENUMERATION_SIZE = 60


def validate_partition(parts) -> Partition:
    """Canonicalize ``parts`` to a tuple, checking weak decrease and positivity."""
    out = tuple(int(p) for p in parts)
    for i, p in enumerate(out):
        if p < 1:
            raise ValueError(f"partition parts must be positive integers, got {out}")
        if i and out[i - 1] < p:
            raise ValueError(f"partition parts must be weakly decreasing, got {out}")
    return out


def enumerate_partitions(m: int) -> list[Partition]:
    """All partitions of ``m``, each exactly once, in reverse-lexicographic order.

    The list starts at ``(m,)`` and ends at ``(1,) * m``.  This descending
    order is the documented one used for cache keys and CSV output
    throughout the package.
    """
    if m < 0:
        raise ValueError(f"cannot enumerate partitions of a negative integer: {m}")
    if m > MAX_ENUMERATION_SIZE:
        raise SizeLimitError(
            f"enumerate_partitions supports m <= {MAX_ENUMERATION_SIZE}, got {m}"
        )
    if m == 0:
        return [()]
    out: list[Partition] = []
    stack = [m]
    while True:
        out.append(tuple(stack))
        # Find the rightmost part > 1; everything after it is a run of 1s.
        k = len(stack) - 1
        ones = 0
        while k >= 0 and stack[k] == 1:
            ones += 1
            k -= 1
        if k < 0:
            break
        new = stack[k] - 1
        rem = ones + 1
        del stack[k:]
        stack.append(new)
        while rem:
            take = min(new, rem)
            stack.append(take)
            rem -= take
    return out


def conjugate(lam: Partition) -> Partition:
    """Column lengths of the diagram of ``lam``; an involution."""
    if not lam:
        return ()
    cols = [0] * lam[0]
    for part in lam:
        for c in range(part):
            cols[c] += 1
    return tuple(cols)


def hook_lengths(lam: Partition) -> list[list[int]]:
    """Hook length of every box, row by row.

    The hook of box ``(i, j)`` counts the box itself, the boxes to its
    right in row ``i``, and the boxes below it in column ``j``:
    ``lam[i] - j + conj[j] - i - 1`` with 0-based indices.
    """
    conj = conjugate(lam)
    return [
        [part - j + conj[j] - i - 1 for j in range(part)]
        for i, part in enumerate(lam)
    ]


def hook_product(lam: Partition) -> int:
    """Product of all hook lengths of ``lam``; 1 for the empty partition."""
    conj = conjugate(lam)
    prod = 1
    for i, part in enumerate(lam):
        for j in range(part):
            prod *= part - j + conj[j] - i - 1
    return prod


def dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape ``lam``: m! over the hook product."""
    return factorial(sum(lam)) // hook_product(lam)


def covers(lam: Partition) -> list[Partition]:
    """All partitions obtained from ``lam`` by adding one box.

    Ordered by the row index of the added box, with the new bottom row
    last; this puts the results in reverse-lexicographic descending order.
    """
    out = []
    for i in range(len(lam)):
        if i == 0 or lam[i - 1] > lam[i]:
            out.append(lam[:i] + (lam[i] + 1,) + lam[i + 1 :])
    out.append(lam + (1,))
    return out


def extend_weights(gamma: Mapping[Partition, Weight]) -> dict[Partition, Weight]:
    """Push a weight vector one level up the lattice of diagrams.

    Each partition of ``j + 1`` receives the sum of the weights of the
    partitions of ``j`` it covers (missing keys read as 0).  The result is
    defined on every partition of ``j + 1`` and satisfies, exactly,

        sum over level j+1 of weight * dimension
            = (j + 1) * sum over level j of weight * dimension.
    """
    if not gamma:
        raise ValueError("weight map must contain at least one partition")
    sizes = {sum(p) for p in gamma}
    if len(sizes) != 1:
        raise ValueError(f"weight map keys must all partition the same integer, got sizes {sorted(sizes)}")
    j = sizes.pop()
    out: dict[Partition, Weight] = {q: 0 for q in enumerate_partitions(j + 1)}
    for lam, w in gamma.items():
        for q in covers(lam):
            out[q] += w
    return out
