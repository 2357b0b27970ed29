"""Self-contained correctness checks runnable from the CLI.

Each check recomputes an exact identity (character orthogonality,
spectral-vs-convolution equality, the deficit-block collapse, lattice
mass transfer, cycle-count bounds, the closed-form series, certificate
soundness) over a small default scope and reports every case.  A fault
can be injected into the shared character cache to prove the checks have
teeth; the cache is restored afterwards.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

from .characters import class_size, default_cache, mn_character
from .partitions import dimension, enumerate_partitions, extend_weights
from .permstats import qcycle_probability
from .profiles import character_block_identity, deficit_series_residual
from .walk import WalkParams, exact_tv_fourier, truncated_tv, walk_distribution_series

FAULT_CHARACTER_CACHE = "character-cache"

CHECK_NAMES = (
    "orthogonality",
    "fourier-oracle",
    "block-identity",
    "mass-transfer",
    "qcycle-bound",
    "deficit-series",
    "certificate",
)


def _check_orthogonality(n_values, _j_values):
    cases = []
    for m in n_values:
        classes = enumerate_partitions(m)
        sizes = {mu: class_size(mu) for mu in classes}
        table = {
            lam: {mu: mn_character(lam, mu) for mu in classes} for lam in classes
        }
        m_fact = factorial(m)
        for i, lam in enumerate(classes):
            for rho in classes[i:]:
                inner = sum(sizes[mu] * table[lam][mu] * table[rho][mu] for mu in classes)
                want = m_fact if lam == rho else 0
                cases.append(
                    {
                        "params": {"m": m, "row": lam, "col": rho},
                        "passed": inner == want,
                        "detail": f"inner={inner} expected={want}",
                    }
                )
    return cases


def _check_fourier_oracle(n_values, _j_values):
    cases = []
    for n in n_values:
        t_max = 6
        for t, _dist, tv_oracle in walk_distribution_series(n, t_max):
            tv_fourier = exact_tv_fourier(WalkParams(n=n, t=t))
            cases.append(
                {
                    "params": {"n": n, "t": t},
                    "passed": tv_fourier == tv_oracle,
                    "detail": f"fourier={tv_fourier} oracle={tv_oracle}",
                }
            )
    return cases


def _check_block_identity(n_values, j_values):
    cases = []
    for n in n_values:
        for j in j_values:
            if n < 2 * j:
                continue
            for mu in enumerate_partitions(n):
                result = character_block_identity(n, j, mu)
                if not result.applicable:
                    continue
                cases.append(
                    {
                        "params": {"n": n, "j": j, "class": mu},
                        "passed": result.equal,
                        "detail": f"lhs={result.lhs} rhs={result.rhs}",
                    }
                )
    return cases


def _check_mass_transfer(_n_values, j_values):
    rng = random.Random(0)
    cases = []
    for j in j_values:
        level = enumerate_partitions(j)
        dims = {lam: dimension(lam) for lam in level}
        next_dims = {lam: dimension(lam) for lam in enumerate_partitions(j + 1)}
        for trial in range(100):
            gamma = {lam: rng.randrange(-50, 51) for lam in level}
            pushed = extend_weights(gamma)
            lhs = sum(w * next_dims[lam] for lam, w in pushed.items())
            rhs = (j + 1) * sum(w * dims[lam] for lam, w in gamma.items())
            if lhs != rhs or trial == 0:
                cases.append(
                    {
                        "params": {"j": j, "trial": trial},
                        "passed": lhs == rhs,
                        "detail": f"lhs={lhs} rhs={rhs}",
                    }
                )
    return cases


def _check_qcycle_bound(n_values, _j_values):
    cases = []
    for n in n_values:
        for q in range(1, n + 1):
            for m in range(n + 1):
                prob = qcycle_probability(n, q, m)
                bound = Fraction(1, q**m * factorial(m))
                cases.append(
                    {
                        "params": {"n": n, "q": q, "m": m},
                        "passed": prob <= bound,
                        "detail": f"prob={prob} bound={bound}",
                    }
                )
    return cases


def _check_deficit_series(_n_values, _j_values):
    cases = []
    for c in (-1.0, 0.0, 1.0):
        for x in range(0, 11, 2):
            residual = deficit_series_residual(c, x, 60)
            cases.append(
                {
                    "params": {"c": c, "x": x, "terms": 60},
                    "passed": residual < 1e-10,
                    "detail": f"residual={residual:.3e}",
                }
            )
    return cases


def _check_certificate(n_values, _j_values):
    cases = []
    for n in n_values:
        for t in (0, 2, 5, 9):
            exact = exact_tv_fourier(WalkParams(n=n, t=t))
            for m in (1, 2, 3):
                main, bound = truncated_tv(WalkParams(n=n, t=t), m)
                cases.append(
                    {
                        "params": {"n": n, "t": t, "M": m},
                        "passed": abs(main - exact) <= bound,
                        "detail": f"gap={float(abs(main - exact)):.3e} bound={float(bound):.3e}",
                    }
                )
    return cases


_CHECKS = {
    "orthogonality": (_check_orthogonality, [3, 4, 5, 6], None),
    "fourier-oracle": (_check_fourier_oracle, [3, 4, 5], None),
    "block-identity": (_check_block_identity, [4, 5, 6, 7, 8], [1, 2, 3]),
    "mass-transfer": (_check_mass_transfer, None, [1, 2, 3, 4, 5, 6, 7, 8]),
    "qcycle-bound": (_check_qcycle_bound, [4, 6, 8, 10], None),
    "deficit-series": (_check_deficit_series, None, None),
    "certificate": (_check_certificate, [5, 6], None),
}

# Cap the per-check case lists embedded in the report.
_MAX_REPORTED_FAILURES = 10


def run_verification(
    only: str | None = None,
    n: int | None = None,
    j: int | None = None,
    inject_fault: str | None = None,
) -> dict:
    """Run the named check (or all of them) and build a machine-readable report.

    ``n`` and ``j`` narrow the scope of the selected checks to one family.
    ``inject_fault='character-cache'`` corrupts one memoized character
    before running and restores it afterwards; a correct build must then
    report failures.
    """
    if only is not None and only not in _CHECKS:
        raise ValueError(f"unknown check {only!r}; choose from {', '.join(CHECK_NAMES)}")
    if inject_fault not in (None, FAULT_CHARACTER_CACHE):
        raise ValueError(f"unknown fault {inject_fault!r}")

    selected = [only] if only else list(CHECK_NAMES)
    cache = default_cache()
    corrupted_key = None
    if inject_fault == FAULT_CHARACTER_CACHE:
        # warm enough of the table that the corrupted entry is load-bearing
        for lam in enumerate_partitions(5):
            for mu in enumerate_partitions(5):
                mn_character(lam, mu)
        corrupted_key = cache.corrupt_entry_for_testing()

    checks = []
    all_passed = True
    try:
        for name in selected:
            func, default_n, default_j = _CHECKS[name]
            n_values = [n] if n is not None else default_n
            j_values = [j] if j is not None else default_j
            cases = func(n_values, j_values)
            failures = [case for case in cases if not case["passed"]]
            passed = not failures
            all_passed = all_passed and passed
            checks.append(
                {
                    "name": name,
                    "passed": passed,
                    "cases": len(cases),
                    "failures": failures[:_MAX_REPORTED_FAILURES],
                }
            )
    finally:
        if corrupted_key is not None:
            cache._table[corrupted_key] -= 1

    return {
        "passed": all_passed,
        "fault_injected": inject_fault,
        "checks": checks,
    }
