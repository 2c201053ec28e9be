"""Voting power of individual variables.

Three measure-dependent quantities for a function f and measure mu:

* influence(k): probability that flipping X_k flips f.
* effect(k): E[f | X_k = 1] - E[f | X_k = 0]; undefined when the
  conditioning event has probability zero (:class:`DegenerateMarginal`).
* covariance(k): Cov(f, X_k).  For any product measure this equals
  p_k (1 - p_k) * effect(k), which the tests exercise exactly.

Plus two classical measure-free indices:

* banzhaf: influence under the uniform measure.
* shapley_shubik: the uniform-mixture-of-biases average of influence,
  which coincides with the probability that k is the variable whose
  arrival changes f along a uniformly random order.  Both routes are
  implemented so they can be compared exactly.

Everything is exact Fraction arithmetic over full enumeration, capped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .boolfn import BoolFn, check_index, input_at
from .exceptions import DegenerateMarginal, TooLarge
from .measures import Measure, enumerate_support, expect, marginal
from .rationals import decimal_str, format_rational

DEFAULT_CAP = 24
PERMUTATION_CAP = 8

_ZERO = Fraction(0)


def influence(f: BoolFn, mu: Measure, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Exact probability that variable k is pivotal for f under mu."""
    k = check_index(k, f.n)
    total = _ZERO
    for x, m in enumerate_support(mu, cap):
        if f.is_pivotal(x, k):
            total += m
    return total


def effect(f: BoolFn, mu: Measure, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Exact E[f | X_k = 1] - E[f | X_k = 0] under mu."""
    k = check_index(k, f.n)
    p_k = marginal(mu, k)
    if p_k == 0 or p_k == 1:
        raise DegenerateMarginal(
            f"effect of variable {k} conditions on a null event (P(X_{k}=1)={p_k})"
        )
    on = _ZERO
    off = _ZERO
    for x, m in enumerate_support(mu, cap):
        if f.evaluate(x):
            if x[k - 1]:
                on += m
            else:
                off += m
    return on / p_k - off / (1 - p_k)


def covariance(f: BoolFn, mu: Measure, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Exact Cov_mu(f, X_k) = E[f X_k] - E[f] P(X_k = 1)."""
    k = check_index(k, f.n)
    ef = _ZERO
    efx = _ZERO
    for x, m in enumerate_support(mu, cap):
        if f.evaluate(x):
            ef += m
            if x[k - 1]:
                efx += m
    return efx - ef * marginal(mu, k)


def banzhaf(f: BoolFn, cap: int = DEFAULT_CAP) -> tuple:
    """Influence vector under the uniform measure, via bit counting."""
    n = f.n
    tt = f.to_truth_table(cap).bits
    out = []
    denom = 1 << (n - 1)
    for k in range(1, n + 1):
        s = 1 << (n - k)
        # mask of truth-table indices whose k-th variable is 0
        block = (1 << s) - 1
        mask = 0
        for start in range(0, 1 << n, 2 * s):
            mask |= block << start
        swings = ((tt ^ (tt >> s)) & mask).bit_count()
        out.append(Fraction(swings, denom))
    return tuple(out)


def shapley_shubik(f: BoolFn, cap: int = DEFAULT_CAP) -> tuple:
    """Shapley-Shubik vector by exact pivot counting.

    For each k, count assignments z to the other variables where k is
    pivotal, bucketed by the number of ones j; each bucket contributes
    j! (n-1-j)! / n!.
    """
    n = f.n
    if n - 1 > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")
    tt = f.to_truth_table(cap)
    coef = [
        Fraction(factorial(j) * factorial(n - 1 - j), factorial(n))
        for j in range(n)
    ]
    out = []
    for k in range(1, n + 1):
        counts = [0] * n
        for i in range(1 << (n - 1)):
            z = input_at(i, n - 1)
            x_hi = z[: k - 1] + (1,) + z[k - 1 :]
            x_lo = z[: k - 1] + (0,) + z[k - 1 :]
            if tt._eval(x_hi) != tt._eval(x_lo):
                counts[sum(z)] += 1
        out.append(sum((coef[j] * c for j, c in enumerate(counts)), _ZERO))
    return tuple(out)


def shapley_shubik_by_permutations(f: BoolFn, cap: int = PERMUTATION_CAP) -> tuple:
    """Shapley-Shubik by literal iteration over all n! arrival orders.

    Independent of :func:`shapley_shubik`; kept naive on purpose so the
    two can be cross-checked.  Refuses n > cap since the cost is n * n!.
    """
    n = f.n
    if n > cap:
        raise TooLarge(f"n={n} exceeds permutation cap {cap} (cost n * n!)")
    tt = f.to_truth_table()
    hits = [0] * n
    for order in itertools.permutations(range(n)):
        x = [0] * n
        prev = tt._eval(tuple(x))
        for k in order:
            x[k] = 1
            cur = tt._eval(tuple(x))
            if cur != prev:
                hits[k] += 1
            prev = cur
    total = factorial(n)
    return tuple(Fraction(h, total) for h in hits)


# ---------------------------------------------------------------------------
# report

@dataclass(frozen=True)
class PowerReport:
    """Per-variable power table for one (f, mu) pair."""

    n: int
    marginals: tuple
    influences: tuple
    effects: tuple  # entries are Fraction or None when degenerate
    banzhaf: tuple
    shapley: tuple
    mean: Fraction

    def to_dict(self) -> dict:
        def cell(v):
            if v is None:
                return None
            return {"decimal": decimal_str(v), "exact": format_rational(v)}

        return {
            "n": self.n,
            "mean": cell(self.mean),
            "rows": [
                {
                    "k": k + 1,
                    "marginal": cell(self.marginals[k]),
                    "influence": cell(self.influences[k]),
                    "effect": cell(self.effects[k]),
                    "banzhaf": cell(self.banzhaf[k]),
                    "shapley_shubik": cell(self.shapley[k]),
                }
                for k in range(self.n)
            ],
        }

    def to_table(self) -> str:
        header = ["k", "marginal", "influence", "effect", "banzhaf", "shapley_shubik"]
        lines = ["\t".join(header)]
        for k in range(self.n):
            row = [str(k + 1)]
            for v in (
                self.marginals[k],
                self.influences[k],
                self.effects[k],
                self.banzhaf[k],
                self.shapley[k],
            ):
                if v is None:
                    row.append("undefined")
                else:
                    row.append(f"{decimal_str(v)} ({format_rational(v)})")
            lines.append("\t".join(row))
        lines.append(f"mean\t{decimal_str(self.mean)} ({format_rational(self.mean)})")
        return "\n".join(lines)


def power_report(f: BoolFn, mu: Measure, cap: int = DEFAULT_CAP) -> PowerReport:
    """Compute the full per-variable table; degenerate effects become None."""
    effects = []
    for k in range(1, f.n + 1):
        try:
            effects.append(effect(f, mu, k, cap))
        except DegenerateMarginal:
            effects.append(None)
    return PowerReport(
        n=f.n,
        marginals=tuple(marginal(mu, k) for k in range(1, f.n + 1)),
        influences=tuple(influence(f, mu, k, cap) for k in range(1, f.n + 1)),
        effects=tuple(effects),
        banzhaf=banzhaf(f, cap),
        shapley=shapley_shubik(f, cap),
        mean=expect(mu, f, cap),
    )
