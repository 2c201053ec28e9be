"""Correlated votes from a broadcast tree, exactly and by Monte Carlo.

The model: a uniform root spin is copied down a complete 3-ary tree of
depth r, each edge flipping the value independently with probability
eps.  The leaf values y are then biased toward 1: independently with
probability delta a leaf is forced to 1 (x_i = y_i or Bernoulli(delta)).
The aggregate m is the recursive 3-ary majority of the x leaves.

Exact route: a two-state recursion on (a_k, b_k) where a_k is the
probability that the depth-k majority reads 0 given its root is 0, and
b_k the same given root 1.  With c0 = (1-eps) a + eps b and
c1 = eps a + (1-eps) b, one level of 3-ary majority gives
a' = 3 c0^2 - 2 c0^3 and b' = 3 c1^2 - 2 c1^3, starting from
a_0 = 1 - delta, b_0 = 0.  Then E[m] = 1 - (a_r + b_r)/2.

The recursion is run on raw integer numerator/denominator pairs with a
common denominator per level, *never reduced*: reducing would cost a
gcd on multi-megabit integers per step.  Comparisons happen by
cross-multiplication via :class:`votepower.rationals.ExactRatio`.
Beyond ``EXACT_DEPTH_MAX`` levels an mpmath path with 128-bit mantissas
takes over; its per-level relative error is amplified by at most 6x per
level, so for any depth below ~45 the result is good to ~1e-15.

Monte Carlo route: vectorized tree sampling via the compiled or numpy
kernel (see ``_treedriver``), with conditional-effect estimators that
stratify on a chosen leaf's x value (the observable vote) or its y
value (the pre-bias spin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf

from . import _treedriver, measures
from .boolfn import check_index
from .exceptions import (
    DegenerateStratum,
    InvalidInput,
    InvalidParams,
    OutOfRegime,
    TooLarge,
)
from .rationals import ExactRatio

EXACT_DEPTH_MAX = 12
_JOINT_DEPTH_MAX = 2

_HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class TreeParams:
    r: int
    eps: Fraction
    delta: Fraction

    def __post_init__(self):
        if not (isinstance(self.r, int) and self.r >= 1):
            raise InvalidParams(f"r must be an int >= 1, got {self.r!r}")
        eps = Fraction(self.eps)
        delta = Fraction(self.delta)
        if not (0 < eps < _HALF):
            raise InvalidParams(f"eps={eps} is not in (0, 1/2)")
        if not (0 <= delta < 1):
            raise InvalidParams(f"delta={delta} is not in [0, 1)")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return 3 ** self.r

    @property
    def theta(self) -> Fraction:
        """Copy strength 1 - 2 eps of one edge."""
        return 1 - 2 * self.eps

    def leaf_measure(self) -> measures.IsingLeaves:
        return measures.IsingLeaves(self.r, self.eps, self.delta)


@dataclass(frozen=True)
class BPState:
    """Per-level conditional probabilities (a_k, b_k), k = 0..r."""

    kind: str  # "exact" | "float"
    levels: tuple  # of (a, b) pairs; ExactRatio when exact, mpf when float

    def a(self, k: int):
        return self.levels[k][0]

    def b(self, k: int):
        return self.levels[k][1]


@dataclass(frozen=True)
class BPResult:
    mu_m: object  # ExactRatio (exact) or mpf (float)
    state: BPState
    method: str


def _bp_exact_ints(tp: TreeParams):
    """Unreduced integer recursion; returns per-level (A, B, D) triples."""
    e, f = tp.eps.numerator, tp.eps.denominator
    dn, dd = tp.delta.numerator, tp.delta.denominator
    A, B, D = dd - dn, 0, dd
    levels = [(A, B, D)]
    for _ in range(tp.r):
        E = f * D
        C0 = (f - e) * A + e * B
        C1 = e * A + (f - e) * B
        A = C0 * C0 * (3 * E - 2 * C0)
        B = C1 * C1 * (3 * E - 2 * C1)
        D = E * E * E
        levels.append((A, B, D))
    return levels


def bp_exact(tp: TreeParams, method: str = "auto") -> BPResult:
    """E[m] and the level states, exactly (or in 128-bit floats).

    ``method``: "exact", "float", or "auto" (exact up to depth
    ``EXACT_DEPTH_MAX``, float beyond).
    """
    if method not in ("auto", "exact", "float"):
        raise InvalidInput(f"unknown method {method!r}")
    if method == "auto":
        method = "exact" if tp.r <= EXACT_DEPTH_MAX else "float"
    if method == "exact":
        triples = _bp_exact_ints(tp)
        levels = tuple(
            (ExactRatio(A, D), ExactRatio(B, D)) for A, B, D in triples
        )
        A, B, D = triples[-1]
        mu = ExactRatio(2 * D - A - B, 2 * D)
        return BPResult(mu_m=mu, state=BPState("exact", levels), method="exact")

    with mp.workprec(128):
        e = mpf(tp.eps.numerator) / tp.eps.denominator
        d = mpf(tp.delta.numerator) / tp.delta.denominator
        a, b = 1 - d, mpf(0)
        levels = [(a, b)]
        for _ in range(tp.r):
            c0 = (1 - e) * a + e * b
            c1 = e * a + (1 - e) * b
            a = c0 * c0 * (3 - 2 * c0)
            b = c1 * c1 * (3 - 2 * c1)
            levels.append((a, b))
        mu = 1 - (a + b) / 2
    return BPResult(mu_m=mu, state=BPState("float", tuple(levels)), method="float")


# ---------------------------------------------------------------------------
# the two regime claims

@dataclass(frozen=True)
class Claim1Report:
    """Exact verdicts for the small-noise regime eps = delta <= 1/100."""

    mu_m: ExactRatio
    mu_bound: Fraction  # (1 + delta) / 2
    mu_ok: bool
    root_zero_given_zero: ExactRatio  # a_r
    root_bound: Fraction  # 1 - delta
    root_ok: bool
    h_value: Fraction  # (1-eps)^3 (3 - 2 (1-eps)^2), the recursion's floor map
    h_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.mu_ok and self.root_ok and self.h_ok


def claim1_margin(tp: TreeParams) -> Claim1Report:
    """Exact check that the biased-leaf majority stays near fair.

    Requires the proved regime eps = delta <= 1/100 (:class:`OutOfRegime`
    otherwise) and exact-depth r (:class:`TooLarge` beyond).
    Verifies E[m] <= (1 + delta)/2 and P(m = 0 | root = 0) >= 1 - delta,
    plus the one-step floor inequality h(eps) >= 1 that drives the
    induction.
    """
    if tp.eps != tp.delta or tp.eps > Fraction(1, 100):
        raise OutOfRegime(
            f"claim is proved only for eps = delta <= 1/100, got "
            f"eps={tp.eps}, delta={tp.delta}"
        )
    if tp.r > EXACT_DEPTH_MAX:
        raise TooLarge(f"exact check capped at depth {EXACT_DEPTH_MAX}")
    res = bp_exact(tp, method="exact")
    mu_bound = (1 + tp.delta) / 2
    root_bound = 1 - tp.delta
    a_r = res.state.a(tp.r)
    q = 1 - tp.eps
    h = q ** 3 * (3 - 2 * q ** 2)
    return Claim1Report(
        mu_m=res.mu_m,
        mu_bound=mu_bound,
        mu_ok=res.mu_m <= mu_bound,
        root_zero_given_zero=a_r,
        root_bound=root_bound,
        root_ok=a_r >= root_bound,
        h_value=h,
        h_ok=h >= 1,
    )


@dataclass(frozen=True)
class Claim2Bound:
    """Decay bound for a single leaf's influence on the tree majority.

    ``stated`` is the headline constant (1 - eps/2); ``proof_form`` is
    the constant the argument actually yields (1 - 2 eps).  Both share
    the additive 2^(-(r-1)/2) term.  Monte Carlo checks should compare
    against ``proof_form``.
    """

    stated: float
    proof_form: float


def claim2_bound(r: int, eps) -> Claim2Bound:
    if not (isinstance(r, int) and r >= 1):
        raise InvalidParams(f"r must be an int >= 1, got {r!r}")
    eps = float(eps)
    if not (0 < eps < 0.5):
        raise InvalidParams(f"eps={eps} is not in (0, 1/2)")
    half_depth = (r - 1) / 2
    tail = 2.0 ** (-half_depth)
    return Claim2Bound(
        stated=(1 - eps / 2) ** half_depth + tail,
        proof_form=(1 - 2 * eps) ** half_depth + tail,
    )


# ---------------------------------------------------------------------------
# Monte Carlo estimators

@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    samples: int
    backend: str


@dataclass(frozen=True)
class EffectEstimate:
    """Conditional-difference estimates for one leaf.

    ``x_effect`` conditions on the leaf's observable vote x_i;
    ``y_effect`` conditions on its pre-bias spin y_i.  Standard errors
    are two-sample, from within-stratum variances.
    """

    leaf: int
    x_effect: float
    x_stderr: float
    y_effect: float
    y_stderr: float
    counts: dict
    samples: int
    backend: str


def _check_samples(samples):
    if not (isinstance(samples, int) and samples >= 1):
        raise InvalidInput(f"samples must be a positive int, got {samples!r}")


def mc_mu_m(tp: TreeParams, samples: int, seed: int) -> MCEstimate:
    """Estimate E[m] with a plain binomial standard error."""
    _check_samples(samples)
    m, _, _ = _treedriver.run_tree_mc(
        tp.r, float(tp.eps), float(tp.delta), samples, seed, 0
    )
    p = float(m.mean())
    se = math.sqrt(p * (1 - p) / samples)
    return MCEstimate(p, se, samples, _treedriver.backend())


def _stratum_diff(m, flag):
    n1 = int(flag.sum())
    n0 = len(flag) - n1
    if n1 < 2 or n0 < 2:
        raise DegenerateStratum(
            f"conditioning stratum too small (sizes {n1} and {n0})"
        )
    m1 = m[flag]
    m0 = m[~flag]
    diff = float(m1.mean() - m0.mean())
    se = math.sqrt(m1.var(ddof=1) / n1 + m0.var(ddof=1) / n0)
    return diff, se, n1, n0


def mc_effect(tp: TreeParams, leaf: int, samples: int, seed: int) -> EffectEstimate:
    """Estimate E[m | leaf vote = 1] - E[m | leaf vote = 0], two ways.

    The x route conditions on the observable (post-bias) leaf vote; the
    y route on the underlying spin.  Raises :class:`DegenerateStratum`
    when a stratum has fewer than two samples.
    """
    _check_samples(samples)
    leaf = check_index(leaf, tp.n)
    m, yl, xl = _treedriver.run_tree_mc(
        tp.r, float(tp.eps), float(tp.delta), samples, seed, leaf - 1
    )
    m = m.astype(np.float64)
    x_diff, x_se, xn1, xn0 = _stratum_diff(m, xl.astype(bool))
    y_diff, y_se, yn1, yn0 = _stratum_diff(m, yl.astype(bool))
    return EffectEstimate(
        leaf=leaf,
        x_effect=x_diff,
        x_stderr=x_se,
        y_effect=y_diff,
        y_stderr=y_se,
        counts={"x1": xn1, "x0": xn0, "y1": yn1, "y0": yn0},
        samples=samples,
        backend=_treedriver.backend(),
    )


def backend() -> str:
    """Kernel in use, 'compiled' or 'python'."""
    return _treedriver.backend()


# ---------------------------------------------------------------------------
# exact joint law for tiny depths (oracle fodder)

def leaf_joint_explicit(tp: TreeParams) -> measures.Explicit:
    """The exact joint law of the leaf votes x as an Explicit measure.

    Enumerates all spin configurations, so only r <= 2 is allowed; this
    exists to cross-check both the recursion and the samplers.
    """
    if tp.r > _JOINT_DEPTH_MAX:
        raise TooLarge(f"joint enumeration capped at depth {_JOINT_DEPTH_MAX}")
    eps, delta = tp.eps, tp.delta
    n = tp.n
    n_internal = (3 ** tp.r - 1) // 2  # nodes at levels 0..r-1

    # joint law of the leaf spins y
    y_law = {}
    for inner_bits in range(1 << n_internal):
        inner = [(inner_bits >> i) & 1 for i in range(n_internal)]
        p_inner = _HALF
        for i in range(1, n_internal):
            flip = inner[i] != inner[(i - 1) // 3]
            p_inner *= eps if flip else 1 - eps
        # parents of the leaves are the last 3^(r-1) internal nodes
        first_parent = n_internal - 3 ** (tp.r - 1)
        for leaf_bits in range(1 << n):
            y = tuple((leaf_bits >> (n - 1 - j)) & 1 for j in range(n))
            p = p_inner
            for j, yj in enumerate(y):
                parent = inner[first_parent + j // 3]
                p *= eps if yj != parent else 1 - eps
            if p:
                y_law[y] = y_law.get(y, Fraction(0)) + p

    # bias each leaf toward 1 with probability delta
    masses = {}
    for y, py in y_law.items():
        zeros = [j for j in range(n) if y[j] == 0]
        for raised_bits in range(1 << len(zeros)):
            x = list(y)
            raised = 0
            for t, j in enumerate(zeros):
                if (raised_bits >> t) & 1:
                    x[j] = 1
                    raised += 1
            p = py * delta ** raised * (1 - delta) ** (len(zeros) - raised)
            if p:
                key = tuple(x)
                masses[key] = masses.get(key, Fraction(0)) + p
    return measures.Explicit(n, masses)
