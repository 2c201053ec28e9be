"""Lower bounds on the mean of a weighted vote with small effects.

Setting: f is a weighted majority with weights w (total W), the vote
distribution mu has marginals p_i, mean vote share
p = sum(w_i p_i) / W above a threshold share q, and the scaled total
effect is delta = sum(w_i p_i (1-p_i) e_i) / (p (1-p) W) where e_i is
the conditional effect of variable i.  Then E[f] is bounded below by
two closed forms:

* :func:`bound_prob` - 1 - delta p (1-p) / (p - q), clamped to [0, 1].
* :func:`bound_lin`  - the piecewise-sharper form: once delta reaches
  (p-q)/(p(1-q)) the bound saturates at (p-q)/(1-q); below that it is
  max(delta p, 1 - delta p (1-p)/(p-q)).

:func:`check_lemma1_on_instance` re-derives the first bound on a
concrete (f, mu) instance by exact enumeration, including the two
inequalities the proof chains through; it raises
:class:`VerificationFailed` if any exact step fails (it never should).

:func:`verify_tightness` solves the n-vote two-variable LP whose value
is the best possible bound for votes supported on {0..n} with threshold
r/n, and reconstructs an explicit worst-case vote distribution from the
LP optimum.  The LP value approaches :func:`bound_lin` as n grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boolfn import WeightedMajority, all_inputs
from .exceptions import (
    HypothesisViolated,
    InvalidInput,
    TooLarge,
    VerificationFailed,
)
from .measures import Explicit, Measure, enumerate_support, marginal
from .power import effect
from .ratlp import LinearProgram, certified_solve

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class BoundInput:
    """Hypotheses (p, q, delta) with 0 < q < p < 1 and delta >= 0."""

    p: Fraction
    q: Fraction
    delta: Fraction

    def __post_init__(self):
        p, q, d = Fraction(self.p), Fraction(self.q), Fraction(self.delta)
        if not (0 < q < p < 1):
            raise InvalidInput(f"need 0 < q < p < 1, got q={q}, p={p}")
        if d < 0:
            raise InvalidInput(f"delta must be nonnegative, got {d}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "delta", d)


def bound_prob(bi: BoundInput) -> Fraction:
    """1 - delta p (1-p) / (p - q), clamped below at 0."""
    p, q, d = bi.p, bi.q, bi.delta
    val = 1 - d * p * (1 - p) / (p - q)
    return max(_ZERO, val)


def bound_lin(bi: BoundInput) -> Fraction:
    """The piecewise form; never below :func:`bound_prob`."""
    p, q, d = bi.p, bi.q, bi.delta
    threshold = (p - q) / (p * (1 - q))
    if d >= threshold:
        return (p - q) / (1 - q)
    return max(d * p, 1 - d * p * (1 - p) / (p - q))


# ---------------------------------------------------------------------------
# exact re-derivation on a concrete instance

@dataclass(frozen=True)
class Lemma1Report:
    """Everything the exact instance check computed."""

    p: Fraction
    q: Fraction
    delta: Fraction
    mean: Fraction  # E[f]
    chain_lhs: Fraction  # E[(sum w_i (p_i - X_i)) (1 - f)]
    chain_mid: Fraction  # sum w_i p_i (1-p_i) e_i
    bound_prob: Fraction
    bound_lin: Fraction


def check_lemma1_on_instance(
    f: WeightedMajority, mu: Measure, q: Fraction = _HALF, cap: int = 20
) -> Lemma1Report:
    """Exactly verify the bound and its proof chain on one instance.

    Requires a weighted majority whose sign conditions hold at threshold
    share q (automatic for q = 1/2) and mean vote share q < p < 1.  All
    arithmetic is exact; any failed inequality raises
    :class:`VerificationFailed`.
    """
    if not isinstance(f, WeightedMajority):
        raise InvalidInput("instance check needs a WeightedMajority")
    n = f.n
    if n > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")
    q = Fraction(q)
    if not (0 < q < 1):
        raise InvalidInput(f"q={q} is not in (0, 1)")
    w = f.weights
    W = sum(w)

    # threshold-share sign conditions: sum w_i (x_i - q) > 0 forces f = 1,
    # < 0 forces f = 0 (ties are free and resolved by f's own table)
    for x in all_inputs(n):
        s = sum((wi * (Fraction(b) - q) for wi, b in zip(w, x)), _ZERO)
        if s > 0 and f.evaluate(x) != 1:
            raise HypothesisViolated(f"f({x}) = 0 but its q-margin is positive")
        if s < 0 and f.evaluate(x) != 0:
            raise HypothesisViolated(f"f({x}) = 1 but its q-margin is negative")

    marg = [marginal(mu, k) for k in range(1, n + 1)]
    p = sum((wi * pi for wi, pi in zip(w, marg)), _ZERO) / W
    if not p > q:
        raise HypothesisViolated(f"mean vote share p={p} does not exceed q={q}")
    if p == 1:
        raise HypothesisViolated("p = 1 is degenerate")
    # each term carries a p_i(1-p_i) factor, so coordinates with a
    # constant vote contribute zero; skip them instead of conditioning
    # on a null event
    chain_mid = _ZERO
    for k, (wi, pi) in enumerate(zip(w, marg), start=1):
        if 0 < pi < 1:
            chain_mid += wi * pi * (1 - pi) * effect(f, mu, k, cap)
    delta = chain_mid / (p * (1 - p) * W)

    mean = _ZERO
    chain_lhs = _ZERO
    for x, mass in enumerate_support(mu, cap):
        fx = f.evaluate(x)
        if fx:
            mean += mass
        else:
            drift = sum((wi * (pi - b) for wi, pi, b in zip(w, marg, x)), _ZERO)
            chain_lhs += mass * drift

    # proof chain: chain_lhs >= (p - q) W (1 - mean), chain_lhs equals
    # chain_mid by the covariance identity, and chain_mid = p(1-p) delta W
    # by construction of delta.
    if not chain_lhs >= (p - q) * W * (1 - mean):
        raise VerificationFailed("drift lower bound failed on an instance")
    if chain_lhs != chain_mid:
        raise VerificationFailed("covariance identity failed on an instance")
    if chain_mid != p * (1 - p) * delta * W:
        raise VerificationFailed("delta normalization failed on an instance")

    bi = BoundInput(p, q, delta)
    bp = bound_prob(bi)
    bl = bound_lin(bi)
    if mean < bp:
        raise VerificationFailed(f"mean {mean} fell below bound_prob {bp}")
    if mean < bl:
        raise VerificationFailed(f"mean {mean} fell below bound_lin {bl}")
    return Lemma1Report(
        p=p,
        q=q,
        delta=delta,
        mean=mean,
        chain_lhs=chain_lhs,
        chain_mid=chain_mid,
        bound_prob=bp,
        bound_lin=bl,
    )


# ---------------------------------------------------------------------------
# tightness of the linear-programming form

@dataclass(frozen=True)
class TightnessReport:
    lp_min: Fraction
    closed_form: Fraction
    witness: dict  # vote-count -> mass, an extremal distribution on {0..n}


def verify_tightness(p, delta, n: int, r: int) -> TightnessReport:
    """Solve the discrete extremal LP at threshold q = r/n exactly.

    Variables (A, B): A is the mass above the threshold count r, B the
    mean share it carries.  The optimum is the least possible E[f] among
    vote-count distributions with mean share p and effect budget delta;
    a witness distribution on the four relevant counts {0, r, r+1, n}
    is reconstructed and re-checked exactly.
    """
    p = Fraction(p)
    delta = Fraction(delta)
    if not (isinstance(n, int) and isinstance(r, int) and 1 <= r < n):
        raise InvalidInput(f"need integers 1 <= r < n, got r={r!r}, n={n!r}")
    q = Fraction(r, n)
    qq = Fraction(r + 1, n)
    if not (qq < p < 1):
        raise HypothesisViolated(f"need (r+1)/n < p < 1, got p={p}, (r+1)/n={qq}")
    if delta < 0:
        raise InvalidInput(f"delta must be nonnegative, got {delta}")

    lp = LinearProgram(
        objective=(_ONE, _ZERO),
        sense="min",
        constraints=(
            ((_ONE, _ZERO), "<=", _ONE),  # A <= 1
            ((qq, -_ONE), "<=", _ZERO),  # B >= q' A
            ((-_ONE, _ONE), "<=", _ZERO),  # B <= A
            ((_ZERO, _ONE), "<=", p),  # B <= p
            ((q, -_ONE), "<=", q - p),  # p - B <= q (1 - A)
            ((-p, _ONE), "<=", delta * p * (1 - p)),  # B - p A <= delta p (1-p)
        ),
    )
    sol = certified_solve(lp)
    A, B = sol.primal

    # witness: top block splits between counts n and r+1, bottom block
    # between counts r and 0, matching (A, B) exactly
    top_n = (B - qq * A) / (1 - qq)
    top_r1 = A - top_n
    bot = 1 - A
    bshare = p - B
    bot_r = bshare / q
    bot_0 = bot - bot_r
    witness = {n: top_n, r + 1: top_r1, r: bot_r, 0: bot_0}
    if any(v < 0 for v in witness.values()):
        raise VerificationFailed("negative mass in tightness witness")
    if sum(witness.values()) != 1:
        raise VerificationFailed("tightness witness does not sum to 1")
    share = sum((m * Fraction(c, n) for c, m in witness.items()), _ZERO)
    if share != p:
        raise VerificationFailed("tightness witness has wrong mean share")
    above = sum((m for c, m in witness.items() if c > r), _ZERO)
    if above != A:
        raise VerificationFailed("tightness witness has wrong mass above threshold")

    return TightnessReport(
        lp_min=sol.value,
        closed_form=bound_lin(BoundInput(p, q, delta)),
        witness=witness,
    )


# ---------------------------------------------------------------------------
# integer-weight duplication

def duplication_reduction(f: WeightedMajority, mu: Measure, cap: int = 20):
    """Expand integer weights into unit-weight copies with coupled votes.

    Returns (g, mu_prime) where g is the simple majority on
    W = sum(w_i) variables (ties inherited from f through the copy map)
    and mu_prime forces all copies of a variable to vote together.
    E[g] under mu_prime equals E[f] under mu exactly.
    """
    if not isinstance(f, WeightedMajority):
        raise InvalidInput("duplication needs a WeightedMajority")
    w = []
    for wi in f.weights:
        if wi.denominator != 1:
            raise InvalidInput(f"weights must be integers, got {wi}")
        w.append(wi.numerator)
    W = sum(w)
    if W > cap:
        raise TooLarge(f"total weight {W} exceeds cap {cap}")

    def dup(x):
        out = []
        for wi, b in zip(w, x):
            out.extend([b] * wi)
        return tuple(out)

    masses = {}
    ties = {}
    for x, mass in enumerate_support(mu, cap):
        xd = dup(x)
        masses[xd] = masses.get(xd, _ZERO) + mass
        if sum(2 * b - 1 for b in xd) == 0:
            ties[xd] = f.evaluate(x)
    g = WeightedMajority((_ONE,) * W, ties)
    return g, Explicit(W, masses)
