"""Which monotone anti-symmetric functions are weighted majorities.

The dividing line is the optimal value tau of the fractional covering
LP on the function's zero-sets (inputs where f is 0, viewed as subsets
of variables):

    minimize   sum nu(S)       over zero-sets S
    subject to sum_{S : k in S} nu(S) >= 1   for every variable k,
               nu >= 0.

* tau infinite (some variable in no zero-set): f is the dictator of
  that variable.
* tau >= 2: the dual weights witness f as a weighted majority;
  :func:`extract_weights` returns them (perturbed to kill ties when
  tau > 2, with ties read off f when tau == 2).
* tau < 2: f is not a weighted majority, and the scaled optimal cover
  is an explicit measure under which f has mean zero although every
  marginal is at least 1/tau > 1/2; :func:`adversarial_measure` builds
  and re-checks it.

Everything is exact; internal re-checks raise
:class:`VerificationFailed` rather than returning wrong answers.

For LP size, the cover may be restricted to *maximal* zero-sets and the
weighted-majority feasibility oracle to *minimal* one-sets: by
monotonicity any cover mass moves up to a maximal zero-set without
losing coverage, and margin constraints on minimal one-sets imply the
rest.  Both restrictions are exact, not heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boolfn import BoolFn, WeightedMajority, all_inputs, dictator, input_at
from .exceptions import (
    BadSeedVector,
    DegenerateMarginal,
    InvalidInput,
    NotApplicable,
    NotAntisymmetric,
    NotInvariant,
    NotMonotone,
    NotTransitive,
    TooLarge,
    VerificationFailed,
)
from .measures import Explicit, expect, marginal
from .power import effect
from .ratlp import LinearProgram, certified_solve

CLASSIFY_CAP = 14
GROUP_CAP = 200_000

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ZeroHypergraph:
    """All zero-sets of f (the empty set is always one of them)."""

    n: int
    edges: tuple  # of frozensets of 1-based variable indices


def _validated_table(f: BoolFn, cap: int):
    if f.n > cap:
        raise TooLarge(f"n={f.n} exceeds classification cap {cap}")
    tt = f.to_truth_table(cap)
    if not tt.is_monotone():
        raise NotMonotone("classification requires a monotone function")
    if not tt.is_antisymmetric():
        raise NotAntisymmetric("classification requires an anti-symmetric function")
    return tt


def zero_hypergraph(f: BoolFn, cap: int = CLASSIFY_CAP) -> ZeroHypergraph:
    """Collect every S with f(indicator of S) = 0."""
    tt = _validated_table(f, cap)
    n = f.n
    edges = []
    for i in range(1 << n):
        if not (tt.bits >> i) & 1:
            x = input_at(i, n)
            edges.append(frozenset(k + 1 for k in range(n) if x[k]))
    edges.sort(key=lambda s: (len(s), sorted(s)))
    return ZeroHypergraph(n, tuple(edges))


def _maximal_edges(h: ZeroHypergraph):
    masks = []
    for s in h.edges:
        m = 0
        for k in s:
            m |= 1 << (k - 1)
        masks.append((m, s))
    out = []
    for m, s in masks:
        if not any(other != m and other & m == m for other, _ in masks):
            out.append((m, s))
    out.sort(key=lambda t: (len(t[1]), sorted(t[1])))
    return [s for _, s in out]


@dataclass(frozen=True)
class TauStar:
    """Covering LP result; ``value is None`` means infinite (dictator)."""

    value: Fraction
    dictator_of: int
    cover: tuple  # ((frozenset, Fraction), ...), optimal cover, positive masses
    weights: tuple  # dual optimal weights per variable

    @property
    def is_infinite(self) -> bool:
        return self.value is None


def tau_star(h: ZeroHypergraph) -> TauStar:
    """Solve the covering LP exactly (or detect the dictator case)."""
    seen = set()
    for s in h.edges:
        seen |= s
    for k in range(1, h.n + 1):
        if k not in seen:
            return TauStar(value=None, dictator_of=k, cover=(), weights=None)
    maximal = _maximal_edges(h)
    cols = len(maximal)
    constraints = []
    for k in range(1, h.n + 1):
        row = tuple(_ONE if k in s else _ZERO for s in maximal)
        constraints.append((row, ">=", _ONE))
    lp = LinearProgram(
        objective=(_ONE,) * cols, sense="min", constraints=tuple(constraints)
    )
    sol = certified_solve(lp)
    cover = tuple(
        (s, v) for s, v in zip(maximal, sol.primal) if v > 0
    )
    return TauStar(
        value=sol.value, dictator_of=None, cover=cover, weights=tuple(sol.dual)
    )


def adversarial_measure(f: BoolFn, cap: int = CLASSIFY_CAP) -> Explicit:
    """Scaled optimal cover as a measure killing f despite high marginals.

    Only exists when tau < 2 (:class:`NotApplicable` otherwise).  The
    result is re-checked exactly: E[f] = 0 and every marginal is at
    least 1/tau > 1/2.
    """
    h = zero_hypergraph(f, cap)
    t = tau_star(h)
    if t.is_infinite or t.value >= 2:
        raise NotApplicable(
            f"tau = {'infinite' if t.is_infinite else t.value} is not < 2; "
            "f is a weighted majority, use extract_weights"
        )
    tau = t.value
    masses = {}
    for s, v in t.cover:
        x = tuple(1 if k in s else 0 for k in range(1, f.n + 1))
        masses[x] = masses.get(x, _ZERO) + v / tau
    mu = Explicit(f.n, masses)
    if expect(mu, f) != 0:
        raise VerificationFailed("adversarial measure failed to zero out f")
    floor = 1 / tau
    for k in range(1, f.n + 1):
        if marginal(mu, k) < floor:
            raise VerificationFailed("adversarial measure lost a marginal")
    return mu


MAX_PERTURB_ROUNDS = 64


def extract_weights(f: BoolFn, cap: int = CLASSIFY_CAP):
    """Weights (and tie table) realizing f as a weighted majority.

    Uses the dual of the covering LP.  With tau > 2 the weights are
    nudged by a geometric perturbation eta * 2^-i (eta halved until an
    exhaustive re-check passes) so no input ties; with tau == 2 ties
    remain and are read off f's own table.  :class:`NotApplicable` when
    tau < 2.
    """
    tt = _validated_table(f, cap)
    n = f.n
    h = zero_hypergraph(f, cap)
    t = tau_star(h)
    if t.is_infinite:
        k = t.dictator_of
        g = dictator(n, k)
        if g.to_truth_table().bits != tt.bits:
            raise VerificationFailed(
                "variable outside every zero-set, yet f is not its dictator"
            )
        return g.weights, {}
    if t.value < 2:
        raise NotApplicable(
            f"tau = {t.value} < 2: not a weighted majority, use adversarial_measure"
        )

    def mismatch(weights):
        """First input where the weighted rule is tied or disagrees with f."""
        for x in all_inputs(n):
            s = sum((w if b else -w for w, b in zip(weights, x)), _ZERO)
            if s == 0:
                return x, "tie"
            if (1 if s > 0 else 0) != tt._eval(x):
                return x, "wrong"
        return None

    base = t.weights
    if t.value == 2:
        ties = {}
        for x in all_inputs(n):
            s = sum((w if b else -w for w, b in zip(base, x)), _ZERO)
            if s == 0:
                ties[x] = tt._eval(x)
            elif (1 if s > 0 else 0) != tt._eval(x):
                raise VerificationFailed("dual weights disagree with f at tau = 2")
        return tuple(base), ties

    eta = 1 / (4 * n * t.value)
    for _ in range(MAX_PERTURB_ROUNDS):
        cand = tuple(
            w + eta * Fraction(1, 1 << (i + 1)) for i, w in enumerate(base)
        )
        if mismatch(cand) is None:
            return cand, {}
        eta /= 2
    raise VerificationFailed(
        "perturbation failed to produce tie-free faithful weights"
    )  # pragma: no cover - the halving schedule always terminates


def wm_oracle(f: BoolFn, cap: int = CLASSIFY_CAP) -> bool:
    """Feasibility route: is there any valid weight vector at all?

    Solves for w >= 0 with sum w = 1 whose margin is nonnegative on
    every minimal one-set of f.  By monotonicity and anti-symmetry such
    a w's sign pattern reproduces f everywhere (ties fall back to f's
    table), so feasibility is exactly weighted-majority-ness.
    Deliberately independent of :func:`tau_star` so the two can be
    cross-checked.
    """
    tt = _validated_table(f, cap)
    n = f.n
    ones = []
    for i in range(1 << n):
        if (tt.bits >> i) & 1:
            ones.append(i)
    one_masks = []
    for i in ones:
        x = input_at(i, n)
        m = 0
        for k in range(n):
            if x[k]:
                m |= 1 << k
        one_masks.append(m)
    minimal = [
        m
        for m in one_masks
        if not any(other != m and other & m == other for other in one_masks)
    ]
    constraints = [((_ONE,) * n, "=", _ONE)]
    for m in sorted(minimal):
        row = tuple(_ONE if (m >> k) & 1 else -_ONE for k in range(n))
        constraints.append((row, ">=", _ZERO))
    lp = LinearProgram(
        objective=(_ZERO,) * n, sense="min", constraints=tuple(constraints)
    )
    sol = certified_solve(lp)
    return sol.status == "optimal"


# ---------------------------------------------------------------------------
# orbit construction for transitive functions

def _check_perm(sigma, n):
    sigma = tuple(int(v) for v in sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise InvalidInput(f"not a permutation of 1..{n}: {sigma!r}")
    return sigma


def _apply(sigma, x):
    return tuple(x[sigma[i] - 1] for i in range(len(sigma)))


def orbit_measure(f: BoolFn, group, x, cap: int = CLASSIFY_CAP) -> Explicit:
    """Uniform measure on the group orbit of a heavy zero of f.

    ``group`` is a list of generating permutations (1-based images);
    the generated group must act transitively on variables and leave f
    invariant.  The seed x must satisfy f(x) = 0 with more than n/2
    ones.  The resulting measure has all marginals equal to |x|/n > 1/2
    while E[f] = 0; both facts are re-checked exactly.
    """
    n = f.n
    gens = [_check_perm(s, n) for s in group]
    if not gens:
        raise InvalidInput("need at least one permutation")
    x = tuple(x)
    if len(x) != n:
        raise InvalidInput(f"seed length {len(x)} does not match n={n}")

    identity = tuple(range(1, n + 1))
    closure = {identity}
    frontier = [identity]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple(cur[g[i] - 1] for i in range(n))
            if nxt not in closure:
                if len(closure) >= GROUP_CAP:
                    raise TooLarge(f"generated group exceeds {GROUP_CAP} elements")
                closure.add(nxt)
                frontier.append(nxt)

    reach = {sigma[0] for sigma in closure}
    if reach != set(range(1, n + 1)):
        raise NotTransitive(
            f"group moves variable 1 only to {sorted(reach)}, not all of 1..{n}"
        )

    if n <= cap:
        for g in gens:
            for y in all_inputs(n):
                if f.evaluate(_apply(g, y)) != f.evaluate(y):
                    raise NotInvariant(f"f is not invariant under {g}")
    else:
        import random

        rnd = random.Random(0)
        for _ in range(256):
            y = tuple(rnd.randint(0, 1) for _ in range(n))
            for g in gens:
                if f.evaluate(_apply(g, y)) != f.evaluate(y):
                    raise NotInvariant(f"f is not invariant under {g}")

    if f.evaluate(x) != 0:
        raise BadSeedVector("seed must be a zero of f")
    ones = sum(x)
    if 2 * ones <= n:
        raise BadSeedVector(f"seed needs more than n/2 ones, has {ones} of {n}")

    orbit = {_apply(sigma, x) for sigma in closure}
    mass = Fraction(1, len(orbit))
    mu = Explicit(n, {y: mass for y in orbit})
    target = Fraction(ones, n)
    for k in range(1, n + 1):
        if marginal(mu, k) != target:
            raise VerificationFailed("orbit marginals are not uniform")
    if expect(mu, f) != 0:
        raise VerificationFailed("f does not vanish on the whole orbit")
    return mu


# ---------------------------------------------------------------------------
# one-call driver

@dataclass(frozen=True)
class ClassifyResult:
    n: int
    tau: Fraction  # None when infinite
    tau_infinite: bool
    is_weighted_majority: bool
    weights: tuple  # None unless weighted majority
    tie_table: dict  # None unless weighted majority
    witness: Explicit  # None unless counterexample measure exists
    witness_mean: Fraction
    witness_effects: tuple  # 0 by convention where conditioning is degenerate
    null_conditioned: tuple  # variables with degenerate conditioning


def classify(f: BoolFn, cap: int = CLASSIFY_CAP) -> ClassifyResult:
    """Full dichotomy: weights when tau >= 2, adversarial measure when not."""
    h = zero_hypergraph(f, cap)
    t = tau_star(h)
    if t.is_infinite or t.value >= 2:
        weights, ties = extract_weights(f, cap)
        return ClassifyResult(
            n=f.n,
            tau=t.value,
            tau_infinite=t.is_infinite,
            is_weighted_majority=True,
            weights=weights,
            tie_table=ties,
            witness=None,
            witness_mean=None,
            witness_effects=None,
            null_conditioned=(),
        )
    mu = adversarial_measure(f, cap)
    effects = []
    nulls = []
    for k in range(1, f.n + 1):
        try:
            effects.append(effect(f, mu, k))
        except DegenerateMarginal:
            # convention: report 0, flag the variable instead of guessing
            effects.append(_ZERO)
            nulls.append(k)
    return ClassifyResult(
        n=f.n,
        tau=t.value,
        tau_infinite=False,
        is_weighted_majority=False,
        weights=None,
        tie_table=None,
        witness=mu,
        witness_mean=expect(mu, f),
        witness_effects=tuple(effects),
        null_conditioned=tuple(nulls),
    )
