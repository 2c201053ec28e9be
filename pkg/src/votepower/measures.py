"""Probability measures on {0,1}^n with exact arithmetic.

All masses and marginals are :class:`fractions.Fraction`; only
``sample`` touches floats.  Measure kinds:

* :class:`Product` - independent bits with marginals p_i.
* :class:`Explicit` - finitely supported, masses summing to exactly 1.
* :class:`TMixture` - draw t uniformly from [eps, 1], then n i.i.d.
  Bernoulli(t) bits.  Point probabilities come from exact polynomial
  integration, so everything stays rational.
* :class:`AllSame` - mass p on the all-ones vector, 1-p on all-zeros.
* :class:`IsingLeaves` - leaves of a broadcast tree of depth r with
  flip noise eps, then each leaf independently forced to 1 with
  probability delta.  Only sampling and the marginal are available
  here; exact joint work lives in :mod:`votepower.ising`.

``is_fkg`` checks the lattice condition mu(x)mu(y) <= mu(x or y)mu(x and y)
pairwise, which costs 4^n; it refuses beyond ``cap`` variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .boolfn import BoolFn, check_bits, check_index, index_of, input_at
from .exceptions import (
    InvalidInput,
    InvalidParams,
    LengthMismatch,
    TooLarge,
    Unsupported,
)
from .rationals import format_rational, parse_rational

DEFAULT_CAP = 24
FKG_CAP = 12

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _check_prob(p, name="p") -> Fraction:
    p = Fraction(p)
    if not (0 <= p <= 1):
        raise InvalidInput(f"{name}={p} is not in [0, 1]")
    return p


class Measure:
    """Base class; subclasses set ``n``."""

    n: int


@dataclass(frozen=True, eq=False)
class Product(Measure):
    p: tuple

    def __post_init__(self):
        p = tuple(_check_prob(v, f"p_{i+1}") for i, v in enumerate(self.p))
        if not p:
            raise InvalidInput("need at least one marginal")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)


@dataclass(frozen=True, eq=False)
class Explicit(Measure):
    """Finitely supported measure; zero masses are dropped."""

    n: int
    masses: dict

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidInput(f"n must be a positive int, got {self.n!r}")
        clean = {}
        total = _ZERO
        for x, m in dict(self.masses).items():
            x = check_bits(x, self.n)
            m = Fraction(m)
            if m < 0:
                raise InvalidInput(f"negative mass {m} at {x}")
            total += m
            if m > 0:
                clean[x] = clean.get(x, _ZERO) + m
        if total != 1:
            raise InvalidInput(f"masses sum to {total}, expected exactly 1")
        object.__setattr__(self, "masses", clean)

    def support(self):
        """(x, mass) pairs in truth-table index order."""
        return sorted(self.masses.items(), key=lambda it: index_of(it[0]))


@dataclass(frozen=True, eq=False)
class TMixture(Measure):
    n: int
    eps: Fraction

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidInput(f"n must be a positive int, got {self.n!r}")
        eps = Fraction(self.eps)
        if not (0 <= eps < 1):
            raise InvalidInput(f"eps={eps} is not in [0, 1)")
        object.__setattr__(self, "eps", eps)


@dataclass(frozen=True, eq=False)
class AllSame(Measure):
    n: int
    p: Fraction

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidInput(f"n must be a positive int, got {self.n!r}")
        object.__setattr__(self, "p", _check_prob(self.p))


@dataclass(frozen=True, eq=False)
class IsingLeaves(Measure):
    """Leaf marginal law of the depth-r broadcast tree (see votepower.ising)."""

    r: int
    eps: Fraction
    delta: Fraction

    def __post_init__(self):
        if not (isinstance(self.r, int) and self.r >= 1):
            raise InvalidParams(f"r must be an int >= 1, got {self.r!r}")
        eps = Fraction(self.eps)
        delta = Fraction(self.delta)
        if not (0 < eps < Fraction(1, 2)):
            raise InvalidParams(f"eps={eps} is not in (0, 1/2)")
        if not (0 <= delta < 1):
            raise InvalidParams(f"delta={delta} is not in [0, 1)")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return 3 ** self.r


# ---------------------------------------------------------------------------
# exact point probabilities and expectations

def _tmixture_ones_prob(n: int, k: int, eps: Fraction) -> Fraction:
    # (1/(1-eps)) * integral over [eps,1] of t^k (1-t)^(n-k) dt, exactly:
    # expand (1-t)^(n-k) and integrate term by term.
    m = n - k
    total = _ZERO
    for i in range(m + 1):
        e = k + i + 1
        term = Fraction(comb(m, i)) * (1 - eps ** e) / e
        total += -term if i % 2 else term
    return total / (1 - eps)


def prob_of(mu: Measure, x) -> Fraction:
    """Exact probability mass of the single point x."""
    x = check_bits(x, mu.n)
    if isinstance(mu, Product):
        m = _ONE
        for p, b in zip(mu.p, x):
            m *= p if b else 1 - p
        return m
    if isinstance(mu, Explicit):
        return mu.masses.get(x, _ZERO)
    if isinstance(mu, TMixture):
        return _tmixture_ones_prob(mu.n, sum(x), mu.eps)
    if isinstance(mu, AllSame):
        if all(b == 1 for b in x):
            return mu.p
        if all(b == 0 for b in x):
            return 1 - mu.p
        return _ZERO
    raise Unsupported(
        f"prob_of is not available for {type(mu).__name__}; "
        "for IsingLeaves use votepower.ising.leaf_joint_explicit"
    )


def marginal(mu: Measure, k: int) -> Fraction:
    """Exact P(X_k = 1)."""
    k = check_index(k, mu.n)
    if isinstance(mu, Product):
        return mu.p[k - 1]
    if isinstance(mu, Explicit):
        return sum((m for x, m in mu.masses.items() if x[k - 1]), _ZERO)
    if isinstance(mu, TMixture):
        return (1 + mu.eps) / 2
    if isinstance(mu, AllSame):
        return mu.p
    if isinstance(mu, IsingLeaves):
        return (1 + mu.delta) / 2
    raise Unsupported(f"marginal not implemented for {type(mu).__name__}")


def enumerate_support(mu: Measure, cap: int = DEFAULT_CAP):
    """Yield (x, mass) with positive mass, in truth-table index order."""
    if isinstance(mu, Explicit):
        yield from mu.support()
        return
    if isinstance(mu, AllSame):
        if 1 - mu.p > 0:
            yield (0,) * mu.n, 1 - mu.p
        if mu.p > 0:
            yield (1,) * mu.n, mu.p
        return
    if isinstance(mu, (Product, TMixture)):
        if mu.n > cap:
            raise TooLarge(f"n={mu.n} exceeds enumeration cap {cap}")
        for i in range(1 << mu.n):
            x = input_at(i, mu.n)
            m = prob_of(mu, x)
            if m > 0:
                yield x, m
        return
    raise Unsupported(
        f"cannot enumerate {type(mu).__name__}; "
        "for IsingLeaves use votepower.ising.leaf_joint_explicit"
    )


def expect(mu: Measure, f: BoolFn, cap: int = DEFAULT_CAP) -> Fraction:
    """Exact E_mu[f]."""
    if f.n != mu.n:
        raise LengthMismatch(f"function on {f.n} bits, measure on {mu.n}")
    return sum((m for x, m in enumerate_support(mu, cap) if f.evaluate(x)), _ZERO)


def as_explicit(mu: Measure, cap: int = DEFAULT_CAP) -> Explicit:
    """Materialize any enumerable measure."""
    return Explicit(mu.n, dict(enumerate_support(mu, cap)))


# ---------------------------------------------------------------------------
# FKG lattice condition

def is_fkg(mu: Measure, cap: int = FKG_CAP) -> bool:
    """Pairwise check of mu(x)mu(y) <= mu(x|y) mu(x&y).

    Comparable pairs hold with equality and are skipped; the loop is
    still quadratic in the support size, hence the low default cap.
    """
    if mu.n > cap:
        raise TooLarge(f"n={mu.n} exceeds FKG cap {cap} (4^n pairwise loop)")
    table = {}
    for x, m in enumerate_support(mu, cap):
        table[index_of(x)] = m
    items = sorted(table.items())
    for a, (i, mi) in enumerate(items):
        for j, mj in items[a + 1 :]:
            join = i | j
            meet = i & j
            if join == i or join == j:
                continue  # comparable: equality holds trivially
            lhs = mi * mj
            rhs = table.get(join, _ZERO) * table.get(meet, _ZERO)
            if lhs > rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# the t-mixture majority example

def tmixture_win_prob(n: int, eps) -> Fraction:
    """Exact P(majority = 1) under TMixture(n, eps), n odd.

    Always strictly below 1/(2(1-eps)) no matter how large n grows.
    """
    if not (isinstance(n, int) and n >= 1 and n % 2 == 1):
        raise InvalidInput(f"n must be an odd positive int, got {n!r}")
    eps = Fraction(eps)
    if not (0 <= eps < 1):
        raise InvalidInput(f"eps={eps} is not in [0, 1)")
    total = _ZERO
    for j in range(n // 2 + 1, n + 1):
        total += comb(n, j) * _tmixture_ones_prob(n, j, eps)
    return total


# ---------------------------------------------------------------------------
# sampling (floats enter here and only here)

def sample(mu: Measure, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` vectors as a (count, n) uint8 array.

    Deterministic given (kind, parameters, count, seed): every draw
    reduces to PCG64 uniforms consumed in a fixed order.  Rational
    parameters are quantized to floats for sampling only.
    """
    if not (isinstance(count, int) and count >= 0):
        raise InvalidInput(f"count must be a nonnegative int, got {count!r}")
    rng = np.random.default_rng(seed)
    if isinstance(mu, Product):
        p = np.array([float(v) for v in mu.p])
        return (rng.random((count, mu.n)) < p).astype(np.uint8)
    if isinstance(mu, Explicit):
        support = mu.support()
        edges = np.cumsum([float(m) for _, m in support])
        edges[-1] = 1.0  # guard against float round-off at the top
        idx = np.searchsorted(edges, rng.random(count), side="right")
        points = np.array([x for x, _ in support], dtype=np.uint8)
        return points[idx]
    if isinstance(mu, TMixture):
        e = float(mu.eps)
        t = e + (1.0 - e) * rng.random(count)
        return (rng.random((count, mu.n)) < t[:, None]).astype(np.uint8)
    if isinstance(mu, AllSame):
        ones = rng.random(count) < float(mu.p)
        return np.repeat(ones.astype(np.uint8)[:, None], mu.n, axis=1)
    if isinstance(mu, IsingLeaves):
        from . import _treedriver

        return _treedriver.sample_leaves(
            mu.r, float(mu.eps), float(mu.delta), count, seed
        )
    raise Unsupported(f"sample not implemented for {type(mu).__name__}")


# ---------------------------------------------------------------------------
# serialization

def measure_to_dict(mu: Measure) -> dict:
    if isinstance(mu, Product):
        return {"kind": "product", "p": [format_rational(v) for v in mu.p]}
    if isinstance(mu, Explicit):
        return {
            "kind": "explicit",
            "n": mu.n,
            "masses": [
                ["".join(map(str, x)), format_rational(m)] for x, m in mu.support()
            ],
        }
    if isinstance(mu, TMixture):
        return {"kind": "t_mixture", "n": mu.n, "eps": format_rational(mu.eps)}
    if isinstance(mu, AllSame):
        return {"kind": "all_same", "n": mu.n, "p": format_rational(mu.p)}
    if isinstance(mu, IsingLeaves):
        return {
            "kind": "ising_leaves",
            "r": mu.r,
            "eps": format_rational(mu.eps),
            "delta": format_rational(mu.delta),
        }
    raise InvalidInput(f"cannot serialize {type(mu).__name__}")


def measure_from_dict(d: dict) -> Measure:
    if not isinstance(d, dict) or "kind" not in d:
        raise InvalidInput("measure object needs a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "product":
            return Product(tuple(parse_rational(v) for v in d["p"]))
        if kind == "explicit":
            masses = {}
            for key, m in d["masses"]:
                x = tuple(int(c) for c in key)
                masses[x] = masses.get(x, _ZERO) + parse_rational(m)
            return Explicit(int(d["n"]), masses)
        if kind == "t_mixture":
            return TMixture(int(d["n"]), parse_rational(d["eps"]))
        if kind == "all_same":
            return AllSame(int(d["n"]), parse_rational(d["p"]))
        if kind == "ising_leaves":
            return IsingLeaves(
                int(d["r"]), parse_rational(d["eps"]), parse_rational(d["delta"])
            )
    except KeyError as exc:
        raise InvalidInput(f"measure object missing field {exc}") from exc
    raise InvalidInput(f"unknown measure kind {kind!r}")


def save_measure(mu: Measure, path):
    with open(path, "w") as fh:
        json.dump(measure_to_dict(mu), fh, indent=2)
        fh.write("\n")


def load_measure(path) -> Measure:
    with open(path) as fh:
        return measure_from_dict(json.load(fh))
