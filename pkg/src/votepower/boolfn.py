"""Monotone Boolean functions in several representations.

A function maps bit vectors x = (x_1, ..., x_n) in {0,1}^n to {0,1}.
Variables are indexed 1..n throughout the public API.  Truth-table
indices order x_1 as the most significant bit: input x sits at index
sum(x_i * 2^(n-i)).

Representations:

* :class:`TruthTable` - explicit table, the ground truth the others
  convert to.
* :class:`WeightedMajority` - sign of sum(w_i * (2 x_i - 1)) with
  nonnegative weights; an optional tie table decides inputs where the
  sum is exactly zero.  Without a covering tie entry, evaluation raises
  :class:`UnresolvedTie` rather than guessing.
* :class:`RecursiveMajority` - k-ary majority iterated over `levels`
  levels on n = k^levels variables, k odd, so ties cannot occur.
* :class:`Composed` - an outer function applied to inner functions on
  disjoint consecutive blocks.

Exhaustive operations refuse to enumerate beyond ``cap`` variables
(default 24) and raise :class:`TooLarge` instead of thrashing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import (
    IndexOutOfRange,
    InvalidInput,
    LengthMismatch,
    TooLarge,
    UnresolvedTie,
)
from .rationals import format_rational, parse_rational

DEFAULT_CAP = 24

Bits = tuple  # bit vectors are tuples of 0/1 ints


def check_bits(x, n: int) -> Bits:
    """Validate and normalize a bit vector of length n."""
    x = tuple(x)
    if len(x) != n:
        raise LengthMismatch(f"expected {n} bits, got {len(x)}")
    for b in x:
        if b not in (0, 1):
            raise InvalidInput(f"bit values must be 0 or 1, got {b!r}")
    return x


def check_index(k: int, n: int) -> int:
    if not (isinstance(k, int) and 1 <= k <= n):
        raise IndexOutOfRange(f"variable index {k!r} not in 1..{n}")
    return k


def index_of(x: Bits) -> int:
    """Truth-table index of input x (x_1 most significant)."""
    i = 0
    for b in x:
        i = (i << 1) | b
    return i


def input_at(i: int, n: int) -> Bits:
    """Inverse of :func:`index_of`."""
    return tuple((i >> (n - 1 - j)) & 1 for j in range(n))


def all_inputs(n: int):
    """Yield all inputs in truth-table index order."""
    for i in range(1 << n):
        yield input_at(i, n)


def complement(x: Bits) -> Bits:
    return tuple(1 - b for b in x)


def _check_cap(n: int, cap: int):
    if n > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")


class BoolFn:
    """Base class; subclasses set ``n`` and implement ``_eval``."""

    n: int

    def evaluate(self, x) -> int:
        x = check_bits(x, self.n)
        return self._eval(x)

    __call__ = evaluate

    def _eval(self, x: Bits) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def is_pivotal(self, x, k: int) -> bool:
        """True if flipping x_k changes f(x)."""
        x = check_bits(x, self.n)
        k = check_index(k, self.n)
        hi = x[: k - 1] + (1,) + x[k:]
        lo = x[: k - 1] + (0,) + x[k:]
        return self._eval(hi) != self._eval(lo)

    def to_truth_table(self, cap: int = DEFAULT_CAP) -> "TruthTable":
        _check_cap(self.n, cap)
        bits = 0
        for i in range(1 << self.n):
            if self._eval(input_at(i, self.n)):
                bits |= 1 << i
        return TruthTable(self.n, bits)

    def is_monotone(self, cap: int = DEFAULT_CAP) -> bool:
        """Exhaustive check that raising any bit never lowers f."""
        _check_cap(self.n, cap)
        tt = self.to_truth_table(cap).bits
        n = self.n
        for k in range(n):
            s = 1 << (n - 1 - k)
            for i in range(1 << n):
                if not (i & s) and (tt >> i) & 1 > (tt >> (i | s)) & 1:
                    return False
        return True

    def is_antisymmetric(self, cap: int = DEFAULT_CAP) -> bool:
        """Exhaustive check that f(1-x) = 1 - f(x) for all x."""
        _check_cap(self.n, cap)
        tt = self.to_truth_table(cap).bits
        full = (1 << self.n) - 1
        for i in range(1 << self.n):
            if (tt >> i) & 1 == (tt >> (full ^ i)) & 1:
                return False
        return True


@dataclass(frozen=True)
class TruthTable(BoolFn):
    """Explicit table; bit i of ``bits`` is f at index i."""

    n: int
    bits: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidInput(f"n must be a positive int, got {self.n!r}")
        if not (isinstance(self.bits, int) and 0 <= self.bits < (1 << (1 << self.n))):
            raise InvalidInput("truth table bits out of range for n")

    def _eval(self, x: Bits) -> int:
        return (self.bits >> index_of(x)) & 1

    def bit_string(self) -> str:
        """ASCII 0/1 string, index 0 first."""
        return "".join(str((self.bits >> i) & 1) for i in range(1 << self.n))

    @classmethod
    def from_bit_string(cls, s: str) -> "TruthTable":
        size = len(s)
        n = size.bit_length() - 1
        if size != (1 << n) or n < 1:
            raise InvalidInput(f"bit string length {size} is not a power of two >= 2")
        if set(s) - {"0", "1"}:
            raise InvalidInput("bit string must contain only 0 and 1")
        bits = 0
        for i, c in enumerate(s):
            if c == "1":
                bits |= 1 << i
        return cls(n, bits)


@dataclass(frozen=True, eq=False)
class WeightedMajority(BoolFn):
    """f(x) = [sum of w_i (2 x_i - 1) > 0], ties decided by ``tie_table``."""

    weights: tuple
    tie_table: dict = field(default_factory=dict)

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        if not w:
            raise InvalidInput("need at least one weight")
        if any(v < 0 for v in w):
            raise InvalidInput("weights must be nonnegative")
        if all(v == 0 for v in w):
            raise InvalidInput("weights must not all be zero")
        object.__setattr__(self, "weights", w)
        tie = {}
        for key, val in dict(self.tie_table).items():
            key = check_bits(key, len(w))
            if val not in (0, 1):
                raise InvalidInput("tie table values must be 0 or 1")
            tie[key] = val
        object.__setattr__(self, "tie_table", tie)

    @property
    def n(self) -> int:
        return len(self.weights)

    def margin(self, x) -> Fraction:
        """sum of w_i (2 x_i - 1); sign decides f away from ties."""
        x = check_bits(x, self.n)
        return sum(
            (w if b else -w) for w, b in zip(self.weights, x)
        )

    def _eval(self, x: Bits) -> int:
        s = 0
        for w, b in zip(self.weights, x):
            s += w if b else -w
        if s > 0:
            return 1
        if s < 0:
            return 0
        try:
            return self.tie_table[x]
        except KeyError:
            raise UnresolvedTie(f"tied input {x} has no tie-table entry") from None


@dataclass(frozen=True)
class RecursiveMajority(BoolFn):
    """k-ary majority recursed ``levels`` times over consecutive blocks."""

    k: int
    levels: int

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 3 and self.k % 2 == 1):
            raise InvalidInput(f"k must be an odd int >= 3, got {self.k!r}")
        if not (isinstance(self.levels, int) and self.levels >= 1):
            raise InvalidInput(f"levels must be an int >= 1, got {self.levels!r}")

    @property
    def n(self) -> int:
        return self.k ** self.levels

    def _eval(self, x: Bits) -> int:
        vals = list(x)
        half = self.k // 2
        while len(vals) > 1:
            vals = [
                1 if sum(vals[i : i + self.k]) > half else 0
                for i in range(0, len(vals), self.k)
            ]
        return vals[0]


@dataclass(frozen=True, eq=False)
class Composed(BoolFn):
    """outer(f_1(block_1), ..., f_m(block_m)) on disjoint consecutive blocks."""

    outer: BoolFn
    inners: tuple

    def __post_init__(self):
        inners = tuple(self.inners)
        if len(inners) != self.outer.n:
            raise LengthMismatch(
                f"outer takes {self.outer.n} inputs, got {len(inners)} inner functions"
            )
        object.__setattr__(self, "inners", inners)

    @property
    def n(self) -> int:
        return sum(g.n for g in self.inners)

    def _eval(self, x: Bits) -> int:
        args = []
        pos = 0
        for g in self.inners:
            args.append(g._eval(x[pos : pos + g.n]))
            pos += g.n
        return self.outer._eval(tuple(args))


def majority(n: int) -> WeightedMajority:
    """Simple majority on n variables (tie-free when n is odd)."""
    if not (isinstance(n, int) and n >= 1):
        raise InvalidInput(f"n must be a positive int, got {n!r}")
    return WeightedMajority((Fraction(1),) * n)

def dictator(n: int, k: int = 1) -> WeightedMajority:
    """f(x) = x_k as a one-hot weighted majority."""
    check_index(k, n)
    w = [Fraction(0)] * n
    w[k - 1] = Fraction(1)
    return WeightedMajority(tuple(w))


# ---------------------------------------------------------------------------
# serialization

def function_to_dict(f: BoolFn) -> dict:
    if isinstance(f, TruthTable):
        return {"kind": "truth_table", "n": f.n, "bits": f.bit_string()}
    if isinstance(f, WeightedMajority):
        d = {
            "kind": "weighted_majority",
            "weights": [format_rational(w) for w in f.weights],
        }
        if f.tie_table:
            d["tie_table"] = sorted(
                ["".join(map(str, x)), v] for x, v in f.tie_table.items()
            )
        return d
    if isinstance(f, RecursiveMajority):
        return {"kind": "recursive_majority", "k": f.k, "levels": f.levels}
    if isinstance(f, Composed):
        return {
            "kind": "composed",
            "outer": function_to_dict(f.outer),
            "inners": [function_to_dict(g) for g in f.inners],
        }
    raise InvalidInput(f"cannot serialize {type(f).__name__}")


def function_from_dict(d: dict) -> BoolFn:
    if not isinstance(d, dict) or "kind" not in d:
        raise InvalidInput("function object needs a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "truth_table":
            tt = TruthTable.from_bit_string(d["bits"])
            if "n" in d and d["n"] != tt.n:
                raise InvalidInput(f"bits imply n={tt.n} but n={d['n']} given")
            return tt
        if kind == "weighted_majority":
            ties = {}
            for key, val in d.get("tie_table", []):
                ties[tuple(int(c) for c in key)] = int(val)
            return WeightedMajority(
                tuple(parse_rational(w) for w in d["weights"]), ties
            )
        if kind == "recursive_majority":
            return RecursiveMajority(int(d["k"]), int(d["levels"]))
        if kind == "composed":
            return Composed(
                function_from_dict(d["outer"]),
                tuple(function_from_dict(g) for g in d["inners"]),
            )
    except KeyError as exc:
        raise InvalidInput(f"function object missing field {exc}") from exc
    raise InvalidInput(f"unknown function kind {kind!r}")


def save_function(f: BoolFn, path):
    with open(path, "w") as fh:
        json.dump(function_to_dict(f), fh, indent=2)
        fh.write("\n")


def load_function(path) -> BoolFn:
    with open(path) as fh:
        return function_from_dict(json.load(fh))
