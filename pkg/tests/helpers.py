"""Shared generators and hand-built instances used across the test modules."""

import itertools
from fractions import Fraction

from votepower.boolfn import TruthTable, WeightedMajority
from votepower.measures import Explicit

_DENS = (2, 3, 4, 5, 8, 16)


def random_monotone(n, rnd):
    """Random nonconstant monotone truth table.

    Draws a random up-set seed, pins 0 at the bottom and 1 at the top, then
    takes the upward closure coordinate by coordinate.
    """
    size = 1 << n
    bits = 0
    for i in range(size):
        if rnd.random() < 0.5:
            bits |= 1 << i
    bits &= ~1  # all-zeros input stays 0
    bits |= 1 << (size - 1)
    for k in range(n):
        step = 1 << (n - 1 - k)
        for i in range(size):
            if not i & step and (bits >> i) & 1:
                bits |= 1 << (i | step)
    return TruthTable(n, bits)


def random_product_p(n, rnd):
    """Marginals strictly inside (0, 1) with small denominators."""
    out = []
    for _ in range(n):
        den = rnd.choice(_DENS)
        out.append(Fraction(rnd.randint(1, den - 1), den))
    return tuple(out)


def _monotone_bits(bits, n):
    size = 1 << n
    for k in range(n):
        step = 1 << (n - 1 - k)
        for i in range(size):
            if not i & step and (bits >> i) & 1 and not (bits >> (i | step)) & 1:
                return False
    return True


def monotone_antisymmetric_tables(n):
    """Every monotone anti-symmetric function on n variables.

    Enumerates free values on one representative per complement pair,
    extends by anti-symmetry and filters by monotonicity.  2^(2^(n-1))
    candidates, so this stops being fun past n = 5.
    """
    size = 1 << n
    full = size - 1
    reps = [i for i in range(size) if i < full ^ i]
    out = []
    for choice in range(1 << len(reps)):
        bits = 0
        for t, i in enumerate(reps):
            if (choice >> t) & 1:
                bits |= 1 << i
            else:
                bits |= 1 << (full ^ i)
        if _monotone_bits(bits, n):
            out.append(TruthTable(n, bits))
    return out


def random_tiefree_wm(n, rnd):
    """Weighted majority with integer weights of odd total, so no ties."""
    weights = [rnd.randint(1, 8) for _ in range(n)]
    if sum(weights) % 2 == 0:
        weights[-1] += 1
    return WeightedMajority(tuple(weights))


def random_biased_explicit(n, rnd):
    """Explicit measure whose marginals all sit strictly inside (1/2, 1).

    Mass 64 on all-ones dominates at most 48 units of random mass plus one
    on all-zeros, so every marginal is at least 64/113 > 1/2 and at most
    1 - 1/total < 1.
    """
    counts = {(1,) * n: 64, (0,) * n: 1}
    for _ in range(rnd.randint(1, 6)):
        x = tuple(rnd.randint(0, 1) for _ in range(n))
        counts[x] = counts.get(x, 0) + rnd.randint(1, 8)
    total = sum(counts.values())
    return Explicit(n, {x: Fraction(c, total) for x, c in counts.items()})


def tau2_instance():
    """Six unit-weight voters whose cover number lands exactly on 2.

    The triples {1,2,3}, {1,4,5}, {2,4,6}, {3,5,6} vote 0: no two are
    complementary, and each voter sits in exactly two of them, so weight
    1/2 per triple covers every voter while 1/3 per triple certifies the
    matching dual.  Complements of those triples vote 1 and every other
    tie goes to whoever holds voter 1.
    """
    zeros = [{1, 2, 3}, {1, 4, 5}, {2, 4, 6}, {3, 5, 6}]
    ties = {}
    for combo in itertools.combinations(range(1, 7), 3):
        s = set(combo)
        if s in zeros:
            v = 0
        elif set(range(1, 7)) - s in zeros:
            v = 1
        else:
            v = 1 if 1 in s else 0
        ties[tuple(1 if k in s else 0 for k in range(1, 7))] = v
    return WeightedMajority((1,) * 6, tie_table=ties)


def tiebreak_majority(weights, chair=1):
    """Weighted majority where the chair's vote settles every tie."""
    weights = tuple(int(w) for w in weights)
    n = len(weights)
    total = sum(weights)
    ties = {}
    for x in itertools.product((0, 1), repeat=n):
        if 2 * sum(w for w, v in zip(weights, x) if v) == total:
            ties[x] = x[chair - 1]
    return WeightedMajority(weights, tie_table=ties)
