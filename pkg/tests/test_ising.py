"""Broadcast tree recursion, regime claims, and Monte Carlo agreement."""

import itertools
import math
from fractions import Fraction

import pytest

from votepower.boolfn import RecursiveMajority
from votepower.exceptions import (
    DegenerateStratum,
    IndexOutOfRange,
    InvalidInput,
    InvalidParams,
    OutOfRegime,
    TooLarge,
)
from votepower.ising import (
    TreeParams,
    bp_exact,
    claim1_margin,
    claim2_bound,
    leaf_joint_explicit,
    mc_effect,
    mc_mu_m,
)
from votepower.measures import expect, is_fkg, marginal


def _brute_depth_one(eps, delta):
    """Enumerate (root, flips, resamples) for r = 1 with exact masses.

    Returns the leaf-vector law and the exact x- and y-conditioned
    effects of leaf 1 on the majority value.
    """
    half = Fraction(1, 2)
    law = {}
    m_and = {"x1": Fraction(0), "x0": Fraction(0), "y1": Fraction(0), "y0": Fraction(0)}
    mass_of = {"x1": Fraction(0), "x0": Fraction(0), "y1": Fraction(0), "y0": Fraction(0)}
    for root in (0, 1):
        for flips in itertools.product((0, 1), repeat=3):
            p_flip = math.prod((eps if fl else 1 - eps) for fl in flips)
            y = tuple(root ^ fl for fl in flips)
            for res in itertools.product((0, 1), repeat=3):
                p_res = math.prod((delta if rb else 1 - delta) for rb in res)
                mass = half * p_flip * p_res
                if mass == 0:
                    continue
                x = tuple(yi | rb for yi, rb in zip(y, res))
                law[x] = law.get(x, Fraction(0)) + mass
                m = 1 if sum(x) >= 2 else 0
                for key, bit in (("x", x[0]), ("y", y[0])):
                    tag = f"{key}{bit}"
                    mass_of[tag] += mass
                    m_and[tag] += mass * m
    x_eff = m_and["x1"] / mass_of["x1"] - m_and["x0"] / mass_of["x0"]
    y_eff = m_and["y1"] / mass_of["y1"] - m_and["y0"] / mass_of["y0"]
    return law, x_eff, y_eff


def test_tree_params_validation():
    tp = TreeParams(2, Fraction(1, 10), Fraction(1, 100))
    assert tp.n == 9
    with pytest.raises(InvalidParams):
        TreeParams(0, Fraction(1, 10), Fraction(0))
    with pytest.raises(InvalidParams):
        TreeParams(1, Fraction(0), Fraction(0))
    with pytest.raises(InvalidParams):
        TreeParams(1, Fraction(1, 2), Fraction(0))
    with pytest.raises(InvalidParams):
        TreeParams(1, Fraction(1, 10), Fraction(1))
    with pytest.raises(InvalidParams):
        TreeParams(1, Fraction(1, 10), Fraction(-1, 10))


def test_bp_exact_depth_one_by_hand():
    # eps = 1/4, delta = 0: c0 = 3/4 gives a1 = 27/32, b1 = 5/32
    res = bp_exact(TreeParams(1, Fraction(1, 4), Fraction(0)))
    assert res.method == "exact"
    assert res.state.a(1) == Fraction(27, 32)
    assert res.state.b(1) == Fraction(5, 32)
    assert res.mu_m == Fraction(1, 2)
    assert res.state.a(0) == 1 and res.state.b(0) == 0


def test_bp_exact_depth_one_with_resampling_frozen():
    res = bp_exact(TreeParams(1, Fraction(1, 100), Fraction(1, 100)))
    assert res.mu_m == Fraction(5004400897, 10**10)


def test_bp_zero_delta_is_symmetric():
    for r in (1, 2, 3, 4):
        for eps in (Fraction(1, 100), Fraction(1, 10), Fraction(2, 5)):
            res = bp_exact(TreeParams(r, eps, Fraction(0)))
            assert res.mu_m == Fraction(1, 2)
            for k in range(r + 1):
                a = res.state.a(k)
                b = res.state.b(k)
                assert Fraction(a.num, a.den) + Fraction(b.num, b.den) == 1


def test_bp_mu_monotone_in_delta():
    prev = None
    for delta in (Fraction(0), Fraction(1, 100), Fraction(1, 10), Fraction(1, 4)):
        cur = bp_exact(TreeParams(3, Fraction(1, 10), delta)).mu_m
        if prev is not None:
            assert prev < cur
        prev = cur


def test_bp_float_path_tracks_exact():
    for r in (1, 3, 6):
        tp = TreeParams(r, Fraction(1, 10), Fraction(1, 100))
        exact = bp_exact(tp, method="exact")
        fl = bp_exact(tp, method="float")
        assert fl.method == "float"
        assert abs(float(exact.mu_m) - float(fl.mu_m)) < 1e-13


def test_bp_auto_switches_to_float_in_depth():
    deep = bp_exact(TreeParams(13, Fraction(1, 100), Fraction(1, 100)))
    assert deep.method == "float"
    # the residual bias is ~1e-18 here: invisible to float64, but the
    # extended-precision value must still sit strictly above one half
    assert 0.5 < deep.mu_m < 0.51
    shallow = bp_exact(TreeParams(4, Fraction(1, 100), Fraction(1, 100)))
    assert shallow.method == "exact"
    with pytest.raises(InvalidInput):
        bp_exact(TreeParams(2, Fraction(1, 10), Fraction(0)), method="quantum")


def test_bp_float_resolves_sub_ulp_bias():
    from votepower.rationals import ExactRatio

    tp = TreeParams(10, Fraction(1, 100), Fraction(1, 100))
    ex = bp_exact(tp, method="exact").mu_m
    gap_exact = float(ExactRatio(2 * ex.num - ex.den, 2 * ex.den))
    gap_float = float(bp_exact(tp, method="float").mu_m - 0.5)
    assert gap_exact > 0
    assert abs(gap_float / gap_exact - 1) < 1e-9


def test_claim1_report_all_green_in_regime():
    rep = claim1_margin(TreeParams(2, Fraction(1, 100), Fraction(1, 100)))
    assert rep.mu_bound == Fraction(101, 200)
    assert rep.root_bound == Fraction(99, 100)
    assert rep.mu_ok and rep.root_ok and rep.h_ok
    assert rep.all_ok
    assert rep.mu_m <= Fraction(101, 200)
    assert rep.root_zero_given_zero >= Fraction(99, 100)
    assert rep.h_value >= 1


def test_claim1_regime_gate():
    with pytest.raises(OutOfRegime):
        claim1_margin(TreeParams(2, Fraction(1, 50), Fraction(1, 50)))
    with pytest.raises(OutOfRegime):
        claim1_margin(TreeParams(2, Fraction(1, 100), Fraction(1, 200)))
    with pytest.raises(TooLarge):
        claim1_margin(TreeParams(13, Fraction(1, 100), Fraction(1, 100)))


def test_claim2_bound_values():
    b1 = claim2_bound(1, Fraction(1, 100))
    assert b1.stated == 2.0 and b1.proof_form == 2.0
    b9 = claim2_bound(9, Fraction(1, 100))
    assert b9.stated == 0.995**4 + 2.0**-4
    assert b9.proof_form == 0.98**4 + 2.0**-4
    for r in (3, 5, 11):
        b = claim2_bound(r, Fraction(1, 20))
        assert b.proof_form <= b.stated
    with pytest.raises(InvalidParams):
        claim2_bound(0, Fraction(1, 100))
    with pytest.raises(InvalidParams):
        claim2_bound(3, Fraction(1, 2))


def test_leaf_joint_depth_one_matches_enumeration():
    eps, delta = Fraction(1, 10), Fraction(1, 100)
    tp = TreeParams(1, eps, delta)
    law, x_eff, y_eff = _brute_depth_one(eps, delta)
    joint = leaf_joint_explicit(tp)
    assert dict(joint.support()) == law
    assert expect(joint, RecursiveMajority(3, 1)) == bp_exact(tp).mu_m
    assert marginal(joint, 1) == (1 + delta) / 2
    assert is_fkg(joint)
    # exact effects against a big Monte Carlo run
    est = mc_effect(tp, leaf=1, samples=50000, seed=11)
    assert abs(est.x_effect - float(x_eff)) <= 4 * est.x_stderr
    assert abs(est.y_effect - float(y_eff)) <= 4 * est.y_stderr


def test_leaf_joint_depth_two_matches_recursion():
    tp = TreeParams(2, Fraction(1, 10), Fraction(1, 20))
    joint = leaf_joint_explicit(tp)
    assert sum(m for _, m in joint.support()) == 1
    assert expect(joint, RecursiveMajority(3, 2)) == bp_exact(tp).mu_m
    with pytest.raises(TooLarge):
        leaf_joint_explicit(TreeParams(3, Fraction(1, 10), Fraction(1, 20)))


def test_mc_mu_m_statistics():
    tp = TreeParams(2, Fraction(1, 10), Fraction(1, 10))
    est = mc_mu_m(tp, samples=30000, seed=21)
    again = mc_mu_m(tp, samples=30000, seed=21)
    assert (est.estimate, est.stderr) == (again.estimate, again.stderr)
    assert est.samples == 30000
    assert est.backend in ("compiled", "python")
    exact = float(bp_exact(tp).mu_m)
    assert abs(est.estimate - exact) <= 4 * est.stderr
    assert est.stderr < 0.01


def test_mc_effect_leaf_choice_is_immaterial():
    tp = TreeParams(2, Fraction(1, 10), Fraction(1, 10))
    a = mc_effect(tp, leaf=1, samples=40000, seed=33)
    b = mc_effect(tp, leaf=5, samples=40000, seed=34)
    spread = 4 * math.hypot(a.x_stderr, b.x_stderr)
    assert abs(a.x_effect - b.x_effect) <= spread
    assert a.counts["x1"] + a.counts["x0"] == 40000
    with pytest.raises(IndexOutOfRange):
        mc_effect(tp, leaf=10, samples=100, seed=1)


def test_mc_effect_zero_delta_strata_coincide():
    tp = TreeParams(1, Fraction(1, 10), Fraction(0))
    est = mc_effect(tp, leaf=2, samples=20000, seed=41)
    assert est.x_effect == est.y_effect
    assert est.counts["x1"] == est.counts["y1"]


def test_mc_effect_degenerate_stratum():
    # delta so close to 1 that no x = 0 outcome ever shows up
    tp = TreeParams(1, Fraction(1, 10), Fraction(999999999, 10**9))
    with pytest.raises(DegenerateStratum):
        mc_effect(tp, leaf=1, samples=50, seed=5)


def test_mc_rejects_bad_sampling_parameters():
    tp = TreeParams(1, Fraction(1, 10), Fraction(0))
    with pytest.raises(InvalidInput):
        mc_mu_m(tp, samples=0, seed=1)
    with pytest.raises(InvalidInput):
        mc_effect(tp, leaf=1, samples=-5, seed=1)
