"""Representations of monotone voting rules and their exact evaluation."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from votepower.boolfn import (
    Composed,
    RecursiveMajority,
    TruthTable,
    WeightedMajority,
    all_inputs,
    complement,
    dictator,
    function_from_dict,
    function_to_dict,
    index_of,
    input_at,
    load_function,
    majority,
    save_function,
)
from votepower.exceptions import (
    InvalidInput,
    LengthMismatch,
    TooLarge,
    UnresolvedTie,
)


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
@settings(max_examples=200)
def test_index_roundtrip(args):
    n, i = args
    x = input_at(i, n)
    assert len(x) == n
    assert index_of(x) == i


def test_first_variable_is_most_significant():
    assert index_of((1, 0, 0)) == 4
    assert input_at(5, 3) == (1, 0, 1)
    assert complement((1, 0, 1)) == (0, 1, 0)


def test_all_inputs_order():
    got = list(all_inputs(2))
    assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_truth_table_eval_and_bit_string():
    f = majority(3).to_truth_table()
    assert f.bits == 232
    assert f.bit_string() == "00010111"
    back = TruthTable.from_bit_string("00010111")
    assert back.bits == f.bits and back.n == 3
    assert [f.evaluate(x) for x in all_inputs(3)] == [0, 0, 0, 1, 0, 1, 1, 1]


def test_truth_table_rejects_bad_input():
    with pytest.raises(InvalidInput):
        TruthTable(2, 16)  # five bits for a four-row table
    with pytest.raises(InvalidInput):
        TruthTable(0, 0)
    with pytest.raises(InvalidInput):
        TruthTable.from_bit_string("001")  # length not a power of two
    with pytest.raises(LengthMismatch):
        majority(3).evaluate((1, 0))
    with pytest.raises(InvalidInput):
        majority(3).evaluate((1, 0, 2))


def test_weighted_majority_margin_decides():
    f = WeightedMajority((2, 1, 1))
    assert f.margin((1, 0, 0)) == 0
    assert f.evaluate((1, 0, 1)) == 1
    assert f.evaluate((0, 1, 0)) == 0
    with pytest.raises(UnresolvedTie):
        f.evaluate((1, 0, 0))


def test_weighted_majority_tie_table():
    f = WeightedMajority((2, 1, 1), tie_table={(1, 0, 0): 1, (0, 1, 1): 0})
    assert f.evaluate((1, 0, 0)) == 1
    assert f.evaluate((0, 1, 1)) == 0
    # entries at non-tie inputs are inert: the margin sign still decides
    g = WeightedMajority((2, 1, 1), tie_table={(1, 0, 1): 0})
    assert g.evaluate((1, 0, 1)) == 1


def test_weighted_majority_validates_weights():
    with pytest.raises(InvalidInput):
        WeightedMajority((1, -1))
    with pytest.raises(InvalidInput):
        WeightedMajority((0, 0, 0))
    with pytest.raises(InvalidInput):
        WeightedMajority(())
    f = WeightedMajority((Fraction(1, 2), "1/4", 0.25))
    assert f.weights == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))


@given(
    st.lists(st.integers(1, 9), min_size=1, max_size=7).filter(
        lambda ws: sum(ws) % 2 == 1
    )
)
@settings(max_examples=150)
def test_odd_total_weight_never_ties_and_is_antisymmetric(ws):
    f = WeightedMajority(tuple(ws))
    n = len(ws)
    assert f.is_monotone()
    for x in all_inputs(n):
        v = f.evaluate(x)  # never raises: odd total weight
        assert v == (1 - f.evaluate(complement(x)))


def test_recursive_majority_levels():
    rm1 = RecursiveMajority(3, 1)
    assert rm1.n == 3
    assert rm1.to_truth_table().bits == majority(3).to_truth_table().bits
    rm2 = RecursiveMajority(3, 2)
    assert rm2.n == 9
    # blocks (1,1,0), (1,0,0), (0,1,1) vote 1, 0, 1
    assert rm2.evaluate((1, 1, 0, 1, 0, 0, 0, 1, 1)) == 1
    assert rm2.evaluate((1, 0, 0, 1, 0, 0, 1, 1, 1)) == 0
    with pytest.raises(InvalidInput):
        RecursiveMajority(2, 2)
    with pytest.raises(InvalidInput):
        RecursiveMajority(3, 0)


def test_composed_blocks():
    f = Composed(majority(3), (majority(3), dictator(1), majority(3)))
    assert f.n == 7
    x = (1, 1, 0) + (1,) + (0, 0, 1)
    assert f.evaluate(x) == 1  # inner votes 1, 1, 0
    with pytest.raises(LengthMismatch):
        f.evaluate((1, 0, 1))


def test_dictator_and_majority_helpers():
    d = dictator(4, k=3)
    for x in all_inputs(4):
        assert d.evaluate(x) == x[2]
    with pytest.raises(UnresolvedTie):
        majority(4).evaluate((1, 1, 0, 0))  # even field can deadlock
    with pytest.raises(InvalidInput):
        dictator(3, k=5)


def test_pivotality():
    f = majority(3)
    assert f.is_pivotal((1, 1, 0), 1)  # the other two split
    assert not f.is_pivotal((1, 1, 1), 1)
    assert f.is_pivotal((0, 0, 1), 2)


def test_monotone_and_antisymmetric_predicates():
    assert majority(5).is_monotone()
    assert majority(5).is_antisymmetric()
    xor = TruthTable(2, 0b0110)
    assert not xor.is_monotone()
    assert not xor.is_antisymmetric()
    up_not_antisym = TruthTable(2, 0b1110)  # OR
    assert up_not_antisym.is_monotone()
    assert not up_not_antisym.is_antisymmetric()


def test_monotone_antisymmetric_census():
    # one voter: the dictator; then 2, 4, 12, 81 as n grows
    assert len(helpers.monotone_antisymmetric_tables(1)) == 1
    assert len(helpers.monotone_antisymmetric_tables(2)) == 2
    assert len(helpers.monotone_antisymmetric_tables(3)) == 4
    assert len(helpers.monotone_antisymmetric_tables(4)) == 12


def test_monotone_antisymmetric_census_five():
    assert len(helpers.monotone_antisymmetric_tables(5)) == 81


def test_truth_table_cap():
    f = WeightedMajority((1,) * 25)
    with pytest.raises(TooLarge):
        f.to_truth_table()
    with pytest.raises(TooLarge):
        f.is_monotone()


def test_serialization_roundtrip(tmp_path):
    cases = [
        majority(5).to_truth_table(),
        WeightedMajority((2, 1, 1), tie_table={(1, 0, 0): 1, (0, 1, 1): 0}),
        RecursiveMajority(3, 2),
        Composed(majority(3), (majority(3), dictator(1), majority(3))),
        helpers.tau2_instance(),
    ]
    for f in cases:
        g = function_from_dict(function_to_dict(f))
        assert type(g) is type(f)
        assert g.n == f.n
        for x in all_inputs(f.n):
            try:
                want = f.evaluate(x)
            except UnresolvedTie:
                with pytest.raises(UnresolvedTie):
                    g.evaluate(x)
                continue
            assert g.evaluate(x) == want
        path = tmp_path / "fn.json"
        save_function(f, path)
        h = load_function(path)
        assert function_to_dict(h) == function_to_dict(f)


def test_serialization_rejects_malformed():
    with pytest.raises(InvalidInput):
        function_from_dict({"kind": "nope"})
    with pytest.raises(InvalidInput):
        function_from_dict({"kind": "truth_table", "n": 2})
    with pytest.raises(InvalidInput):
        function_from_dict(
            {"kind": "weighted_majority", "weights": ["1", "1"], "tie_table": [["1", 1]]}
        )


def test_tau2_instance_is_exactly_balanced():
    f = helpers.tau2_instance()
    ties = [x for x in all_inputs(6) if f.margin(x) == 0]
    assert len(ties) == 20  # every three-of-six split
    assert len(f.tie_table) == 20
    zeros = [x for x in ties if f.evaluate(x) == 0]
    assert len(zeros) == 10  # anti-symmetric split of the middle layer
