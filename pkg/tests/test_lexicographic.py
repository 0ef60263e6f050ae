import random
from fractions import Fraction as F

import pytest

from conftest import (
    brute_ranked_llrf,
    get_loop,
    get_q,
    integer_transitions,
    make_tuple,
)
from mphase import (
    InvalidTupleError,
    RankTuple,
    check_bmsllrf,
    check_mlrf,
    llrf_to_mlrf,
    parse_loop,
    synth_mlrf,
    transition_polyhedron,
)
from mphase.core import AffineFunc


def test_l2_lex_tuple_valid_but_not_multiphase():
    q = get_q("L2")
    tup = make_tuple(get_loop("L2"), "4y;4x-4z+4", kind="bms")
    assert check_bmsllrf(q, tup, weak=False).valid
    assert check_bmsllrf(q, tup, weak=True).valid
    assert not check_mlrf(q, tup).valid


def test_l2_conversion():
    q = get_q("L2")
    tup = make_tuple(get_loop("L2"), "4y;4x-4z+4", kind="bms")
    out = llrf_to_mlrf(q, tup, weak=False)
    assert out.depth <= 2
    assert check_mlrf(q, out).valid


def test_l2_reference_conversion_target_is_mlrf():
    q = get_q("L2")
    assert check_mlrf(q, make_tuple(get_loop("L2"), "4y+x-z;4x-4z+4")).valid


def test_invalid_witness_is_genuinely_unranked():
    q = get_q("L2")
    tup = make_tuple(get_loop("L2"), "4y;x", kind="bms")
    res = check_bmsllrf(q, tup, weak=False)
    assert not res.valid
    assert q.contains(res.witness.values)
    assert not brute_ranked_llrf(tup, res.witness.pre, res.witness.post)


def test_multiphase_tuples_are_lexicographic():
    for name, text in [("L1", "z+1;y+1;x"), ("L6", "y+1;x")]:
        q = get_q(name)
        tup = make_tuple(get_loop(name), text)
        assert check_mlrf(q, tup).valid
        assert check_bmsllrf(q, tup, weak=False).valid
        assert check_bmsllrf(q, tup, weak=True).valid


def test_round_trip_synthesized_tuples():
    for name, dmax in [("L1", 3), ("L6", 2)]:
        q = get_q(name)
        result = synth_mlrf(get_loop(name), dmax=dmax)
        assert check_bmsllrf(q, result.tuple, weak=True).valid
        out = llrf_to_mlrf(q, result.tuple, weak=True)
        assert check_mlrf(q, out).valid
        assert out.depth <= result.tuple.depth


def test_depth_one_lex_is_returned_asis_when_strict():
    q = get_q("L6")
    # y is not a ranking function; x alone is not either; use a strict one
    loop = parse_loop("vars x\nguard x >= 0\nupdate x' = x - 1\n")
    q1 = transition_polyhedron(loop)
    tup = RankTuple((AffineFunc.make([1], 0),), "bms")
    out = llrf_to_mlrf(q1, tup, weak=False)
    assert out.components == tup.components


def test_weak_depth_one_is_rescaled():
    loop = parse_loop("vars x\nguard x >= 0\nupdate x' = x - 1/2\n")
    q = transition_polyhedron(loop)
    tup = RankTuple((AffineFunc.make([1], 0),), "weak-bms")
    assert not check_bmsllrf(q, tup, weak=False).valid
    assert check_bmsllrf(q, tup, weak=True).valid
    out = llrf_to_mlrf(q, tup, weak=True)
    assert check_mlrf(q, out).valid
    assert out.components[0].coeffs[0] == 2  # decrease rescaled to 1


def test_depth_family_tuple_weak_valid():
    # the doubling/tripling family: reference tuple is weakly valid
    for b in (1, 2):
        loop = get_loop(f"L5B{b}")
        q = get_q(f"L5B{b}")
        comps = ";".join(f"x - {2 ** (b - i)}y" for i in range(b + 1))
        tup = make_tuple(loop, comps, kind="weak-bms")
        assert check_bmsllrf(q, tup, weak=True).valid
        out = llrf_to_mlrf(q, tup, weak=True)
        assert check_mlrf(q, out).valid
        assert out.depth <= b + 1


def test_convert_rejects_invalid():
    with pytest.raises(InvalidTupleError):
        llrf_to_mlrf(get_q("L6"), make_tuple(get_loop("L6"), "x", kind="bms"))


def test_checker_agrees_with_pointwise_definition():
    q = get_q("L2")
    loop = get_loop("L2")
    tup = make_tuple(loop, "4y;4x-4z+4", kind="bms")
    assert check_bmsllrf(q, tup, weak=False).valid
    count = 0
    for pre, post in integer_transitions(loop, -5, 5):
        assert brute_ranked_llrf(tup, pre, post)
        count += 1
    assert count > 0


def test_conversion_stress_on_random_valid_tuples():
    # random small loops: every weakly valid tuple must convert to a
    # genuine multiphase one without growing
    rng = random.Random(555000)
    converted = 0
    attempts = 0
    while converted < 12 and attempts < 400:
        attempts += 1
        names = ["a", "b"]
        lines = ["vars a b"]
        for _ in range(rng.randint(1, 2)):
            c = [rng.choice((-1, 0, 1)) for _ in range(2)]
            if not any(c):
                c[0] = 1
            lines.append(f"guard {c[0]}a + {c[1]}b <= {rng.choice((-1, 0, 1))}")
        for _ in range(2):
            c = [rng.choice((-1, 0, 1)) for _ in range(4)]
            if not any(c[2:]):
                c[2] = 1
            lines.append(f"update {c[0]}a + {c[1]}b + {c[2]}a' + {c[3]}b' "
                         f"<= {rng.choice((-1, 0, 1))}")
        loop = parse_loop("\n".join(lines) + "\n")
        q = transition_polyhedron(loop)
        comps = tuple(
            AffineFunc.make([rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1))],
                            rng.choice((0, 1)))
            for _ in range(rng.randint(1, 2)))
        tup = RankTuple(comps, "weak-bms")
        if not check_bmsllrf(q, tup, weak=True).valid:
            continue
        out = llrf_to_mlrf(q, tup, weak=True)
        assert check_mlrf(q, out).valid
        assert out.depth <= tup.depth
        converted += 1
    assert converted >= 12
