import itertools
from fractions import Fraction as F

import pytest

from conftest import get_loop, get_q, integer_transitions, make_tuple, brute_ranked_mlrf
from mphase import (
    InvalidTupleError,
    RankTuple,
    check_mlrf,
    check_nested,
    mlrf_to_nested,
    parse_loop,
    reduce_irredundant,
    synth_lrf,
    synth_mlrf,
    synth_nested,
    transition_polyhedron,
)
from mphase.core import AffineFunc
from mphase.polyhedra import integer_hull


def test_l1_found_at_depth_three():
    result = synth_mlrf(get_loop("L1"), dmax=3)
    assert result.found and result.depth == 3
    assert check_nested(get_q("L1"), result.tuple).valid


def test_l1_not_found_at_depth_one():
    assert synth_nested(get_q("L1"), 1) is None


def test_l3_rational_not_found():
    result = synth_mlrf(get_loop("L3"), dmax=5, domain="rational")
    assert not result.found
    assert result.max_depth_tried == 5
    assert not result.hull_applied


def test_l3_integer_found_depth_one():
    result = synth_mlrf(get_loop("L3"), dmax=5, domain="integer")
    assert result.found and result.depth == 1 and result.hull_applied


def test_l3_known_lrf_validates_on_hull():
    hull = integer_hull(get_q("L3"))
    lrf = make_tuple(get_loop("L3"), "x1 + x2", kind="nested")
    assert check_nested(hull, lrf).valid


def test_l4_rational_not_found_integer_found():
    assert not synth_mlrf(get_loop("L4"), dmax=5, domain="rational").found
    result = synth_mlrf(get_loop("L4"), dmax=2, domain="integer")
    assert result.found and result.depth <= 2


def test_l4_reference_tuple_on_hull():
    hull = integer_hull(get_q("L4"))
    tup = make_tuple(get_loop("L4"), "10x2 + 10;x3")
    assert check_mlrf(hull, tup).valid


@pytest.mark.parametrize("b", [1, 2, 3])
def test_depth_family_minimum_depth(b):
    loop = get_loop(f"L5B{b}")
    q = get_q(f"L5B{b}")
    for d in range(1, b + 1):
        assert synth_nested(q, d) is None
    result = synth_mlrf(loop, dmax=b + 1)
    assert result.found and result.depth == b + 1


def test_monotonic_in_depth_on_fixtures():
    for name, d0 in [("L6", 2), ("L1", 3)]:
        q = get_q(name)
        assert synth_nested(q, d0) is not None
        assert synth_nested(q, d0 + 1) is not None


def test_infeasible_loop_vacuous():
    loop = parse_loop("vars x\nguard x >= 1\nguard x <= 0\nupdate x' = x\n")
    result = synth_mlrf(loop, dmax=2)
    assert result.found and result.vacuous and result.tuple.depth == 0


def test_synth_lrf_l3():
    assert not synth_lrf(get_loop("L3"), domain="rational").found
    assert synth_lrf(get_loop("L3"), domain="integer").found
    assert not synth_lrf(get_loop("L1")).found


def test_grid_completeness_depth_two():
    # NotFound must mean no small-coefficient candidate passes either.
    loops = [
        parse_loop("vars x y\nguard x >= 0\nguard y <= 0\nupdate x' = x + y\nupdate y' = y\n"),
        parse_loop("vars x y\nguard x + y >= 0\nupdate x' = x - 1\nupdate y' = y + 1\n"),
    ]
    grid = [F(-1), F(0), F(1)]
    consts = [F(0), F(1)]
    for loop in loops:
        q = transition_polyhedron(loop)
        for d in (1, 2):
            if synth_nested(q, d) is not None:
                continue
            for combo in itertools.product(grid, grid, consts, repeat=d):
                comps = []
                for k in range(d):
                    a, b, c = combo[3 * k: 3 * k + 3]
                    comps.append(AffineFunc.make([a, b], c))
                cand = RankTuple(tuple(comps), "nested")
                assert not check_nested(q, cand).valid, (loop, cand)


def test_integer_pipeline_ranks_integer_transitions():
    result = synth_mlrf(get_loop("L3"), dmax=2, domain="integer")
    tup = result.tuple
    count = 0
    for pre, post in integer_transitions(get_loop("L3"), -5, 5):
        assert brute_ranked_mlrf(tup, pre, post)
        count += 1
    assert count > 0


def test_reduce_removes_duplicate():
    q = get_q("L6")
    tup = make_tuple(get_loop("L6"), "y+1;x;x")
    reduced = reduce_irredundant(q, tup)
    assert [f for f in reduced.components] == \
        [f for f in make_tuple(get_loop("L6"), "y+1;x").components]


def test_reduce_keeps_irredundant():
    q = get_q("L1")
    tup = make_tuple(get_loop("L1"), "z+1;y+1;z+x")
    assert reduce_irredundant(q, tup).components == tup.components


def test_reduce_rejects_invalid():
    with pytest.raises(InvalidTupleError):
        reduce_irredundant(get_q("L1"), make_tuple(get_loop("L1"), "x"))


def test_mlrf_to_nested_l1():
    q = get_q("L1")
    tup = make_tuple(get_loop("L1"), "z+1;y+1;x")
    out = mlrf_to_nested(q, tup)
    assert out.depth <= 3
    assert check_nested(q, out).valid


def test_mlrf_to_nested_identity_on_nested():
    q = get_q("L1")
    tup = make_tuple(get_loop("L1"), "z+1;y+1;z+x")
    out = mlrf_to_nested(q, tup)
    assert out.components == tup.components


def test_mlrf_to_nested_l6():
    q = get_q("L6")
    out = mlrf_to_nested(q, make_tuple(get_loop("L6"), "y+1;x"))
    assert out.depth <= 2
    assert check_nested(q, out).valid


def test_mlrf_to_nested_rejects_invalid():
    with pytest.raises(InvalidTupleError):
        mlrf_to_nested(get_q("L6"), make_tuple(get_loop("L6"), "x"))


def test_synthesized_tuples_pass_both_checkers():
    for name, dmax in [("L1", 3), ("L6", 2), ("L5B2", 3)]:
        result = synth_mlrf(get_loop(name), dmax=dmax)
        assert result.found
        q = get_q(name)
        assert check_nested(q, result.tuple).valid
        assert check_mlrf(q, result.tuple).valid


def test_nested_conversion_stress_on_random_valid_tuples():
    import random

    from conftest import brute_ranked_mlrf
    from mphase import check_bmsllrf

    rng = random.Random(20200202)
    converted = 0
    attempts = 0
    while converted < 12 and attempts < 500:
        attempts += 1
        lines = ["vars a b"]
        for _ in range(rng.randint(1, 2)):
            c = [rng.choice((-1, 0, 1)) for _ in range(2)]
            if not any(c):
                c[0] = 1
            lines.append(f"guard {c[0]}a + {c[1]}b <= {rng.choice((-1, 0, 1))}")
        for _ in range(rng.randint(2, 3)):
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
            for _ in range(rng.randint(1, 3)))
        tup = RankTuple(comps, "mlrf")
        if not check_mlrf(q, tup).valid:
            continue
        out = mlrf_to_nested(q, tup)
        assert check_nested(q, out).valid
        assert out.depth <= tup.depth
        converted += 1
    assert converted >= 12
