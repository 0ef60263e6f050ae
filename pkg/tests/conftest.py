"""Shared fixtures: the benchmark loops and independent oracles.

The brute-force evaluators here deliberately re-implement the ranking
definitions pointwise, independent of the polyhedral checkers they
validate.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import pytest

from mphase import (
    NondeterministicUpdateError,
    RankTuple,
    SLCLoop,
    eval_affine,
    parse_loop,
    parse_tuple_file,
    transition_polyhedron,
    update_map,
    vec,
)
from mphase.polyhedra import Polyhedron, generators, Constraint
from mphase.core import vec_dot

LOOP_SOURCES = {
    # while (x >= -z) do x' = x+y, y' = y+z, z' = z-1
    "L1": """
vars x y z
guard x >= -z
update x' = x + y
update y' = y + z
update z' = z - 1
""",
    # while (x >= 0, y <= 10, z >= 0, z <= 1) do x' = x+y+z-10, y' = y-z, z' = 1-z
    "L2": """
vars x y z
guard x >= 0
guard y <= 10
guard z >= 0
guard z <= 1
update x' = x + y + z - 10
update y' = y - z
update z' = 1 - z
""",
    # while (x2 - x1 <= 0, x1 + x2 >= 1) do x2' = x2 - 2x1 + 1, x1' = x1
    "L3": """
vars x1 x2
guard x2 - x1 <= 0
guard x1 + x2 >= 1
update x2' = x2 - 2x1 + 1
update x1' = x1
""",
    # L3 extended with a third counter
    "L4": """
vars x1 x2 x3
guard x2 - x1 <= 0
guard x1 + x2 >= 1
guard x3 >= 0
update x1' = x1
update x2' = x2 - 2x1 + 1
update x3' = x3 + 10x2 + 9
""",
    # while (x >= 0) do x' = x+y, y' = y-1
    "L6": """
vars x y
guard x >= 0
update x' = x + y
update y' = y - 1
""",
}


def l5_source(b: int) -> str:
    return (f"vars x y\nguard x >= 1\nguard y >= 1\nguard x >= y\n"
            f"guard {2 ** b}y >= x\nupdate x' = 2x\nupdate y' = 3y\n")


@lru_cache(maxsize=None)
def get_loop(name: str) -> SLCLoop:
    if name.startswith("L5B"):
        return parse_loop(l5_source(int(name[3:])))
    return parse_loop(LOOP_SOURCES[name])


@lru_cache(maxsize=None)
def get_q(name: str) -> Polyhedron:
    return transition_polyhedron(get_loop(name))


def make_tuple(loop: SLCLoop, text: str, kind: str = "mlrf") -> RankTuple:
    lines = "".join(f"component {part}\n" for part in text.split(";"))
    return parse_tuple_file(lines, loop, kind=kind)


@pytest.fixture
def loops():
    return {name: get_loop(name) for name in LOOP_SOURCES}


# ---------------------------------------------------------------------------
# Independent pointwise oracles

def brute_ranked_mlrf(tup: RankTuple, pre, post) -> bool:
    """Direct multiphase definition: some index i has all components up
    to i decreasing by >= 1, component i nonnegative at the source, and
    all earlier components nonpositive there."""
    comps = tup.components
    for i in range(len(comps)):
        if all(eval_affine(f, pre) - eval_affine(f, post) >= 1
               for f in comps[: i + 1]) \
                and eval_affine(comps[i], pre) >= 0 \
                and all(eval_affine(f, pre) <= 0 for f in comps[:i]):
            return True
    return False


def brute_ranked_llrf(tup: RankTuple, pre, post, weak: bool = False) -> bool:
    """Direct lexicographic definition: some index i has nonnegative
    decrease before it, decrease >= 1 (or > 0 when weak) at i, and a
    nonnegative source value at i."""
    comps = tup.components
    for i in range(len(comps)):
        d_i = eval_affine(comps[i], pre) - eval_affine(comps[i], post)
        ok = d_i > 0 if weak else d_i >= 1
        if ok and eval_affine(comps[i], pre) >= 0 \
                and all(eval_affine(f, pre) - eval_affine(f, post) >= 0
                        for f in comps[:i]):
            return True
    return False


def integer_transitions(loop: SLCLoop, lo: int, hi: int):
    """All integer transitions of the loop with coordinates in [lo, hi].

    Deterministic loops enumerate source states only; the successor is
    computed and kept when it is integral and inside the box.
    """
    n = loop.n
    pres = [vec(p) for p in itertools.product(range(lo, hi + 1), repeat=n)
            if all(c.satisfied_by(vec(p)) for c in loop.guard)]
    try:
        updates = update_map(loop)
    except NondeterministicUpdateError:
        updates = None
    if updates is not None:
        for pre in pres:
            post = tuple(eval_affine(e, pre) for e in updates)
            if all(v.denominator == 1 and lo <= v <= hi for v in post):
                yield pre, post
        return
    posts = [vec(p) for p in itertools.product(range(lo, hi + 1), repeat=n)]
    for pre in pres:
        for post in posts:
            full = pre + post
            if all(c.satisfied_by(full) for c in loop.update):
                yield pre, post


# ---------------------------------------------------------------------------
# Polyhedron set comparison via generator containment

def poly_contains_gens(outer: Polyhedron, inner: Polyhedron) -> bool:
    gens = generators(inner)
    if gens.is_empty():
        return True
    le = outer.le_rows()
    return (all(outer.contains(v) for v in gens.vertices)
            and all(all(vec_dot(c.coeffs, r) <= 0 for c in le)
                    for r in gens.rays))


def polys_equal(p: Polyhedron, q: Polyhedron) -> bool:
    return poly_contains_gens(p, q) and poly_contains_gens(q, p)


def cone_of(p: Polyhedron) -> Polyhedron:
    return Polyhedron(p.dim, [Constraint(c.coeffs, "<=", Fraction(0))
                              for c in p.le_rows()])
