from fractions import Fraction as F

from mphase.core import vec, vec_dot
from mphase.polyhedra.simplex import EQ, LE, solve_lp


def test_min_with_lower_bound():
    r = solve_lp(1, [(vec([-1]), LE, F(-3))], vec([1]))
    assert r.status == "optimal"
    assert r.value == 3
    assert r.point == vec([3])


def test_unbounded_with_ray():
    r = solve_lp(1, [(vec([1]), LE, F(3))], vec([1]))
    assert r.status == "unbounded"
    assert r.ray == vec([-1])


def test_infeasible_constant_row():
    r = solve_lp(1, [(vec([0]), LE, F(-1))], vec([1]))
    assert r.status == "infeasible"
    assert r.farkas == [F(1)]


def test_farkas_certificate_contract():
    rows = [(vec([1, 1]), LE, F(0)), (vec([-1, 0]), LE, F(-2)),
            (vec([0, -1]), LE, F(-2))]
    r = solve_lp(2, rows, None)
    assert r.status == "infeasible"
    lam = r.farkas
    assert all(l >= 0 for l in lam)
    for j in range(2):
        assert sum(l * rows[i][0][j] for i, l in enumerate(lam)) == 0
    assert sum(l * rows[i][2] for i, l in enumerate(lam)) < 0


def test_duals_contract_with_equality():
    rows = [(vec([-1, -1]), LE, F(-2)), (vec([1, -1]), EQ, F(0))]
    objective = vec([1, 1])
    r = solve_lp(2, rows, objective)
    assert r.status == "optimal"
    assert r.value == 2
    y = r.duals
    assert y[0] <= 0  # <= rows have nonpositive duals
    for j in range(2):
        assert sum(y[i] * rows[i][0][j] for i in range(2)) == objective[j]
    assert sum(y[i] * rows[i][2] for i in range(2)) == r.value


def test_nonneg_variables():
    # min -x - y s.t. x + y <= 5, x, y >= 0
    r = solve_lp(2, [(vec([1, 1]), LE, F(5))], vec([-1, -1]),
                 nonneg=[True, True])
    assert r.status == "optimal"
    assert r.value == -5


def test_degenerate_cycling_guard():
    # A classically cycling-prone LP; Bland's rule must terminate.
    r = solve_lp(
        4,
        [
            (vec([F(1, 4), -60, F(-1, 25), 9]), LE, F(0)),
            (vec([F(1, 2), -90, F(-1, 50), 3]), LE, F(0)),
            (vec([0, 0, 1, 0]), LE, F(1)),
        ],
        vec([F(-3, 4), 150, F(-1, 50), 6]),
        nonneg=[True] * 4,
    )
    assert r.status == "optimal"
    assert r.value == F(-1, 20)


def test_feasibility_only_returns_point():
    rows = [(vec([1, 0]), LE, F(4)), (vec([-1, -1]), LE, F(-1))]
    r = solve_lp(2, rows, None)
    assert r.status == "optimal"
    for coeffs, _, rhs in rows:
        assert vec_dot(coeffs, r.point) <= rhs


def test_unbounded_ray_improves():
    rows = [(vec([1, -1]), LE, F(2))]
    objective = vec([1, -2])
    r = solve_lp(2, rows, objective)
    assert r.status == "unbounded"
    assert vec_dot(objective, r.ray) < 0
    assert vec_dot(rows[0][0], r.ray) <= 0
