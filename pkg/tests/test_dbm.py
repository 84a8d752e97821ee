"""Difference-bound matrices: worked examples with frozen expectations
(each independently confirmed against the grid oracle) and the
structural laws of the canonical form.
"""

import random

import numpy as np
import pytest

from oracles import (
    constraint_mask,
    dbm_mask,
    elapse_mask,
    exists_mask,
    grid,
    make_clocks,
    random_constraint,
    reset_mask,
)
from zonereach.bounds import INF, ZERO_LE, bound
from zonereach.dbm import Dbm
from zonereach.model import Atom, ClockConstraint, ClockId, TRUE

X = ClockId("x", 0)
Y = ClockId("y", 1)
CL = (X, Y)


def zone(*atoms) -> Dbm:
    return Dbm.from_constraint(ClockConstraint(atoms), CL)


# -- worked examples, expectations frozen -------------------------------------


def test_closure_derives_the_indirect_bound():
    # x <= 3 and y - x <= 2 force y <= 5
    z = zone(Atom(X, None, "<=", 3), Atom(Y, X, "<=", 2))
    assert z.cells == (1, 1, 1, 7, 1, 7, 11, 5, 1)
    assert Atom(Y, None, "<=", 5) in z.to_constraint().atoms


def test_reset_keeps_the_other_clock_pinned_down():
    # resetting x in {y - x >= 1, y <= 4} leaves y in [1, 4], not [0, 4]
    z = zone(Atom(Y, X, ">=", 1), Atom(Y, None, "<=", 4))
    r = z.reset([X])
    assert r.cells == (1, 1, -1, 1, 1, -1, 9, 9, 1)
    atoms = set(r.to_constraint().atoms)
    assert Atom(Y, None, ">=", 1) in atoms
    assert Atom(X, None, "<=", 0) in atoms


def test_elapse_of_a_point_is_a_diagonal_ray():
    z = zone(Atom(X, None, "=", 1), Atom(Y, None, "=", 0))
    e = z.elapse()
    assert e.cells == (1, -1, 1, INF, 1, 3, INF, -1, 1)
    atoms = set(e.to_constraint().atoms)
    assert atoms == {Atom(X, None, ">=", 1), Atom(X, Y, "<=", 1), Atom(Y, X, "<=", -1)}


def test_extrapolate_forgets_beyond_the_constant():
    z = zone(Atom(X, None, "=", 10))
    e = z.extrapolate({X: 5, Y: 0})
    assert e.cells == (1, -10, 1, INF, 1, INF, INF, INF, 1)
    assert e.to_constraint().atoms == (Atom(X, None, ">", 5),)


def test_eliminate_is_the_exact_projection():
    z = zone(Atom(X, Y, "<=", 2), Atom(Y, None, "<=", 3))
    p = z.eliminate(Y)
    assert p.clocks == (X,)
    assert p.cells == (1, 1, 11, 1)
    assert p.to_constraint().atoms == (Atom(X, None, "<=", 5),)


def test_universe_and_empty_extremes():
    u = Dbm.universe(CL)
    assert not u.is_empty()
    assert u.to_constraint() == TRUE
    contradiction = zone(Atom(X, None, "<", 0))
    assert contradiction.is_empty()
    assert contradiction.cells is None
    # an empty zone still prints as an unsatisfiable constraint
    assert not contradiction.to_constraint().holds({X: 0, Y: 0})


def test_strictness_survives_closure():
    z = zone(Atom(X, None, "<", 3), Atom(Y, X, "<=", 2))
    assert z.cell(2, 0) == bound(5, strict=True)  # y < 5, not y <= 5


def test_intersect_detects_disjointness():
    a = zone(Atom(X, None, "<", 1))
    b = zone(Atom(X, None, ">", 1))
    assert a.intersect(b).is_empty()
    c = zone(Atom(X, None, "<=", 1))
    d = zone(Atom(X, None, ">=", 1))
    meet = c.intersect(d)
    assert not meet.is_empty()
    assert meet.cell(1, 0) == bound(1, False) and meet.cell(0, 1) == bound(-1, False)


def test_from_bounds_rejects_bad_grids():
    with pytest.raises(ValueError):
        Dbm.from_bounds(CL, [ZERO_LE] * 4)  # wrong size


# -- structural laws over random zones ----------------------------------------


def random_zone(rng, clocks):
    return Dbm.from_constraint(random_constraint(rng, clocks), clocks)


def test_canonical_form_is_unique():
    rng = random.Random(7)
    for _ in range(200):
        clocks = make_clocks(rng.randint(1, 4))
        c = random_constraint(rng, clocks)
        atoms = list(c.atoms)
        rng.shuffle(atoms)
        if atoms:
            atoms.append(rng.choice(atoms))  # duplicates change nothing
        z1 = Dbm.from_constraint(c, clocks)
        z2 = Dbm.from_constraint(ClockConstraint(tuple(atoms)), clocks)
        assert z1.cells == z2.cells
        assert z1.canonicalize().cells == z1.cells  # closure is idempotent


def test_includes_is_a_partial_order():
    rng = random.Random(11)
    for _ in range(200):
        clocks = make_clocks(rng.randint(1, 3))
        a, b, c = (random_zone(rng, clocks) for _ in range(3))
        assert a.includes(a)
        if a.includes(b) and b.includes(a):
            assert a.is_equivalent(b)
        if a.includes(b) and b.includes(c):
            assert a.includes(c)
        assert a.includes(a.intersect(b))
        assert Dbm.universe(clocks).includes(a)
        assert a.includes(Dbm.from_constraint(ClockConstraint((Atom(clocks[0], None, "<", 0),)), clocks))


def test_elapse_grows_and_is_idempotent():
    rng = random.Random(13)
    for _ in range(200):
        clocks = make_clocks(rng.randint(1, 3))
        z = random_zone(rng, clocks)
        e = z.elapse()
        assert e.includes(z)
        assert e.elapse().cells == e.cells


def test_extrapolate_grows_and_is_idempotent():
    rng = random.Random(17)
    for _ in range(200):
        clocks = make_clocks(rng.randint(1, 3))
        z = random_zone(rng, clocks)
        k = {c: rng.randint(0, 10) for c in clocks}
        e = z.extrapolate(k)
        assert e.includes(z)
        assert e.extrapolate(k).cells == e.cells


def test_extrapolate_within_constants_is_identity():
    rng = random.Random(19)
    for _ in range(100):
        clocks = make_clocks(rng.randint(1, 3))
        z = random_zone(rng, clocks)
        if z.cells is None:
            continue
        big = max((abs(c) for c in map(lambda r: r >> 1, z.cells) if c < (INF >> 1)), default=0)
        assert z.extrapolate({c: big for c in clocks}).cells == z.cells


def test_reset_composes_clock_by_clock():
    rng = random.Random(23)
    for _ in range(150):
        clocks = make_clocks(rng.randint(2, 4))
        z = random_zone(rng, clocks)
        pair = rng.sample(clocks, 2)
        joint = z.reset(pair)
        assert joint.cells == z.reset([pair[0]]).reset([pair[1]]).cells
        assert joint.cells == z.reset([pair[1]]).reset([pair[0]]).cells


def test_eliminate_commutes():
    rng = random.Random(29)
    for _ in range(150):
        clocks = make_clocks(rng.randint(2, 4))
        z = random_zone(rng, clocks)
        a, b = rng.sample(clocks, 2)
        assert z.eliminate(a).eliminate(b).cells == z.eliminate(b).eliminate(a).cells


def test_to_constraint_roundtrips():
    rng = random.Random(31)
    for _ in range(200):
        clocks = make_clocks(rng.randint(1, 4))
        z = random_zone(rng, clocks)
        assert Dbm.from_constraint(z.to_constraint(), clocks).cells == z.cells


# -- grid exactness (the acceptance run does 1000; this is the smoke dose) ----


def test_grid_membership_matches_the_oracle():
    rng = random.Random(37)
    for _ in range(100):
        n = rng.randint(1, 3)
        clocks = make_clocks(n)
        pts = grid(n)
        c1 = random_constraint(rng, clocks)
        c2 = random_constraint(rng, clocks, max_atoms=3)
        z1 = Dbm.from_constraint(c1, clocks)
        assert np.array_equal(dbm_mask(z1, pts), constraint_mask(c1, clocks, pts))
        both = constraint_mask(c1, clocks, pts) & constraint_mask(c2, clocks, pts)
        assert np.array_equal(dbm_mask(z1.intersect(Dbm.from_constraint(c2, clocks)), pts), both)
        assert np.array_equal(dbm_mask(z1.elapse(), pts), elapse_mask(c1, clocks, pts))
        var = rng.choice(clocks)
        assert np.array_equal(dbm_mask(z1.reset([var]), pts), reset_mask(c1, clocks, var, pts))
        rest = tuple(c for c in clocks if c != var)
        if rest:
            sub = grid(len(rest))
            full = np.zeros((len(sub), n), dtype=np.int64)
            for i, c in enumerate(rest):
                full[:, c.index] = sub[:, i]
            assert np.array_equal(dbm_mask(z1.eliminate(var), sub), exists_mask(c1, clocks, var, full))
