"""Zone algebra, one operation at a time.

A zone is a convex set of clock valuations cut out by difference
constraints.  This walks a two-clock example through both
representations side by side: the bound matrix (shortest-path closed)
and the raw inequality list (projected by variable elimination).

    python3 demos/zones.py
"""

from zonereach import Dbm, Formula
from zonereach.formula import fm_elapse, fm_intersect, fm_reset
from zonereach.model import Atom, ClockConstraint, ClockId

X, Y = ClockId("x", 0), ClockId("y", 1)
CLOCKS = (X, Y)


def constraint(*triples) -> ClockConstraint:
    return ClockConstraint(tuple(Atom(l, r, op, c) for l, r, op, c in triples))


def show(title: str, z: Dbm) -> None:
    atoms = z.to_constraint().atoms
    pretty = " ^ ".join(
        f"{a.lhs.name}{'-' + a.rhs.name if a.rhs else ''}{a.op}{a.const}" for a in atoms
    )
    print(f"{title:<46} {pretty or 'true'}")


start = constraint((X, None, "<=", 3), (Y, X, "<=", 2))
z = Dbm.from_constraint(start, CLOCKS)
show("start: x<=3 ^ y-x<=2", z)
print("  closure already derived y<=5 from the two givens\n")

# letting time pass erases upper bounds but keeps every difference
up = z.elapse()
show("after arbitrary delay", up)

# a reset pins one clock and projects its old value away
back = up.reset([X])
show("then reset x", back)
print()

# the same pipeline through plain inequalities, no matrices involved
f = Formula.from_constraint(start, CLOCKS)
f = fm_reset(fm_elapse(f), [X])
print("formula backend, same pipeline:", f.closed_cells == back.cells and "identical zone")
print()

# extrapolation forgets bounds above each clock's largest constant;
# the zone only ever grows, which is what makes searches terminate
far = Dbm.from_constraint(constraint((X, None, "=", 10)), CLOCKS)
show("exotic zone: x=10", far)
show("extrapolated with max constant 5", far.extrapolate({X: 5, Y: 5}))
print("  every valuation with x>5 behaves alike once guards top out at 5")

# intersection detects inconsistency during closure
left = Dbm.from_constraint(constraint((X, Y, ">=", 4)), CLOCKS)
right = Dbm.from_constraint(constraint((X, None, "<=", 1), (Y, None, ">=", 2)), CLOCKS)
print("\nx-y>=4 meets {x<=1, y>=2}:", "empty" if left.intersect(right).is_empty() else "nonempty")
g = fm_intersect(
    Formula.from_constraint(constraint((X, Y, ">=", 4)), CLOCKS),
    Formula.from_constraint(constraint((X, None, "<=", 1), (Y, None, ">=", 2)), CLOCKS),
)
print("the formula side agrees:", g.closed_cells is None)
