"""From a presentation to a tropical type and back.

The monoid <e0..e3 | e0+e2 = 2e1, e1+e3 = 2e2, e0+e3 = e1+e2> torifies to
the lattice points of cone((1,0),(1,3)).  We sanitize it, build the
two-path type to R^5_+, and check that its tropical monoid is the same.
"""

from tropmon import Presentation, Relation, construct_type, sanitize, toric_equal, torify
from tropmon.constructions import affine_glue
from tropmon.tropical_types import tropical_monoid

P = Presentation(("e0", "e1", "e2", "e3"), (
    Relation({"e0": 1, "e2": 1}, {"e1": 2}),
    Relation({"e1": 1, "e3": 1}, {"e2": 2}),
    Relation({"e0": 1, "e3": 1}, {"e1": 1, "e2": 1})))

M = torify(P)
print("torification: rank", M.rank, "Hilbert basis", M.hilbert)

# e1 and e2 appear on both sides, so each gets a copy
S, B = sanitize(P, copy_names={"e1": "f1", "e2": "f2"})
print("\nsanitized:", S)
print("left:", B.left, " right:", B.right)

rep = construct_type(S, B)
print("\n" + rep.trace())
print("\nwitness:", {g: str(x) for g, x in rep.witness.values.items()})
print("echo equals input:", rep.presentation_echo == S)
print("same monoid:", toric_equal(rep.monoid, M))

g = affine_glue(rep)
print("\nglued to R^5: genus", g.graph_genus(), "same monoid:", toric_equal(tropical_monoid(g), M))
