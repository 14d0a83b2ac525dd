"""Every two-dimensional cone comes from a triangle to R_+.

For cone((1,0),(k,m)) take v3 = (1,1), solve m1 v1 + m2 v2 = m3 v3 and
use the slopes on a triangle.  Prints the slopes and the Hilbert basis
size for all cones with m <= 8.
"""

from math import gcd

from tropmon import lattice_monoid, toric_equal
from tropmon.constructions import realize_rank2

print(" k  m   slopes      |H|  ok")
for m in range(1, 9):
    for k in range(1, m + 1):
        if gcd(k, m) != 1:
            continue
        rep = realize_rank2(k, m)
        slopes = tuple(e.slope[0] for e in rep.type.edges)
        ok = toric_equal(rep.monoid, lattice_monoid([(1, 0), (k, m)]))
        print(f"{k:2} {m:2}   {str(slopes):10}  {len(rep.monoid.hilbert):3}  {ok}")
