"""Small bounded search and its JSON catalog.

Enumerates monogenic expansive types to R_+ with three vertices, keeps one
type per tropical monoid and writes the run to catalog.json (a second run
with the same bounds is not appended again).
"""

import json
import sys

from tropmon import ToricMonoid, free_factor_split
from tropmon.reductions import search_types

out = sys.argv[1] if len(sys.argv) > 1 else "catalog.json"
run = search_types(3, 3, 1, out=out)
print(json.dumps(run["summary"], indent=2))
for rec in run["records"]:
    M = ToricMonoid.from_dict(rec["monoid"])
    slopes = [e["slope"][0] for e in rec["type"]["edges"]]
    _, free = free_factor_split(M)
    print(f"slopes {slopes}: rank {M.rank}, |H| = {len(M.hilbert)}, N-factors {free}")
print("catalog written to", out)
