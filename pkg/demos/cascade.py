"""Search cascade extensions of a periodic itinerary for exceptional ones.

Run with ``python3 demos/cascade.py [max_blocks]``.  Prints one line per
candidate: the inserted laps, the common factor and what became of its roots.
"""

import sys

from kneadforge import Itinerary
from kneadforge.exceptional import cascade_search

blocks = int(sys.argv[1]) if len(sys.argv) > 1 else 3

for base in (Itinerary.parse("c1 J2 c1"), Itinerary.parse("c1 J2 J0 J1 c1")):
    print(f"base {base}")
    for rec in cascade_search(base, blocks, (1, 2)):
        roots = ", ".join(f"{float(r):.6f}" for r in rec.roots_in_window) or "none"
        mark = "realized" if rec.realized else "-"
        print(f"  {str(rec.extended):60s} F = {str(rec.factor):24s} roots: {roots:22s} {mark}")
        for lam, ri in rec.realizations:
            print(f"      lambda = {float(lam):.6f}, b in {ri}")
    print()

# above slope 2 nothing is realized
empty = cascade_search("c1 J2 c1", blocks, (2, 3))
print(f"window (2, 3): {sum(r.realized for r in empty)} realized of {len(empty)} candidates")
