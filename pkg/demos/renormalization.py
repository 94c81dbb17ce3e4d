"""Renormalization and the non-rigid family at the exceptional slope.

Run with ``python3 demos/renormalization.py [out.svg]``.  Shows the two
period-two renormalization intervals at b = 0, scans b across the overlap of
the two realization ranges, and writes cobweb pictures for b = 0 and b = 0.05.
"""

import sys
from fractions import Fraction

from kneadforge import BimodalMap, IntPoly, isolate_real_roots
from kneadforge.exceptional import nonrigidity_scan, renormalization_check
from kneadforge.plot import cobweb_svg

(lam,) = isolate_real_roots(IntPoly((-1, 0, -1, 0, 1)), (1, 2))
m = BimodalMap(lam, 0)

for center in (1, 2):
    r = renormalization_check(m, center, 2)
    lo, hi = (float(x) for x in r.interval)
    print(f"R{center} = [{lo:.6f}, {hi:.6f}]  q^2(R) inside R: {r.holds}")

grid = [Fraction(k, 100) for k in range(-11, 12)]
scan = nonrigidity_scan(lam, grid)
print("itineraries over b in [-0.11, 0.11]:")
for i in (1, 2):
    print(f"  c{i}: {[str(x) for x in scan.distinct(i)]}")

stem = sys.argv[1].removesuffix(".svg") if len(sys.argv) > 1 else "lambda_e"
for b in (Fraction(0), Fraction(1, 20)):
    path = f"{stem}_b{float(b):.2f}.svg"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(cobweb_svg(BimodalMap(lam, b), ["c1", "c2"], 6, f"b = {float(b):.2f}"))
    print("wrote", path)
