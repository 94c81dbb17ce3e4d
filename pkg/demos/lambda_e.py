"""Walk through the period-six exceptional isentrope.

Run with ``python3 demos/lambda_e.py``.  Starts from the period-two
itinerary of c1, builds the compatible extension with two inserted laps,
extracts the common factor of its bifurcation polynomials and certifies the
b-range on which c1 follows the extension.
"""

from kneadforge import BimodalMap, Itinerary, isolate_real_roots, itinerary_of, realization_interval
from kneadforge.bifurcation import derive_bifurcation_eq
from kneadforge.exceptional import classify_turning_point, extract_factor

base = Itinerary.parse("c1 J2 c1")
ext = Itinerary.parse("c1 J2 J1 J2 J0 J2 c1")

print("base equation:     ", derive_bifurcation_eq(base))
print("extended equation: ", derive_bifurcation_eq(ext))

F = extract_factor(base, ext)
print("common factor:     ", F)

(lam,) = isolate_real_roots(F, (1, 2))
print(f"root in (1, 2):      {float(lam):.6f}")

ri = realization_interval(ext, lam)
print("c1 follows it for b in", ri)

# every b in that range sits on the exceptional isentrope
for b in ri.interior_samples(3):
    m = BimodalMap(lam, b)
    cl = classify_turning_point(m, 1, 20)
    print(f"  b = {float(b):+.4f}: c1 is {cl}, c2 runs {itinerary_of(m, 'c2', 6, stop_at_turning=True)}")
