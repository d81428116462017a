"""How close does the integer hull of a disc get to its boundary?

Fits log-log slopes for the closeness and the vertex count of I(rB^2) over
a range of radii, then certifies the closeness minimum with the lens check.
Run: python3 demos/02_hull_scaling.py
"""

from latticeforge import integer_hull
from latticeforge.hull_lab import closeness_scan, minkowski_violations, vertex_count_scan

radii = (64, 128, 256, 512, 1024, 2048)
for r in radii[:3]:
    rep = integer_hull("ball", 2, r)
    print(f"r = {r:5d}: f0 = {rep.f0:4d}, max closeness = {rep.max_closeness:.4f}")

close = closeness_scan(2, radii)
count = vertex_count_scan(2, radii)
print(f"\ncloseness slope {close.exponent:+.3f}  (expected -1/3)")
print(f"vertex-count slope {count.exponent:+.3f}  (expected 2/3)")
print(f"lens certificate holds at every radius: {close.notes['certified']}")

# a single certificate, unpacked
rep = integer_hull("ball", 2, 256)
print(f"\nlens violations at r = 256: {len(minkowski_violations(rep))}")
