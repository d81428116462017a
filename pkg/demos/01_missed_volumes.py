"""Which normalized volumes does a lattice polytope inside the cube [0, r]^d attain?

Walks through the greedy decomposition of a missed volume m and the
simplex peeling that turns it into an explicit polytope of volume r^d - m.
Run: python3 demos/01_missed_volumes.py
"""

from latticeforge import construct_missed, decompose, in_family, normalized_volume
from latticeforge.construction import threshold

d, r = 3, 80
print(f"Peeling reaches m <= (r - 2^d d!)^d = ({r} - {threshold(d)})^{d} = {(r - threshold(d)) ** d}.")

m = 12345
dec = decompose(d, m)
print(f"\nGreedy decomposition of m = {m} for d = {d}:")
print(f"  x = {dec.xs}, remainder m_d = {dec.remainder}")
print(f"  trace m_0, m_1, ... = {dec.trace}")

c = construct_missed(d, r, m)
poly = c.polytope
print(f"\nConstruction method: {c.method}")
print(f"  vertices: {poly.f0}")
print(f"  normalized volume {normalized_volume(poly)} = {r}^{d} - {m}: "
      f"{normalized_volume(poly) == r**d - m}")
print(f"  contained in [0, {r}]^{d} and full-dimensional: {in_family(poly, d, r)}")

if c.sequence is not None:
    print("\nPer-step volume removed by the peeling:")
    for delta in c.sequence.deltas:
        print(f"  step {delta.index}: {delta.claimed}")

# the planar case takes a different route: a single quadrilateral cut
poly2 = construct_missed(2, 12, 50).polytope
print(f"\nd = 2, r = 12, m = 50: vertices {poly2.vertices}, volume {normalized_volume(poly2)}")
