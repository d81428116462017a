"""Gaps in the set of volumes attained inside a cube.

Polytopes here contain one full face of the cube. In the plane every value
in [r, r^2] is attained. In three dimensions the value set has holes just
above r^2. The exhaustive search at r = 3 also
turns up a hole at 20 that the known interval families do not predict.
Run: python3 demos/04_volume_gaps.py   (r = 6 takes a few seconds)
"""

from latticeforge.gaps import (deep_layer_bound, theorem_intervals, value_set_exhaustive,
                               value_set_layered, verify_gap_theorems)

for r in range(2, 6):
    rep = value_set_exhaustive(2, r)
    print(f"d=2 r={r}: gaps {rep.gaps}")

rep = value_set_exhaustive(3, 3)
print(f"\nd=3 r=3: {len(rep.achieved)} values, gaps {rep.gaps}")
print(f"  predicted intervals: {theorem_intervals(3)}")

r = 6
top = value_set_layered(3, r)
print(f"\nd=3 r={r}: layered search over {top.states} states")
# the layered search only climbs a few layers, so look just above r^2
print(f"  gaps in (r^2, 2r^2): {[g for g in top.gaps if r * r < g[0] and g[1] < 2 * r * r]}")
cert = verify_gap_theorems(r)
for iv in cert.intervals:
    print(f"  [{iv.lo}, {iv.hi}] {iv.status}")
print(f"  deep layer bound: {deep_layer_bound(3, r)}")
