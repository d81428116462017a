"""Many non-equivalent lattice polygons with one common area.

Removes subsets Z of the positive hull vertices of the quarter disc, then
trims a corner so every member has the same area. Counts equivalence
classes with and without the axis markers that break the swap symmetry.
Run: python3 demos/03_equal_volume_family.py   (about a minute)
"""

from latticeforge.arnold import base_family, census, find_feasible_radius

r = find_feasible_radius(2, 100)
plain = base_family(2, r)
print(f"r = {r}: |X| = {len(plain.X)}, rho = {plain.rho}, "
      f"target normalized area {plain.v_target}, largest trim {plain.m_max}")

sample = census(plain, sample=2000, seed=1)
print(f"unmarked sample: {sample.distinct}/{sample.generated} classes, "
      f"largest class {sample.max_class}")

marked = census(base_family(2, r, markers=True), sample=2000, seed=1)
print(f"marked sample:   {marked.distinct}/{marked.generated} classes")
print(f"implied exponent of log(#family) in V: {plain.implied_exponent():.3f}")
