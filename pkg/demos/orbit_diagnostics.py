"""Fractional-part statistics of x a_n and a rough dimension of the bad x.

Run with:  python3 demos/orbit_diagnostics.py
"""

from fractions import Fraction as F

from largesets import approximant, identity, powers_of, squares
from largesets.orbits import (
    Grid,
    box_dimension_estimate,
    exceptional_probe,
    fractional_orbit,
    max_gap,
    star_discrepancy,
)
from largesets.sequences import Block, banach_density_estimate

g = approximant("golden", F(1, 10**12)).value
for N in (100, 1000, 10**5):
    d = star_discrepancy(fractional_orbit(identity(), g, 0, N))
    print(f"golden Kronecker N={N:>6}: D* = {float(d):.2e}")

print("max gap of <2^n / 3>:", max_gap(fractional_orbit(powers_of(2), F(1, 3), 0, 50)))

# Grid points whose orbit leaves a gap above 2/5 are "exceptional".
grid = Grid.over(0, 1, F(1, 4096))
scales = [F(1, 2**k) for k in range(4, 9)]
for name, s in (("2^n", powers_of(2)), ("n^2", squares())):
    probe = exceptional_probe(s, F(2, 5), 2000, grid)
    est = box_dimension_estimate(probe, scales)
    print(f"{name}: {len(probe.hits)} exceptional grid points, slope {est.slope:.2f}")

blocks = Block()
print("block density at h=f(3):", banach_density_estimate(blocks, 3, (256, 256), 10).ratio)
print("2^n density, length 100:", banach_density_estimate(powers_of(2), 100, (0, 10**6), 60).ratio)
