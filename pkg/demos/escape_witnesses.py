"""Search for n with x a_n + t outside an avoiding set.

A witness is the least such n.  When the orbit is eventually periodic the
search can also certify that no witness exists at any depth.

Run with:  python3 demos/escape_witnesses.py
"""

from fractions import Fraction as F

from largesets import (
    approximant,
    build_lemma_avoider,
    build_power_strip,
    find_escape_witness,
    grid_escape_scan,
    identity,
    powers_of,
)

strip = build_power_strip(2, F(1, 4))
for x, t in ((F(1, 3), 0), (F(3, 11), F(1, 5)), (F(1, 2), F(1, 8))):
    w = find_escape_witness(strip, powers_of(2), x, t, 100)
    print(f"x={x}, t={t}: {w.status}, n={w.witness_index}")

# A whole grid of dilations and translations against the sequence n.
a = build_lemma_avoider(F(1, 2), approximant("golden", F(1, 10**12)))
xs = [F(k, 50) for k in range(1, 101)]
ts = [F(j, 16) for j in range(16)]
res = grid_escape_scan(a, identity(), xs, ts, 10**4)
print("grid scan:", res.summary())
