"""Build each family of large avoiding sets and check how large they are.

Largeness here means: every unit window [a, a+1] inside the checked range
keeps at least the target measure.

Run with:  python3 demos/large_sets.py
"""

from fractions import Fraction as F

from largesets import (
    Window,
    approximant,
    build_enumeration_avoider,
    build_integer_power,
    build_lemma_avoider,
    build_power_strip,
    positive_rationals,
    squares,
    verify_largeness,
)


def show(label, a, w):
    rep = verify_largeness(a, w)
    flag = "ok" if rep.passed else "FAIL"
    print(f"{label:<28} min {float(rep.min_measure):.4f}  target {rep.target}  [{flag}]")


golden = approximant("golden", F(1, 10**12))
for eps in (F(1), F(1, 2), F(1, 10)):
    show(f"two strips, eps={eps}", build_lemma_avoider(eps, golden), Window(-50, 50))

show("power strip b=2", build_power_strip(2, F(1, 4)), Window(0, 40))
show("power strip b=3/2", build_power_strip(F(3, 2), F(1, 12)), Window(0, 40))

ip = build_integer_power(2, F(1, 4), N=8)
show("integer power b=2", ip, Window(-256, 256))
# membership on a number with about a million bits is still instant
huge = 2 ** (2**20) + F(1, 3)
print("  contains 2^(2^20) + 1/3:", ip.contains(huge))

# Enumeration avoider: stripes for every (dilation, shift, bin) up to depth 50.
en = build_enumeration_avoider(squares(), positive_rationals(10), F(1, 2), 50)
lo, hi = en.region
print(f"enumeration: {len(en.stripes())} stripes, valid below {float(hi):.3g}")
show("enumeration depth 50", en, Window(-10, 10**6))
