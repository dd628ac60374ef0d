"""Exact interval sets: normalization, set algebra, and unit-window measure.

Run with:  python3 demos/interval_algebra.py
"""

from fractions import Fraction as F

from largesets import IntervalSet, PeriodicSet, Window, materialize_periodic, min_unit_window_measure
from largesets.intervals import boolean_combine, normalize

# Overlapping and touching pieces collapse into a canonical half-open form.
a = normalize([(0, F(1, 2)), (F(1, 4), 1), (1, F(3, 2)), (3, 3)])
print("normalized:", a.to_json(), "measure", a.measure())

b = IntervalSet.of((F(1, 3), 2))
for mode in ("union", "intersect", "difference"):
    r = boolean_combine(a, b, mode)
    print(f"{mode:>10}: {r.to_json()}  measure {r.measure()}")

# A periodic strip of width 1/3 repeated every 5/4, cut to a window.
strip = PeriodicSet.strip(F(5, 4), F(1, 3))
w = Window(0, 6)
s = materialize_periodic(strip, w)
print("strip pieces in [0, 6):", len(s.parts), "total", s.measure())

# The worst unit window is found exactly from breakpoints, no sampling.
value, at = min_unit_window_measure(s, w)
print(f"min over unit windows: {value} (window starting at {at})")
