"""The classical two-residue Toeplitz sequence over Z.

Generates a window, shows the filling steps, the convergence diagnostic for
the period ratios, and the depth-2 fiber census over the odometer.
"""

from toeplitz_lab import bundled_deck
from toeplitz_lab.williams import (
    convergence_partial_sums,
    coords_of_int,
    fiber_patches,
    generate,
    max_safe_fiber_radius,
)

deck = bundled_deck("williams-m2")
wp = deck.williams
print(f"alphabet {{0..{wp.m - 1}}}, periods {wp.periods}")

eta = generate(wp, 80)
line = "".join("." if eta.symbol(n) is None else str(eta.symbol(n))
               for n in range(0, 73))
print(f"\neta on [0, 72]:   {line}")
lvls = "".join(str(eta.level(n)) for n in range(0, 73))
print(f"filling steps:    {lvls}   (0 marks still-empty cells)")

print("\npartial sums of the period-ratio series:",
      [str(s) for s in convergence_partial_sums(wp)])

radius = max_safe_fiber_radius(wp, 2)
big = generate(wp, wp.periods[-1] + radius + 10)
hist = {}
witness = None
for g2 in range(wp.periods[1]):
    patches, _ = fiber_patches(wp, big, coords_of_int(wp, g2, 2), radius)
    hist[len(patches)] = hist.get(len(patches), 0) + 1
    if len(patches) == 2 and witness is None:
        witness = (g2, [p.aperiodic_symbol for p in patches])

print(f"\ndepth-2 fiber census at window radius {radius}: {hist}")
print(f"the factor map is at most {wp.m}-to-1 at this depth; "
      f"coords {witness[0]} realizes both constants {witness[1]}")
