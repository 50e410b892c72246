"""Exact invariant-measure computations on the dihedral deck.

Everything is rational: symbol frequencies of the periodic approximations,
the density product formula, the transition matrices between cell-class
vectors, and the masses of the dominant classes.
"""

from toeplitz_lab import bundled_deck, construction
from toeplitz_lab import measures

cons = construction(bundled_deck("dihedral-m2"))

print("symbol frequencies of the level-n periodization:")
for n in (1, 2, 3):
    freqs = {s: str(v) for s, v in measures.mu_freq_counted(cons, n).items()}
    print(f"  n={n}: {freqs}")
print("marker mass is level-independent:",
      measures.marker_mass_closed(cons))

print("\ncaptured density d_n, counted vs the product formula:")
for n in (0, 1, 2, 3):
    c = measures.density_product_check(cons, n)
    print(f"  d_{c.level} = {c.counted} = {c.closed}  equal={c.equal}")
d3 = measures.periodic_density_closed(cons, 3)
print(f"  d_3 < 1 - d_3: {d3} < {1 - d3}")

print("\ntransition matrices and their identities at window level 4:")
for n in (1, 2):
    print(f"  A_{n} = {measures.transition_matrix(cons, n)}, "
          f"A_{n} mu^({n + 1}) = mu^({n}): {measures.verify_transition(cons, n, 4)}")
print(f"  A_0 = {measures.projection_matrix(cons)}, "
      f"p(mu) = A_0 mu^(1): {measures.verify_projection(cons, 4)}")

print("\nsimplex vertices (depth-4 approximants of the extreme measures):")
for v in measures.simplex_vertices(cons, 4):
    print("  ", tuple(str(x) for x in v))

print("\ndominant class masses mu_{i+2s-1}(class of symbol i at level i+1):")
for i in (1, 2):
    for s in (2, 3):
        mass, bound = measures.dominant_class_mass(cons, i, 1, s)
        print(f"  i={i} s={s}: {mass}  (lower bound {bound})")
