"""Exact invariant-measure computations for the group construction.

The level-n periodization has a uniform measure on its finite orbit; every
frequency here is an exact rational obtained by counting cells of a box
window.  The cell classes at level n are indexed by the subgroup elements
gamma inside the deeper box: the class symbol is the constant the array takes
on gamma * fresh(n) * R, and that constancy is verified, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import Elt, SpecError, int_det
from .toeplitz import BETA, Construction, ConstructionError, VARIANT_VIRTUALLY

MeasureVector = dict[int, Fraction]


def _level_counts(cons: Construction, n: int) -> np.ndarray:
    lvl = cons.level_array(n)
    return np.bincount(lvl, minlength=n + 2)


def fresh_count(cons: Construction, n: int) -> int:
    """|fresh(n)| by the closed recursion; the box mask must agree."""
    if n == 0:
        return 1
    count = cons.domains.size(1) - 1
    for l in range(2, n + 1):
        count *= cons.domains.size(l) // cons.domains.size(l - 1) - 1
    return count


def has_marker(cons: Construction) -> bool:
    return cons.variant == VARIANT_VIRTUALLY and cons.group.finite_order > 1


def mu_freq_counted(cons: Construction, n: int) -> MeasureVector:
    """Symbol frequencies of the level-n periodization by direct counting."""
    counts = _level_counts(cons, n)
    F = cons.group.finite_order
    total = cons.domains.size(n) * F
    out: dict[int, int] = {sym: 0 for sym in cons.alphabet}
    out[cons.alpha(1)] += int(counts[1])
    if F > 1:
        out[BETA] += int(counts[1]) * (F - 1)
    for l in range(2, n + 2):
        out[cons.alpha(l)] += int(counts[l]) * F
    return {sym: Fraction(c, total) for sym, c in sorted(out.items())}


def mu_freq_closed(cons: Construction, n: int) -> MeasureVector:
    """Same frequencies from the exact stratum cardinalities."""
    F = cons.group.finite_order
    sizes = [cons.domains.size(i) for i in range(1, n + 1)]
    total = sizes[n - 1] * F
    out: dict[int, int] = {sym: 0 for sym in cons.alphabet}
    lvl1 = sizes[n - 1] // sizes[0]
    out[cons.alpha(1)] += lvl1
    if F > 1:
        out[BETA] += lvl1 * (F - 1)
    for l in range(2, n + 1):
        out[cons.alpha(l)] += fresh_count(cons, l - 1) * (sizes[n - 1] // sizes[l - 1]) * F
    out[cons.alpha(n + 1)] += fresh_count(cons, n) * F
    return {sym: Fraction(c, total) for sym, c in sorted(out.items())}


def marker_mass_closed(cons: Construction) -> Fraction:
    """(1/|D_1|)(1 - 1/|R|), the level-independent marker frequency."""
    F = cons.group.finite_order
    return Fraction(1, cons.domains.size(1)) * (1 - Fraction(1, F))


def periodic_density_counted(cons: Construction, n: int) -> Fraction:
    """d_n: share of the level-n window already captured by level <= n."""
    counts = _level_counts(cons, n)
    captured = int(counts[1: n + 1].sum())
    return Fraction(captured, cons.domains.size(n))


def periodic_density_closed(cons: Construction, n: int) -> Fraction:
    """Product formula: 1 - d_{n+1} = (1 - 1/|D_1|) prod (1 - |D_j|/|D_{j+1}|)."""
    sizes = [cons.domains.size(i) for i in range(1, n + 1)]
    out = 1 - Fraction(1, sizes[0])
    for j in range(1, n):
        out *= 1 - Fraction(sizes[j - 1], sizes[j])
    return 1 - out


@dataclass(frozen=True)
class DensityCheck:
    level: int
    counted: Fraction
    closed: Fraction

    @property
    def equal(self) -> bool:
        return self.counted == self.closed


def density_product_check(cons: Construction, n: int) -> DensityCheck:
    """Counted d_{n+1} against the closed form, exact."""
    return DensityCheck(n + 1, periodic_density_counted(cons, n + 1),
                        periodic_density_closed(cons, n + 1))


# -- cell classes -------------------------------------------------------------


def cell_symbols(cons: Construction, n: int, N: int) -> list[tuple[tuple[int, ...], int]]:
    """(gamma, class symbol) for every gamma in Gamma_n inside the D_N box.

    The class symbol is the constant of the array on gamma * fresh(n) * R;
    non-constancy aborts, it would break the partition the measures rely on.
    """
    if N <= n:
        raise SpecError("need a deeper window than the class level")
    dom = cons.domains
    coords = dom.box_coords(N)
    member = np.all(coords % np.array(cons.chain.level(n), dtype=np.int64) == 0, axis=1)
    gammas = coords[member]
    j_cells = np.array(sorted(cons.fresh_cells(n)), dtype=np.int64)
    pos = gammas[:, None, :] + j_cells[None, :, :]
    lvl = cons.level_array(N)[dom.flat_arr(pos.reshape(-1, cons.group.rank), N)]
    lvl = lvl.reshape(len(gammas), len(j_cells))
    if lvl.size and int(lvl.min()) <= 1:
        raise ConstructionError("fresh-cell translate touched the marker stratum")
    first = lvl[:, 0]
    if not np.all(lvl == first[:, None]):
        bad = int(np.nonzero(~np.all(lvl == first[:, None], axis=1))[0][0])
        raise ConstructionError(
            f"cell of gamma={tuple(gammas[bad])} is not constant on the fresh set")
    out = [(tuple(g), cons.alpha(int(l))) for g, l in zip(gammas.tolist(), first.tolist())]
    out.sort()
    return out


def mu_cell_vector(cons: Construction, n: int, N: int) -> tuple[Fraction, ...]:
    """(mu_N of the level-n class with symbol i)_{i=1..m}, exact."""
    cells = cell_symbols(cons, n, N)
    F = cons.group.finite_order
    total = cons.domains.size(N) * F
    counts = [0] * (cons.m + 1)
    for _, sym in cells:
        counts[sym] += 1
    return tuple(Fraction(counts[i], total) for i in range(1, cons.m + 1))


def transition_matrix(cons: Construction, n: int) -> tuple[tuple[int, ...], ...]:
    """The m x m level transition matrix between cell-class vectors."""
    q = cons.domains.size(n + 1) // cons.domains.size(n)
    a = cons.alpha(n + 1)
    m = cons.m
    rows = []
    for i in range(1, m + 1):
        row = []
        for j in range(1, m + 1):
            if i == j:
                row.append(q if i == a else q - 1)
            else:
                row.append(1 if i == a else 0)
        rows.append(tuple(row))
    return tuple(rows)


def verify_transition(cons: Construction, n: int, N: int) -> bool:
    """A_n applied to the level-(n+1) cell vector must give the level-n one."""
    if not N > n + 1:
        raise SpecError("window must be deeper than n + 1")
    A = transition_matrix(cons, n)
    mu_lo = mu_cell_vector(cons, n, N)
    mu_hi = mu_cell_vector(cons, n + 1, N)
    lhs = tuple(sum(Fraction(A[i][j]) * mu_hi[j] for j in range(cons.m))
                for i in range(cons.m))
    return lhs == mu_lo


def projection_matrix(cons: Construction) -> tuple[tuple[int, ...], ...]:
    """The (m+1) x m matrix sending the level-1 cell vector to the symbol
    frequency vector (plain symbols first, marker last)."""
    m = cons.m
    F = cons.group.finite_order
    jr = fresh_count(cons, 1) * F
    rows = []
    for i in range(1, m + 2):
        row = []
        for j in range(1, m + 1):
            if i == m + 1:
                row.append(F - 1)
            elif i == j == 1:
                row.append(1 + jr)
            elif i == j:
                row.append(jr)
            elif i == 1:
                row.append(1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return tuple(rows)


def verify_projection(cons: Construction, N: int) -> bool:
    """Counted symbol frequencies must equal the projection of the level-1
    cell vector."""
    A0 = projection_matrix(cons)
    mu1 = mu_cell_vector(cons, 1, N)
    freqs = mu_freq_counted(cons, N)
    m = cons.m
    lhs = [sum(Fraction(A0[i][j]) * mu1[j] for j in range(m)) for i in range(m + 1)]
    rhs = [freqs.get(sym, Fraction(0)) for sym in range(1, m + 1)]
    rhs.append(freqs.get(BETA, Fraction(0)))
    return lhs == rhs


def transition_chain_check(cons: Construction, n: int, N: int) -> bool:
    """Rebuild the level-1 vector from level n through A_1 ... A_{n-1}."""
    vec = list(mu_cell_vector(cons, n, N))
    for l in range(n - 1, 0, -1):
        A = transition_matrix(cons, l)
        vec = [sum(Fraction(A[i][j]) * vec[j] for j in range(cons.m))
               for i in range(cons.m)]
    return tuple(vec) == mu_cell_vector(cons, 1, N)


def transition_det(cons: Construction, n: int) -> int:
    return int_det(transition_matrix(cons, n))


# -- simplex and limit-measure approximants -----------------------------------


def stratum_frequency(cons: Construction, n: int, alpha: int) -> Fraction:
    """Share of the level-n window captured by level <= n with symbol alpha."""
    freqs = mu_freq_closed(cons, n)
    d = freqs.get(alpha, Fraction(0))
    if alpha == cons.alpha(n + 1):
        d -= Fraction(fresh_count(cons, n), cons.domains.size(n))
    return d


def simplex_vertices(cons: Construction, N: int) -> list[tuple[Fraction, ...]]:
    """Depth-N approximants of the extreme frequency vectors.

    Vertex i lists the captured-stratum frequencies with the still-free mass
    1 - d_N added to coordinate i; the marker coordinate sits last.
    """
    m = cons.m
    t = [stratum_frequency(cons, N, a) for a in range(1, m + 1)]
    t_beta = marker_mass_closed(cons) if has_marker(cons) else Fraction(0)
    d = periodic_density_closed(cons, N)
    free = 1 - d
    out = []
    for i in range(m):
        vec = list(t)
        vec[i] = vec[i] + free
        out.append(tuple(vec) + (t_beta,))
    return out


def estimate_limit_measures(cons: Construction, i: int,
                            s_list: list[int]) -> list[MeasureVector]:
    """Frequency vectors mu_{i+sm-1} approaching the i-th ergodic measure."""
    if not 1 <= i <= cons.m:
        raise SpecError("measure index out of range")
    out = []
    for s in s_list:
        n = i + s * cons.m - 1
        out.append(mu_freq_closed(cons, n))
    return out


def dominant_class_mass(cons: Construction, i: int, k: int, s: int) -> tuple[Fraction, Fraction]:
    """mu_{i+sm-1} of the union of level-(i+km-1) cells with symbol i.

    Returns (mass, lower bound 1/|D_{i+km-1} R|).
    """
    if s <= k:
        raise SpecError("the measure level must be deeper than the class level")
    m = cons.m
    l = i + k * m - 1
    n = i + s * m - 1
    cells = cell_symbols(cons, l, n)
    hits = sum(1 for _, sym in cells if sym == i)
    mass = Fraction(hits, len(cells))
    bound = Fraction(1, cons.domains.size(l) * cons.group.finite_order)
    return mass, bound


# -- window invariance and complexity diagnostics ------------------------------


def translated_frequency_gap(cons: Construction, N: int, g: Elt) -> tuple[Fraction, Fraction]:
    """Max per-symbol gap between frequencies over D_N R and over D_N R g,
    and the boundary bound |D_N R g symdiff D_N R| / |D_N R|."""
    spec = cons.group
    cells = [(v, f) for f in range(spec.finite_order)
             for v in cons.domains.enumerate_box(N)]
    moved = [spec.mul(x, g) for x in cells]
    total = len(cells)

    def freq(cell_list) -> dict[int, Fraction]:
        counts: dict[int, int] = {}
        for x in cell_list:
            sym, _ = cons.value(x)
            counts[sym] = counts.get(sym, 0) + 1
        return {s: Fraction(c, total) for s, c in counts.items()}

    fa, fb = freq(cells), freq(moved)
    syms = set(fa) | set(fb)
    gap = max((abs(fa.get(s, Fraction(0)) - fb.get(s, Fraction(0))) for s in syms),
              default=Fraction(0))
    sym_diff = len(set(moved) - set(cells)) + len(set(cells) - set(moved))
    return gap, Fraction(sym_diff, total)


def complexity_profile(symbols: np.ndarray, radii: list[int],
                       min_placements: int = 100) -> list[tuple[int, int, float]]:
    """(radius, distinct pattern count, log2(count) / window size) per radius."""
    out = []
    arr = np.asarray(symbols)
    for s in radii:
        width = 2 * s + 1
        placements = len(arr) - width + 1
        if placements < min_placements:
            raise SpecError(f"radius {s} leaves only {placements} placements")
        windows = np.lib.stride_tricks.sliding_window_view(arr, width)
        count = len(np.unique(windows, axis=0))
        out.append((s, int(count), math.log2(count) / width))
    return out
