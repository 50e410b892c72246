"""Inductive Toeplitz arrays over G = Z^r semidirect F.

The array eta assigns, level by level, the cyclic symbol alpha_l to the fresh
cells of level l - 1 translated by Gamma_l, and in the virtually variant the
marker symbol (encoded 0) to Gamma_1-translates of the nontrivial finite-part
representatives.  Everything here is window-exact: values come from the level
stratification of a box, never from extrapolated moduli.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lattice import (
    DepthExhausted,
    DomainChain,
    Elt,
    GroupSpec,
    SpecError,
    SubgroupChain,
    Vec,
    decompose_right,
    vec_add,
)

VARIANT_NORMAL = "normal"
VARIANT_VIRTUALLY = "virtually"

BETA = 0  # marker symbol of the virtually variant; never used by "normal"


class ConstructionError(RuntimeError):
    """An internal invariant of the inductive construction failed."""


@dataclass(frozen=True)
class ConstructionParams:
    group: GroupSpec
    chain: SubgroupChain
    domains: DomainChain
    m: int
    variant: str = VARIANT_NORMAL

    def validate(self) -> None:
        self.group.validate()
        self.chain.validate(self.group.rank)
        self.domains.validate()
        if self.m < 1:
            raise SpecError("need at least one plain symbol")
        if self.variant not in (VARIANT_NORMAL, VARIANT_VIRTUALLY):
            raise SpecError(f"unknown variant {self.variant!r}")
        if self.variant == VARIANT_NORMAL and self.group.finite_order != 1:
            raise SpecError("the normal variant is only supported for trivial F")


class Construction:
    """Level stratification and point evaluation of the Toeplitz array."""

    def __init__(self, params: ConstructionParams):
        params.validate()
        self.params = params
        self.group = params.group
        self.chain = params.chain
        self.domains = params.domains
        self.m = params.m
        self.variant = params.variant

    @property
    def depth(self) -> int:
        return self.chain.depth

    @property
    def alphabet(self) -> tuple[int, ...]:
        syms = tuple(range(1, self.m + 1))
        if self.variant == VARIANT_VIRTUALLY and self.group.finite_order > 1:
            return (BETA,) + syms
        return syms

    def alpha(self, level: int) -> int:
        """Cyclic symbol schedule: level l carries ((l-1) mod m) + 1."""
        return (level - 1) % self.m + 1

    def symbol_from_level(self, level: int, fpart: int) -> int:
        if level == 1 and fpart != 0:
            return BETA
        return self.alpha(level)

    # -- fresh cells ("not yet periodically filled" part of each box) --------

    @lru_cache(maxsize=None)
    def fresh_bool(self, n: int) -> np.ndarray:
        """Boolean mask of the level-n fresh cells over the D_n box."""
        return np.asarray(self.level_array(n) == n + 1)

    @lru_cache(maxsize=None)
    def fresh_cells(self, n: int) -> frozenset[Vec]:
        """Fresh cells by the subtraction definition (box minus filled strata)."""
        if n == 0:
            return frozenset({(0,) * self.group.rank})
        coords = self.domains.box_coords(n)
        mask = self.fresh_bool(n)
        return frozenset(map(tuple, coords[mask].tolist()))

    def fresh_cells_recursion(self, n: int) -> frozenset[Vec]:
        """Fresh cells rebuilt from translated copies of the previous level."""
        if n == 0:
            return frozenset({(0,) * self.group.rank})
        if n == 1:
            box = set(self.domains.enumerate_box(1))
            box.discard((0,) * self.group.rank)
            return frozenset(box)
        prev = self.fresh_cells(n - 1)
        out: set[Vec] = set()
        for gamma in self.domains.enumerate_box(n):
            if not self.chain.member_vec(gamma, n - 1):
                continue
            if all(x == 0 for x in gamma):
                continue
            out.update(vec_add(gamma, cell) for cell in prev)
        return frozenset(out)

    def fresh_cells_checked(self, n: int) -> frozenset[Vec]:
        """Subtraction and recursion routes, which must agree cell for cell."""
        sub = self.fresh_cells(n)
        rec = self.fresh_cells_recursion(n)
        if sub != rec:
            raise ConstructionError(
                f"fresh-cell routes disagree at level {n}: "
                f"{len(sub)} vs {len(rec)} cells")
        return sub

    # -- level stratification -------------------------------------------------

    @lru_cache(maxsize=None)
    def level_array(self, N: int) -> np.ndarray:
        """Stratum level of every cell of the D_N box (values 1 .. N+1).

        Level l <= N marks the Gamma_l-translates of the level-(l-1) fresh
        cells; the remaining cells are the level-N fresh cells and will be
        filled at step N+1.
        """
        if not 1 <= N <= self.depth:
            raise DepthExhausted(f"level array needs a configured level, got {N}")
        dom = self.domains
        coords = dom.box_coords(N)
        lvl = np.zeros(len(coords), dtype=np.int16)
        r1 = dom.rep_arr(coords, 1)
        lvl[np.all(r1 == 0, axis=1)] = 1
        for l in range(2, N + 1):
            rl = dom.rep_arr(coords, l)
            inside = dom.in_box_arr(rl, l - 1)
            hit = np.zeros(len(coords), dtype=bool)
            if inside.any():
                flat = dom.flat_arr(rl[inside], l - 1)
                hit[inside] = self.fresh_bool(l - 1)[flat]
            lvl[(lvl == 0) & hit] = l
        lvl[lvl == 0] = N + 1
        return lvl

    def stratum(self, v: Vec) -> int:
        """Stratum level of a single lattice point, or DepthExhausted."""
        dom = self.domains
        zero = (0,) * self.group.rank
        for l in range(1, self.depth + 1):
            rep = dom.rep(v, l)
            if l == 1:
                if rep == zero:
                    return 1
            elif rep in self.fresh_cells(l - 1):
                return l
        if dom.in_box(v, self.depth):
            return self.depth + 1
        raise DepthExhausted(
            f"{v} is not covered by the configured chain prefix (depth {self.depth})")

    def value(self, g: Elt) -> tuple[int, int]:
        """(symbol, level) of the array at g."""
        v, f = g
        lvl = self.stratum(v)
        return self.symbol_from_level(lvl, f), lvl

    def periodized_value(self, n: int, g: Elt) -> int:
        """Value of the level-n periodization: look g up through its coset rep."""
        _, d, f = decompose_right(self.group, self.domains, g, n)
        lvl = self.stratum(d)
        return self.symbol_from_level(lvl, f)

    def translate_constant(self, i: int, gamma: Elt) -> tuple[bool, object]:
        """Whether eta is constant on gamma * fresh(i) * R, and the value.

        On failure returns (False, (witness_a, witness_b)).
        """
        if not self.chain.member(gamma, i):
            raise SpecError("translate must come from the level-i subgroup")
        gv = gamma[0]
        seen: dict[int, Elt] = {}
        for cell in sorted(self.fresh_cells(i)):
            for f in range(self.group.finite_order):
                g = (vec_add(gv, cell), f)
                sym, _ = self.value(g)
                seen[sym] = g
                if len(seen) > 1:
                    a, b = sorted(seen.values())[:2]
                    return False, (a, b)
        return True, next(iter(seen))

    # -- windows --------------------------------------------------------------

    def window(self, N: int) -> "EtaWindow":
        return EtaWindow(self, N, self.level_array(N))

    def stated_period_union(self, n: int, N: int) -> set[Elt]:
        """Union of the levels 2..n strata inside the level-N window.

        This is the union the period-set lemma states verbatim; the computed
        period set also contains the level-1 strata.  Callers compare the two
        and report the discrepancy rather than patching it silently.
        """
        win = self.window(N)
        out: set[Elt] = set()
        for g, sym, lvl in win.items():
            if 2 <= lvl <= n:
                out.add(g)
        return out


@dataclass(frozen=True, eq=False)
class EtaWindow:
    """The array restricted to D_N R, backed by the level stratification."""

    cons: Construction
    N: int
    levels: np.ndarray = field(repr=False)

    @property
    def spec(self) -> GroupSpec:
        return self.cons.group

    @lru_cache(maxsize=None)
    def symbol_array(self, fpart: int) -> np.ndarray:
        lvl = self.levels
        cons = self.cons
        sym = np.empty(len(lvl), dtype=np.int16)
        for l in np.unique(lvl):
            sym[lvl == l] = cons.symbol_from_level(int(l), fpart)
        return sym

    def level_of(self, g: Elt) -> int | None:
        v, _ = g
        dom = self.cons.domains
        p = dom.chain.level(self.N)
        q1 = dom.q1[self.N - 1]
        idx = 0
        for x, a, mod in zip(v, q1, p):  # plain-int hot path for point queries
            s = x + a
            if s < 0 or s >= mod:
                return None
            idx = idx * mod + s
        return int(self.levels[idx])

    def get(self, g: Elt) -> int | None:
        lvl = self.level_of(g)
        if lvl is None:
            return None
        return self.cons.symbol_from_level(lvl, g[1])

    def items(self):
        """(element, symbol, level) in canonical order."""
        dom = self.cons.domains
        coords = dom.box_coords(self.N)
        for f in range(self.spec.finite_order):
            syms = self.symbol_array(f)
            for row, s, l in zip(coords.tolist(), syms.tolist(), self.levels.tolist()):
                yield (tuple(row), f), int(s), int(l)

    def positions(self) -> list[Elt]:
        dom = self.cons.domains
        coords = dom.box_coords(self.N)
        return [(tuple(row), f)
                for f in range(self.spec.finite_order)
                for row in coords.tolist()]

    def symbol_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for f in range(self.spec.finite_order):
            vals, counts = np.unique(self.symbol_array(f), return_counts=True)
            for v, c in zip(vals.tolist(), counts.tolist()):
                out[int(v)] = out.get(int(v), 0) + int(c)
        return out
