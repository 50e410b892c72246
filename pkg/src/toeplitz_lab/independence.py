"""Combinatorial independence certificates and sequence-entropy bounds.

A tuple of cylinders (A_1, ..., A_k) has independence set J when every
assignment s: J -> {1..k} is realized by one point: here points are orbit
translates sigma^{h^-1} eta, so the witness condition reads
eta(h g^-1 f) = pattern_{s(g)}(f) for every g in J and site f of A_{s(g)}.

The searcher walks candidates in canonical order with memoized prefix
feasibility; its step counter is the deterministic "search time" reported in
summaries.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from .lattice import Elt, GroupSpec, SpecError, search_key
from .toeplitz import EtaWindow
from .williams import ZPatch
from .pullback import HomSpec, section_element


@dataclass(frozen=True)
class Cylinder:
    """A clopen pattern constraint: shape -> symbol."""

    shape: tuple[Elt, ...]
    pattern: tuple[int, ...]

    def __post_init__(self):
        if not self.shape or len(self.shape) != len(self.pattern):
            raise SpecError("cylinder needs one symbol per shape site")

    @staticmethod
    def single_site(rank: int, symbol: int, site: Elt | None = None) -> "Cylinder":
        if site is None:
            site = ((0,) * rank, 0)
        return Cylinder((site,), (symbol,))


@dataclass(frozen=True)
class Certificate:
    cylinders: tuple[Cylinder, ...]
    independence_set: tuple[Elt, ...]
    witnesses: dict  # assignment tuple (1-based cylinder ids) -> witness Elt

    @property
    def size(self) -> int:
        return len(self.independence_set)

    def to_json(self) -> str:
        def elt(e: Elt):
            return [list(e[0]), e[1]]

        doc = {
            "cylinders": [
                {"shape": [elt(s) for s in c.shape], "pattern": list(c.pattern)}
                for c in self.cylinders
            ],
            "independence_set": [elt(g) for g in self.independence_set],
            "witnesses": [
                {"assignment": list(a), "witness": elt(h)}
                for a, h in sorted(self.witnesses.items())
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Certificate":
        doc = json.loads(text)

        def elt(x) -> Elt:
            return tuple(x[0]), x[1]

        cyls = tuple(
            Cylinder(tuple(elt(s) for s in c["shape"]), tuple(c["pattern"]))
            for c in doc["cylinders"])
        jset = tuple(elt(g) for g in doc["independence_set"])
        wits = {tuple(w["assignment"]): elt(w["witness"]) for w in doc["witnesses"]}
        return Certificate(cyls, jset, wits)


class CertificateWindowError(RuntimeError):
    """A witness needs evaluations outside the oracle window."""


# -- oracles -------------------------------------------------------------------


class ZOracle:
    """Occurrence oracle over a 1-d window of the classical construction."""

    def __init__(self, patch: ZPatch, margin: int):
        self.patch = patch
        self.symbols = patch.symbols.astype(np.int16)
        self.lo = -patch.N + margin
        self.hi = patch.N - margin
        if self.lo >= self.hi:
            raise SpecError("margin swallows the whole window")
        self.grid = [((n,), 0) for n in range(self.lo, self.hi + 1)]

    def describe(self) -> str:
        return f"z-window[{-self.patch.N},{self.patch.N}] margin-core[{self.lo},{self.hi}]"

    def value(self, g: Elt) -> int | None:
        return self.patch.symbol(g[0][0])

    def site_values(self, a: Elt) -> np.ndarray:
        shift = a[0][0]
        start = self.lo + shift + self.patch.N
        stop = start + (self.hi - self.lo + 1)
        if start < 0 or stop > len(self.symbols):
            raise CertificateWindowError(f"shift {shift} leaves the oracle window")
        return self.symbols[start:stop]


class GOracle:
    """Occurrence oracle over a box window of the group construction."""

    def __init__(self, win: EtaWindow, margin_levels: int = 1):
        self.win = win
        self.cons = win.cons
        spec, dom = win.spec, win.cons.domains
        inner = win.N - margin_levels
        if inner < 1:
            raise SpecError("oracle window too shallow for a safe core")
        self.inner = inner
        self.core = dom.box_coords(inner)
        self.grid = [(tuple(v), f)
                     for f in range(spec.finite_order)
                     for v in self.core.tolist()]
        self._syms = {f: win.symbol_array(f) for f in range(spec.finite_order)}
        self._core_per_f = len(self.core)

    def describe(self) -> str:
        return f"g-window D_{self.win.N} core D_{self.inner}"

    def value(self, g: Elt) -> int | None:
        return self.win.get(g)

    def site_values(self, a: Elt) -> np.ndarray:
        spec, dom = self.win.spec, self.cons.domains
        av = np.asarray(a[0], dtype=np.int64)
        out = np.empty(len(self.grid), dtype=np.int16)
        for hf in range(spec.finite_order):
            pos = self.core + np.asarray(spec.apply(hf, tuple(av.tolist())),
                                         dtype=np.int64)
            if not bool(dom.in_box_arr(pos, self.win.N).all()):
                raise CertificateWindowError("shifted core leaves the oracle window")
            fpart = spec.table[hf][a[1]]
            vals = self._syms[fpart][dom.flat_arr(pos, self.win.N)]
            out[hf * self._core_per_f:(hf + 1) * self._core_per_f] = vals
        return out


class PullbackOracle:
    """Oracle for phi* eta over G, served by a 1-d source window."""

    def __init__(self, hom: HomSpec, group: GroupSpec, source: ZPatch,
                 radius: int, margin: int):
        self.hom = hom
        self.group = group
        self.source = source
        axes = [range(-radius, radius + 1)] * group.rank
        self.grid = [(v, f) for f in range(group.finite_order)
                     for v in product(*axes)]
        self._phi = np.array([hom.phi(g) for g in self.grid], dtype=np.int64)
        self.margin = margin
        self.symbols = source.symbols.astype(np.int16)

    def describe(self) -> str:
        return f"pullback-oracle radius={self.margin} source[{-self.source.N},{self.source.N}]"

    def value(self, g: Elt) -> int | None:
        return self.source.symbol(self.hom.phi(g))

    def site_values(self, a: Elt) -> np.ndarray:
        shifts = np.empty(len(self.grid), dtype=np.int64)
        for f in range(self.group.finite_order):
            img = self.hom.phi(self.group.mul(((0,) * self.group.rank, f), a))
            sel = slice(f * (len(self.grid) // self.group.finite_order),
                        (f + 1) * (len(self.grid) // self.group.finite_order))
            shifts[sel] = img
        idx = self._phi + shifts + self.source.N
        if idx.min() < 0 or idx.max() >= len(self.symbols):
            raise CertificateWindowError("pullback sites leave the source window")
        return self.symbols[idx]


# -- certificate checking ------------------------------------------------------


def check_certificate(cert: Certificate, oracle, spec: GroupSpec) -> bool:
    """Re-verify every witness from scratch; window misses raise, mismatches
    return False."""
    k = len(cert.cylinders)
    J = cert.independence_set
    for assignment in product(range(1, k + 1), repeat=len(J)):
        h = cert.witnesses.get(tuple(assignment))
        if h is None:
            return False
        for g, j in zip(J, assignment):
            cyl = cert.cylinders[j - 1]
            ginv = spec.inv(g)
            for site, sym in zip(cyl.shape, cyl.pattern):
                val = oracle.value(spec.mul(spec.mul(h, ginv), site))
                if val is None:
                    raise CertificateWindowError(
                        f"witness {h} needs a value outside the window")
                if val != sym:
                    return False
    return True


# -- search --------------------------------------------------------------------


@dataclass
class SearchResult:
    status: str                     # "found" | "none" | "exhausted"
    certificate: Certificate | None
    steps: int
    note: str = ""


def _packed_masks(oracle, spec: GroupSpec, cylinders, g: Elt):
    """Packed witness masks (one per cylinder) for a single candidate."""
    ginv = spec.inv(g)
    out = []
    for cyl in cylinders:
        mask = None
        for site, sym in zip(cyl.shape, cyl.pattern):
            vals = oracle.site_values(spec.mul(ginv, site))
            m = vals == sym
            mask = m if mask is None else (mask & m)
        out.append(np.packbits(mask))
    return out


def _first_true_index(mask_bits: np.ndarray) -> int:
    byte = int(np.nonzero(mask_bits)[0][0])
    bits = int(mask_bits[byte])
    for off in range(8):
        if bits & (0x80 >> off):
            return byte * 8 + off
    raise AssertionError("empty mask")


def find_independence_set(cylinders, target_size: int, oracle,
                          candidates: list[Elt], spec: GroupSpec,
                          max_steps: int = 2_000_000,
                          deadline: float | None = None) -> SearchResult:
    """Backtracking search for an independence set of the target size.

    Candidates are tried in the given (canonical) order; "none" reports a
    window-complete failure, "exhausted" that a budget ended the search.
    """
    cylinders = tuple(cylinders)
    k = len(cylinders)
    cand = sorted(set(candidates), key=search_key)
    mask_memo: dict[Elt, list[np.ndarray]] = {}

    def masks_for(g: Elt) -> list[np.ndarray]:
        if g not in mask_memo:
            mask_memo[g] = _packed_masks(oracle, spec, cylinders, g)
        return mask_memo[g]

    # individually inadmissible cylinders can never produce witnesses
    root = np.packbits(np.ones(len(oracle.grid), dtype=bool))
    steps = 0
    out_of_time = False

    def dfs(start: int, chosen: list[Elt], table: dict[tuple, np.ndarray]):
        nonlocal steps, out_of_time
        if len(chosen) == target_size:
            return chosen, table
        for idx in range(start, len(cand)):
            steps += 1
            if steps > max_steps or (deadline is not None and time.monotonic() > deadline):
                out_of_time = True
                return None
            g = cand[idx]
            try:
                gm = masks_for(g)
            except CertificateWindowError:
                continue
            new_table = {}
            ok = True
            for assign, bits in table.items():
                for j in range(1, k + 1):
                    merged = bits & gm[j - 1]
                    if not merged.any():
                        ok = False
                        break
                    new_table[assign + (j,)] = merged
                if not ok:
                    break
            if not ok:
                continue
            hit = dfs(idx + 1, chosen + [g], new_table)
            if hit is not None or out_of_time:
                return hit
        return None

    hit = dfs(0, [], {(): root})
    if hit is None:
        status = "exhausted" if out_of_time else "none"
        return SearchResult(status, None, steps)
    chosen, table = hit
    witnesses = {}
    for assign, bits in table.items():
        witnesses[assign] = oracle.grid[_first_true_index(bits)]
    cert = Certificate(cylinders, tuple(chosen), witnesses)
    if not check_certificate(cert, oracle, spec):
        raise AssertionError("fresh certificate failed its own re-check")
    return SearchResult("found", cert, steps)


# -- mechanical certificate transforms -----------------------------------------


def restrict_certificate(cert: Certificate, keep: list[Elt]) -> Certificate:
    """Certificate for a subset of the independence set (witness restriction)."""
    J = cert.independence_set
    idx = [J.index(g) for g in keep]
    k = len(cert.cylinders)
    wits = {}
    for assign in product(range(1, k + 1), repeat=len(keep)):
        full = [1] * len(J)
        for pos, j in zip(idx, assign):
            full[pos] = j
        wits[assign] = cert.witnesses[tuple(full)]
    return Certificate(cert.cylinders, tuple(keep), wits)


def pad_certificate(cert: Certificate) -> Certificate:
    """Duplicate the first cylinder: a (k+1)-tuple certificate with the same
    independence set."""
    k = len(cert.cylinders)
    cyls = (cert.cylinders[0],) + cert.cylinders
    wits = {}
    for assign in product(range(1, k + 2), repeat=len(cert.independence_set)):
        collapsed = tuple(1 if j == 1 else j - 1 for j in assign)
        wits[assign] = cert.witnesses[collapsed]
    return Certificate(cyls, cert.independence_set, wits)


def transport_certificate(hom: HomSpec, group: GroupSpec, cert: Certificate,
                          oracle) -> Certificate:
    """Pull a certificate over Z back through a surjection G -> Z.

    Shapes and the independence set are mapped through the fixed section;
    the result is re-verified against the pulled-back oracle and any failure
    is a fatal oracle inconsistency.
    """
    def lift(n: int) -> Elt:
        return section_element(hom, group, n)

    cyls = tuple(
        Cylinder(tuple(lift(s[0][0]) for s in c.shape), c.pattern)
        for c in cert.cylinders)
    jset = tuple(lift(g[0][0]) for g in cert.independence_set)
    wits = {a: lift(h[0][0]) for a, h in cert.witnesses.items()}
    out = Certificate(cyls, jset, wits)
    if not check_certificate(out, oracle, group):
        raise AssertionError("transported certificate failed re-verification")
    return out


# -- regional proximality and entropy bounds -----------------------------------


def regional_witness_from_certificate(cert: Certificate, oracle,
                                      spec: GroupSpec) -> Elt:
    """Replay of the independence-to-proximality argument at window scale.

    Returns g0 = h g^-1 such that the shifted realizations of every cylinder
    fall together into the first cylinder's neighborhood.
    """
    if cert.size < 2:
        raise SpecError("need an independence set with two elements")
    g, h = cert.independence_set[0], cert.independence_set[1]
    k = len(cert.cylinders)
    g0 = spec.mul(h, spec.inv(g))
    rest = [1] * (cert.size - 2)
    for i in range(1, k + 1):
        assign = tuple([i, 1] + rest)
        y = cert.witnesses[assign]
        for site, sym in zip(cert.cylinders[0].shape, cert.cylinders[0].pattern):
            val = oracle.value(spec.mul(spec.mul(y, spec.inv(h)), site))
            if val != sym:
                raise AssertionError("replayed witness left the target cylinder")
    return g0


def regional_proximality_search(spec: GroupSpec, oracle, cylinders,
                                shift_candidates: list[Elt]) -> tuple[bool, Elt | None]:
    """Direct search: a shift g making in-language realizations of every
    cylinder agree on the first cylinder's shape."""
    shape = cylinders[0].shape
    occ: list[list[Elt]] = []
    for cyl in cylinders:
        hits = []
        for h in oracle.grid:
            ok = True
            for site, sym in zip(cyl.shape, cyl.pattern):
                if oracle.value(spec.mul(h, site)) != sym:
                    ok = False
                    break
            if ok:
                hits.append(h)
        if not hits:
            return False, None
        occ.append(hits)

    def read(h: Elt, g: Elt):
        vals = []
        for site in shape:
            v = oracle.value(spec.mul(spec.mul(h, spec.inv(g)), site))
            if v is None:
                return None
            vals.append(v)
        return tuple(vals)

    for g in shift_candidates:
        views = []
        for hits in occ:
            patterns = {read(h, g) for h in hits}
            patterns.discard(None)
            views.append(patterns)
        common = set.intersection(*views) if views else set()
        if common:
            return True, g
    return False, None


def in_tuple_search(spec: GroupSpec, oracle, point_gets, shapes,
                    target_size: int, candidates: list[Elt],
                    max_steps: int = 2_000_000,
                    deadline: float | None = None) -> list[SearchResult]:
    """Independence evidence for a tuple of points along shrinking shapes.

    Each shape induces one cylinder per point (its restriction, which must be
    fully defined); the points must be pairwise distinct on the first, largest
    shape, otherwise the tuple is degenerate and rejected.
    """
    first = shapes[0]
    restr = []
    for get in point_gets:
        vals = tuple(get(s) for s in first)
        if any(v is None for v in vals):
            raise SpecError("point restriction is not fully defined")
        restr.append(vals)
    if len(set(restr)) != len(restr):
        raise SpecError("points do not pairwise differ on the largest shape")

    out = []
    for shape in shapes:
        cyls = []
        for get in point_gets:
            vals = tuple(get(s) for s in shape)
            if any(v is None for v in vals):
                raise SpecError("point restriction is not fully defined")
            cyls.append(Cylinder(tuple(shape), vals))
        out.append(find_independence_set(cyls, target_size, oracle, candidates,
                                         spec, max_steps=max_steps,
                                         deadline=deadline))
    return out


def entropy_bounds_bits(max_certified: int, fiber_bound: int) -> tuple[float, float]:
    """(log2 of the largest certified tuple size, log2 of the fiber bound)."""
    lower = math.log2(max_certified)
    upper = math.log2(fiber_bound)
    if lower > upper + 1e-12:
        raise AssertionError("certified lower bound exceeded the fiber bound")
    return lower, upper


def z_candidates(radius: int) -> list[Elt]:
    return sorted((((n,), 0) for n in range(-radius, radius + 1)), key=search_key)


def g_candidates(spec: GroupSpec, radius: int) -> list[Elt]:
    axes = [range(-radius, radius + 1)] * spec.rank
    return sorted(((v, f) for f in range(spec.finite_order)
                   for v in product(*axes)), key=search_key)
