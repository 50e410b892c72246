"""Pullback cellular automata along homomorphisms G -> Z.

For phi(v, f) = <w, v> the pullback of a sequence x over Z is the G-array
(phi* x)(g) = x(phi(g)).  phi is a homomorphism on the semidirect product
exactly when w is fixed by every action matrix, and surjective exactly when
the entries of w are coprime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import Elt, GroupSpec, SpecError, Vec
from .williams import ZPatch


@dataclass(frozen=True)
class HomSpec:
    w: Vec

    def phi(self, g: Elt) -> int:
        v, _ = g
        return sum(a * x for a, x in zip(self.w, v))


def validate_hom(spec: HomSpec, group: GroupSpec) -> tuple[bool, str]:
    """Compatibility with the finite-part action plus surjectivity."""
    if len(spec.w) != group.rank:
        return False, "weight vector has wrong rank"
    for f, mat in enumerate(group.action):
        image = tuple(sum(spec.w[i] * mat[i][j] for i in range(group.rank))
                      for j in range(group.rank))
        if image != tuple(spec.w):
            return False, f"w is not invariant under the action of index {f}"
    if math.gcd(*(abs(x) for x in spec.w)) != 1:
        return False, "weights are not coprime, the image is a proper subgroup"
    return True, "ok"


def section_vector(spec: HomSpec) -> Vec:
    """Integer u with <w, u> = 1, built by folding the extended Euclid."""
    w = spec.w
    g, coeffs = abs(w[0]), [1 if w[0] >= 0 else -1]
    for x in w[1:]:
        gg, a, b = _ext_gcd(g, abs(x))
        coeffs = [c * a for c in coeffs]
        coeffs.append(b if x >= 0 else -b)
        g = gg
    if g != 1:
        raise SpecError("homomorphism is not surjective, no section exists")
    return tuple(coeffs)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def section_element(spec: HomSpec, group: GroupSpec, n: int) -> Elt:
    """The chosen preimage of n: (n * u, identity)."""
    u = section_vector(spec)
    return tuple(n * x for x in u), 0


class PullbackPatch:
    """(phi* x) restricted to the positions the source window can serve."""

    def __init__(self, spec: HomSpec, group: GroupSpec, source: ZPatch):
        self.spec = spec
        self.group = group
        self.source = source

    def get(self, g: Elt) -> int | None:
        return self.source.symbol(self.spec.phi(g))

    def reach(self) -> int:
        return self.source.N


def pullback_window(spec: HomSpec, group: GroupSpec, source: ZPatch,
                    window: list[Elt]) -> dict[Elt, int]:
    """Materialize phi* x on an explicit window; errors when out of reach."""
    out: dict[Elt, int] = {}
    for g in window:
        n = spec.phi(g)
        if not source.in_window(n):
            raise SpecError(f"window position {g} maps outside the source patch")
        s = source.symbol(n)
        if s is not None:
            out[g] = s
    return out


def equivariance_check(spec: HomSpec, group: GroupSpec, source: ZPatch,
                       g: Elt, window: list[Elt]) -> bool:
    """sigma^g (phi* x) must equal phi* (sigma^{phi(g)} x) on the window."""
    n0 = spec.phi(g)
    ginv = group.inv(g)
    for h in window:
        lhs_pos = spec.phi(group.mul(ginv, h))
        rhs_pos = spec.phi(h) - n0
        if not (source.in_window(lhs_pos) and source.in_window(rhs_pos)):
            raise SpecError("window exceeds the source patch reach")
        if source.symbol(lhs_pos) != source.symbol(rhs_pos):
            return False
    return True


def injectivity_window_check(spec: HomSpec, group: GroupSpec,
                             pa: ZPatch, pb: ZPatch, window: list[Elt]) -> bool:
    """Distinct sources differing inside phi(window) must pull back apart."""
    diff_at = [n for n in pa.positions()
               if pb.in_window(n) and pa.symbol(n) is not None
               and pb.symbol(n) is not None and pa.symbol(n) != pb.symbol(n)]
    images = {spec.phi(g) for g in window}
    if not any(n in images for n in diff_at):
        return True  # nothing to witness on this window
    qa = pullback_window(spec, group, pa, window)
    qb = pullback_window(spec, group, pb, window)
    return qa != qb


def recurrence_gap_diagnostic(spec: HomSpec, group: GroupSpec, source: ZPatch,
                              shape: list[Elt], scan: int) -> int:
    """Largest gap between repeats of the origin pattern of phi* x along the
    section direction; a minimality proxy, reported, not asserted."""
    u = section_vector(spec)
    base = {g: spec.phi(g) for g in shape}
    target = {g: source.symbol(n) for g, n in base.items()}
    if any(v is None for v in target.values()):
        raise SpecError("origin pattern is not fully defined")
    hits = []
    for t in range(-scan, scan + 1):
        if all(source.symbol(n + t) == target[g] for g, n in base.items()):
            hits.append(t)
    if len(hits) < 2:
        return 2 * scan + 1
    return max(b - a for a, b in zip(hits, hits[1:]))
