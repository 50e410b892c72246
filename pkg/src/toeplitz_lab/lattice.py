"""Group arithmetic for G = Z^r semidirect F, subgroup chains and box domains.

Groups are semidirect products of the lattice Z^r by a finite group F acting
through integer matrices of determinant +-1.  An element is a plain tuple
``(v, f)`` with ``v`` an integer vector of length r and ``f`` an index into F
(0 is the identity of F).  All arithmetic is exact integer arithmetic.

The chain Gamma_1 > Gamma_2 > ... consists of diagonal sublattices of Z^r,
and each level carries a half-open box D_i that is a fundamental domain for
the right cosets Gamma_i \\ G' together with its extension D_i R by the
finite-part representatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]
Elt = tuple[Vec, int]


class SpecError(ValueError):
    """A group / chain / domain specification is inconsistent."""


class DepthExhausted(LookupError):
    """A query needs more chain levels than the configured prefix."""


def matvec(mat: Mat, v: Vec) -> Vec:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in mat)


def matmul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def int_det(mat: Mat) -> int:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1:] for row in mat[1:])
        total += (-1) ** j * mat[0][j] * int_det(minor)
    return total


def identity_matrix(r: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class GroupSpec:
    """G = Z^rank semidirect F, with F given by a multiplication table.

    ``table[a][b]`` is the product ab in F; index 0 is the identity.
    ``action[f]`` is the integer matrix M_f through which f acts on Z^rank.
    """

    rank: int
    table: tuple[Vec, ...]
    action: tuple[Mat, ...]
    name: str = ""

    @property
    def finite_order(self) -> int:
        return len(self.table)

    @cached_property
    def finite_inverse(self) -> Vec:
        inv = []
        for a in range(self.finite_order):
            found = [b for b in range(self.finite_order)
                     if self.table[a][b] == 0 and self.table[b][a] == 0]
            if len(found) != 1:
                raise SpecError(f"finite part index {a} has no unique inverse")
            inv.append(found[0])
        return tuple(inv)

    @property
    def identity(self) -> Elt:
        return ((0,) * self.rank, 0)

    def mul(self, a: Elt, b: Elt) -> Elt:
        (v1, f1), (v2, f2) = a, b
        if len(v1) != self.rank or len(v2) != self.rank:
            raise SpecError("element rank does not match the group")
        return vec_add(v1, matvec(self.action[f1], v2)), self.table[f1][f2]

    def inv(self, a: Elt) -> Elt:
        v, f = a
        fi = self.finite_inverse[f]
        return tuple(-x for x in matvec(self.action[fi], v)), fi

    def conj(self, g: Elt, x: Elt) -> Elt:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def apply(self, f: int, v: Vec) -> Vec:
        return matvec(self.action[f], v)

    def reps(self) -> list[Elt]:
        """The finite-part representative set R, identity first."""
        zero = (0,) * self.rank
        return [(zero, f) for f in range(self.finite_order)]

    def validate(self) -> None:
        n = self.finite_order
        if self.rank < 1:
            raise SpecError("rank must be positive")
        if any(len(row) != n for row in self.table):
            raise SpecError("finite-part table is not square")
        if any(not (0 <= e < n) for row in self.table for e in row):
            raise SpecError("finite-part table entry out of range")
        for a in range(n):
            if self.table[0][a] != a or self.table[a][0] != a:
                raise SpecError("index 0 is not the identity of F")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise SpecError("finite-part table is not associative")
        _ = self.finite_inverse
        if len(self.action) != n:
            raise SpecError("need one action matrix per finite-part element")
        ident = identity_matrix(self.rank)
        if self.action[0] != ident:
            raise SpecError("action of the identity must be the identity matrix")
        for f, mat in enumerate(self.action):
            if len(mat) != self.rank or any(len(row) != self.rank for row in mat):
                raise SpecError("action matrix has wrong shape")
            if abs(int_det(mat)) != 1:
                raise SpecError(f"action matrix of index {f} is not unimodular")
        for a in range(n):
            for b in range(n):
                if matmul(self.action[a], self.action[b]) != self.action[self.table[a][b]]:
                    raise SpecError("action is not a homomorphism")


@dataclass(frozen=True)
class SubgroupChain:
    """Nested diagonal sublattices Gamma_i = <p^i_j e_j> of Z^rank.

    ``moduli[i-1]`` holds the vector (p^i_1, ..., p^i_r) of level i >= 1.
    """

    moduli: tuple[Vec, ...]

    @property
    def depth(self) -> int:
        return len(self.moduli)

    def level(self, i: int) -> Vec:
        if not 1 <= i <= self.depth:
            raise DepthExhausted(f"chain level {i} not configured (depth {self.depth})")
        return self.moduli[i - 1]

    def member_vec(self, v: Vec, i: int) -> bool:
        p = self.level(i)
        return all(x % q == 0 for x, q in zip(v, p))

    def member(self, g: Elt, i: int) -> bool:
        v, f = g
        return f == 0 and self.member_vec(v, i)

    def index_between(self, i: int) -> int:
        lo, hi = self.level(i), self.level(i + 1)
        out = 1
        for a, b in zip(lo, hi):
            out *= b // a
        return out

    def validate(self, rank: int) -> None:
        if self.depth < 1:
            raise SpecError("chain needs at least one level")
        for i, p in enumerate(self.moduli, start=1):
            if len(p) != rank:
                raise SpecError(f"level {i} moduli have wrong rank")
            for j, q in enumerate(p):
                if q <= 2 * i + 1:
                    raise SpecError(
                        f"level {i} modulus p_{j + 1} = {q} must exceed 2i+1 = {2 * i + 1}")
        for i in range(1, self.depth):
            lo, hi = self.moduli[i - 1], self.moduli[i]
            for a, b in zip(lo, hi):
                if b % a != 0 or b <= a:
                    raise SpecError(
                        f"moduli must strictly increase and divide: level {i} -> {i + 1}")


def check_index_condition(chain: SubgroupChain, i: int) -> bool:
    """Certified test of [Gamma_i : Gamma_{i+1}] > 1 / (1 - 2^(-(1/2)^(i+1))).

    The irrational right-hand side is bounded above in 64-bit floating point
    plus one ulp; the integer index is compared against the ceiling of that
    bound, so a True answer is never a false positive.
    """
    rhs = 1.0 / (1.0 - 2.0 ** (-(0.5 ** (i + 1))))
    rhs_up = math.nextafter(rhs, math.inf)
    return chain.index_between(i) >= math.ceil(rhs_up)


def _closest_congruent(target: float, base: int, mod: int) -> int:
    k = math.floor((target - base) / mod)
    cands = [base + k * mod, base + (k + 1) * mod]
    cands.sort(key=lambda q: (abs(q - target), q))
    return cands[0]


@dataclass(frozen=True)
class DomainChain:
    """Box fundamental domains D_i = prod_j [-q1_j, p_j - q1_j) for the chain."""

    chain: SubgroupChain
    q1: tuple[Vec, ...]

    @staticmethod
    def auto(chain: SubgroupChain) -> "DomainChain":
        """Near-centered offsets: q1^1 = floor(p/2); deeper levels stay
        congruent to the previous offset mod the previous modulus."""
        qs: list[Vec] = []
        for i, p in enumerate(chain.moduli, start=1):
            if i == 1:
                qs.append(tuple(q // 2 for q in p))
                continue
            prev_p = chain.moduli[i - 2]
            prev_q = qs[-1]
            row = tuple(
                _closest_congruent(p[j] / 2, prev_q[j], prev_p[j])
                for j in range(len(p))
            )
            qs.append(row)
        return DomainChain(chain, tuple(qs))

    @property
    def rank(self) -> int:
        return len(self.chain.moduli[0])

    def q2(self, i: int) -> Vec:
        p = self.chain.level(i)
        return tuple(a - b for a, b in zip(p, self.q1[i - 1]))

    def size(self, i: int) -> int:
        return math.prod(self.chain.level(i))

    def rep(self, v: Vec, i: int) -> Vec:
        """Representative of v modulo Gamma_i inside the level-i box."""
        p = self.chain.level(i)
        q = self.q1[i - 1]
        return tuple((x + a) % m - a for x, a, m in zip(v, q, p))

    def rep_arr(self, arr: np.ndarray, i: int) -> np.ndarray:
        p = np.array(self.chain.level(i), dtype=np.int64)
        q = np.array(self.q1[i - 1], dtype=np.int64)
        return (arr + q) % p - q

    def in_box(self, v: Vec, i: int) -> bool:
        q1 = self.q1[i - 1]
        q2 = self.q2(i)
        return all(-a <= x < b for x, a, b in zip(v, q1, q2))

    def in_box_arr(self, arr: np.ndarray, i: int) -> np.ndarray:
        q1 = np.array(self.q1[i - 1], dtype=np.int64)
        q2 = np.array(self.q2(i), dtype=np.int64)
        return np.all((arr >= -q1) & (arr < q2), axis=-1)

    def flat_arr(self, arr: np.ndarray, i: int) -> np.ndarray:
        """C-order flat index of in-box coordinates, canonical (v_1,...,v_r) lex."""
        p = self.chain.level(i)
        q1 = np.array(self.q1[i - 1], dtype=np.int64)
        shifted = arr + q1
        idx = shifted[..., 0]
        for j in range(1, len(p)):
            idx = idx * p[j] + shifted[..., j]
        return idx

    @lru_cache(maxsize=None)
    def box_coords(self, i: int) -> np.ndarray:
        """All box coordinates at level i, shape (size, rank), canonical order."""
        p = self.chain.level(i)
        q1 = self.q1[i - 1]
        axes = [np.arange(-a, m - a, dtype=np.int64) for a, m in zip(q1, p)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def enumerate_box(self, i: int):
        q1 = self.q1[i - 1]
        q2 = self.q2(i)
        yield from product(*(range(-a, b) for a, b in zip(q1, q2)))

    def validate(self) -> None:
        chain = self.chain
        if len(self.q1) != chain.depth:
            raise SpecError("need one offset vector per chain level")
        for i in range(1, chain.depth + 1):
            p = chain.level(i)
            q1 = self.q1[i - 1]
            q2 = self.q2(i)
            for a, b in zip(q1, q2):
                if a <= i or b <= i:
                    raise SpecError(
                        f"level {i} offsets ({a},{b}) must both exceed the level index")
            if i > 1:
                pp = chain.level(i - 1)
                qq = self.q1[i - 2]
                for a, c, m in zip(q1, qq, pp):
                    if (a - c) % m != 0:
                        raise SpecError(
                            f"level {i} offsets must align with level {i - 1} mod {m}")
                if any(a < c for a, c in zip(q1, qq)):
                    raise SpecError("boxes must be nested (lower side)")
                if any(a < c for a, c in zip(q2, self.q2(i - 1))):
                    raise SpecError("boxes must be nested (upper side)")


def decompose_right(spec: GroupSpec, domains: DomainChain, g: Elt,
                    i: int) -> tuple[Elt, Vec, int]:
    """Unique g = gamma * (d, 0) * (0, r) with gamma in Gamma_i, d in D_i."""
    v, f = g
    d = domains.rep(v, i)
    gamma: Elt = (vec_sub(v, d), 0)
    return gamma, d, f


def coset_rep(spec: GroupSpec, domains: DomainChain, g: Elt, i: int) -> Elt:
    """Representative of the right coset Gamma_i g inside D_i R."""
    _, d, f = decompose_right(spec, domains, g, i)
    return (d, f)


def enumerate_domain(spec: GroupSpec, domains: DomainChain, i: int,
                     with_reps: bool) -> list[Elt]:
    """D_i (or D_i R) in canonical order: finite part, then lattice lex."""
    fs = range(spec.finite_order) if with_reps else (0,)
    return [(v, f) for f in fs for v in domains.enumerate_box(i)]


def folner_ratio(spec: GroupSpec, domains: DomainChain, i: int, g: Elt) -> Fraction:
    """|D_i R g \\ D_i R| / |D_i R| by exhaustive set arithmetic."""
    cells = set(enumerate_domain(spec, domains, i, with_reps=True))
    moved = {spec.mul(x, g) for x in cells}
    return Fraction(len(moved - cells), len(cells))


def box_size(rank: int, m: int) -> int:
    return (2 * m + 1) ** rank


def box_count_bound(rank: int, m: int, s: int, eps: Fraction) -> bool:
    """Exact test of b(m+s)/b(m) < 1 + eps for cubes in Z^rank."""
    if m < 1 or s < 1:
        raise SpecError("radii must be at least 1")
    return Fraction(box_size(rank, m + s), box_size(rank, m)) < 1 + Fraction(eps)


def corner_count_check(domains: DomainChain, n: int, s: int,
                       d: Vec) -> tuple[bool, int, Fraction]:
    """Count |B(d, s) cap (gamma + D_{n+s})| for the translate containing d
    and compare with b(s) / 2^rank.  Returns (ok, count, bound)."""
    rank = domains.rank
    if not domains.in_box(d, n):
        raise SpecError("reference point must lie in the level-n box")
    rep = domains.rep(d, n + s)
    gamma = vec_sub(d, rep)
    count = 0
    for z in product(*(range(x - s, x + s + 1) for x in d)):
        if domains.in_box(vec_sub(z, gamma), n + s):
            count += 1
    bound = Fraction(box_size(rank, s), 2 ** rank)
    return count >= bound, count, bound


def canon_key(g: Elt) -> tuple:
    """Report order: finite part, then lattice coordinates."""
    v, f = g
    return (f,) + v


def search_key(g: Elt) -> tuple:
    """Search order: finite part, max-norm, then lattice coordinates."""
    v, f = g
    return (f, max(abs(x) for x in v)) + v
