"""Bundled experiment decks and the on-disk configuration format.

A deck fixes the whole experiment identity: the group, the chain of moduli,
the box offsets, the alphabet size and the construction variant, plus the
1-d period sequence when the classical construction is part of the deck.
Configurations are single JSON documents with explicit integer matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .lattice import DomainChain, GroupSpec, SpecError, SubgroupChain, identity_matrix
from .toeplitz import Construction, ConstructionParams, VARIANT_NORMAL, VARIANT_VIRTUALLY
from .williams import WilliamsParams


@dataclass(frozen=True)
class Deck:
    name: str
    group: GroupSpec
    chain: SubgroupChain
    domains: DomainChain
    m: int
    variant: str
    williams: WilliamsParams | None = None

    def params(self) -> ConstructionParams:
        return ConstructionParams(self.group, self.chain, self.domains,
                                  self.m, self.variant)

    def validate(self) -> None:
        self.params().validate()
        if self.williams is not None:
            self.williams.validate()

    def group_fiber_bound(self) -> int:
        """m^(2^r [G:G']): the tower bound on odometer fibers."""
        return self.m ** (2 ** self.group.rank * self.group.finite_order)

    def entropy_fiber_bound(self) -> int:
        """Fiber bound feeding the sequence-entropy upper bound.

        Decks built around the classical 1-d construction inherit its
        at-most-m-to-one factor map; group decks use the tower bound.
        """
        if self.williams is not None:
            return self.m
        return self.group_fiber_bound()


@lru_cache(maxsize=None)
def construction(deck: Deck) -> Construction:
    return Construction(deck.params())


def _trivial_group(rank: int, name: str) -> GroupSpec:
    return GroupSpec(rank=rank, table=((0,),), action=(identity_matrix(rank),),
                     name=name)


def _order_two_group(rank: int, mat, name: str) -> GroupSpec:
    return GroupSpec(rank=rank, table=((0, 1), (1, 0)),
                     action=(identity_matrix(rank), mat), name=name)


def _chain(*rows) -> SubgroupChain:
    return SubgroupChain(tuple(tuple(r) for r in rows))


def _williams_deck(name: str, m: int) -> Deck:
    periods = (6, 36, 432, 10368, 124416)
    chain = _chain(*[(p,) for p in periods])
    return Deck(
        name=name,
        group=_trivial_group(1, "Z"),
        chain=chain,
        domains=DomainChain.auto(chain),
        m=m,
        variant=VARIANT_NORMAL,
        williams=WilliamsParams(m=m, periods=periods),
    )


def _z2_deck() -> Deck:
    chain = _chain((5, 5), (25, 25), (125, 125), (625, 625), (3125, 3125))
    return Deck(
        name="z2-m2",
        group=_trivial_group(2, "Z^2"),
        chain=chain,
        domains=DomainChain.auto(chain),
        m=2,
        variant=VARIANT_NORMAL,
    )


def _dihedral_deck() -> Deck:
    chain = _chain((5,), (25,), (125,), (625,), (3125,), (15625,), (78125,))
    return Deck(
        name="dihedral-m2",
        group=_order_two_group(1, ((-1,),), "Z x| Z/2 (flip)"),
        chain=chain,
        domains=DomainChain.auto(chain),
        m=2,
        variant=VARIANT_VIRTUALLY,
    )


def _swap_deck() -> Deck:
    chain = _chain((5, 5), (25, 25), (125, 125), (625, 625), (3125, 3125))
    return Deck(
        name="swap-m2",
        group=_order_two_group(2, ((0, 1), (1, 0)), "Z^2 x| Z/2 (swap)"),
        chain=chain,
        domains=DomainChain.auto(chain),
        m=2,
        variant=VARIANT_VIRTUALLY,
    )


_BUILDERS = {
    "williams-m2": lambda: _williams_deck("williams-m2", 2),
    "williams-m3": lambda: _williams_deck("williams-m3", 3),
    "z2-m2": _z2_deck,
    "dihedral-m2": _dihedral_deck,
    "swap-m2": _swap_deck,
}

BUNDLED = tuple(sorted(_BUILDERS))


@lru_cache(maxsize=None)
def bundled_deck(name: str) -> Deck:
    deck = _BUILDERS[name]()
    deck.validate()
    return deck


def deck_to_config(deck: Deck) -> dict:
    return {
        "name": deck.name,
        "m": deck.m,
        "variant": deck.variant,
        "group": {
            "rank": deck.group.rank,
            "table": [list(r) for r in deck.group.table],
            "action": [[list(row) for row in mat] for mat in deck.group.action],
            "name": deck.group.name,
        },
        "chain": [list(r) for r in deck.chain.moduli],
        "offsets": [list(r) for r in deck.domains.q1],
        "williams_periods":
            list(deck.williams.periods) if deck.williams else None,
    }


def deck_from_config(doc: dict) -> Deck:
    try:
        g = doc["group"]
        group = GroupSpec(
            rank=int(g["rank"]),
            table=tuple(tuple(r) for r in g["table"]),
            action=tuple(tuple(tuple(row) for row in mat) for mat in g["action"]),
            name=g.get("name", ""),
        )
        chain = SubgroupChain(tuple(tuple(r) for r in doc["chain"]))
        offsets = doc.get("offsets", "auto")
        if offsets == "auto":
            domains = DomainChain.auto(chain)
        else:
            domains = DomainChain(chain, tuple(tuple(r) for r in offsets))
        wp = doc.get("williams_periods")
        williams = WilliamsParams(int(doc["m"]), tuple(wp)) if wp else None
        deck = Deck(
            name=str(doc["name"]),
            group=group,
            chain=chain,
            domains=domains,
            m=int(doc["m"]),
            variant=str(doc["variant"]),
            williams=williams,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed deck configuration: {exc}") from exc
    deck.validate()
    return deck


def load_deck(ref: str) -> Deck:
    """A bundled deck name, or a path to a JSON configuration."""
    if ref in _BUILDERS:
        return bundled_deck(ref)
    path = Path(ref)
    if not path.exists():
        raise SpecError(
            f"unknown deck {ref!r}; bundled decks: {', '.join(BUNDLED)}")
    return deck_from_config(json.loads(path.read_text()))
