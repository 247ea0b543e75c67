"""Brute-force ground truth at small parameters.

Everything here is an independent check: exhaustive enumeration of the
ring, two-sided inverse search, centrality by commuting with every element,
and exhaustive search for central solutions of A . R = T.  These functions
back the library's closed-form counts and the attack solver, and feed the
CLI `verify-params` table.
"""

from __future__ import annotations

import itertools

from .center import CentralElement, enumerate_center
from .errors import TooLarge
from .params import RingParams
from .ring import RingElement, identity
from .vectors import ActionVector, act

ENUM_GUARD = 1 << 24
PAIRING_GUARD = 1 << 11  # O(n^2) searches stay under ~4M products


def ring_cardinality(params: RingParams) -> int:
    m = params.m
    return params.p ** ((2 * m**3 + 3 * m**2 + m) // 6)


def unit_cardinality(params: RingParams) -> int:
    # |E| scaled by the unit fraction ((p-1)/p)^m: invertibility only
    # constrains the m diagonal digits mod p.
    m = params.m
    return (params.p - 1) ** m * params.p ** (
        (2 * m**3 + 3 * m**2 - 5 * m) // 6
    )


def enumerate_ring(params: RingParams):
    """Every element exactly once, in row-major free-digit order."""
    if ring_cardinality(params) > ENUM_GUARD:
        raise TooLarge("ring too large to enumerate")
    p = params.p
    m = params.m
    positions = [(i, j) for i in range(m) for j in range(m)]
    radices = [p ** (min(i, j) + 1) for i, j in positions]
    for digits in itertools.product(*(range(r) for r in radices)):
        rows = [[0] * m for _ in range(m)]
        for (i, j), d in zip(positions, digits):
            rows[i][j] = d if i <= j else d * p ** (i - j)
        yield RingElement(params, tuple(tuple(r) for r in rows))


def brute_force_units(params: RingParams) -> set:
    """Elements with a two-sided inverse, found by exhaustive pairing."""
    if ring_cardinality(params) > PAIRING_GUARD:
        raise TooLarge("ring too large for pairwise inverse search")
    elems = list(enumerate_ring(params))
    ident = identity(params)
    units = set()
    for a in elems:
        for b in elems:
            if a * b == ident and b * a == ident:
                units.add(a.rows)
                break
    return units


def brute_force_center(params: RingParams) -> set:
    """Elements commuting with every element, by exhaustive check."""
    if ring_cardinality(params) > PAIRING_GUARD:
        raise TooLarge("ring too large for pairwise commutation search")
    elems = list(enumerate_ring(params))
    return {
        a.rows for a in elems if all(a * b == b * a for b in elems)
    }


def brute_force_central_sap(
    r: ActionVector, t: ActionVector, params: RingParams
) -> list[CentralElement]:
    """All central A with A . R = T, by enumerating the center."""
    if params.p ** params.m > ENUM_GUARD:
        raise TooLarge("center too large to enumerate")
    return [
        c for c in enumerate_center(params) if act(c.expand(), r) == t
    ]
