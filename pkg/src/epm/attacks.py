"""Executable adversaries: central digit-lifting against published action
pairs, the reduction from the decomposition schemes to that solver, and a
brute-force search for commuting unit mask pairs.

Every Recovered outcome is verified internally before being reported: a
returned witness always reproduces the public equation it claims to solve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .center import CentralElement, central_sample
from .dp import EgdpCiphertextAdd, EgdpPublicKey
from .errors import TooLarge
from .params import RingParams
from .ring import RingElement
from .sap import SapCiphertext, SapPublicKey
from .vectors import ActionVector, act


class AttackStatus(Enum):
    RECOVERED = "recovered"
    NO_CENTRAL_SOLUTION = "no_central_solution"
    NOT_FOUND = "not_found"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class AttackOutcome:
    status: AttackStatus
    recovered: object = None  # plaintext / shared element on success
    witness: object = None  # solution data backing the recovery


def solve_central_sap(r: ActionVector, t: ActionVector) -> AttackOutcome:
    """Find central A with A . R = T by lifting its base-p digits.

    The first component pins digit 0 when r_0 is a unit mod p (otherwise the
    lifting has no anchor and we decline).  Each later unit component pins
    the whole digit prefix at once; non-unit components leave their digit
    free (taken as 0) and are caught by the final verification.
    """
    params = r.params
    p = params.p
    m = params.m
    rc, tc = r.comps, t.comps
    if rc[0] % p == 0:
        return AttackOutcome(AttackStatus.NOT_APPLICABLE)
    digits: list = [None] * m
    for j in range(m):
        if rc[j] % p == 0:
            continue
        mod = params.moduli[j]
        w = pow(rc[j], -1, mod) * tc[j] % mod
        for i in range(j + 1):
            d = (w // p**i) % p
            if digits[i] is None:
                digits[i] = d
            elif digits[i] != d:
                return AttackOutcome(AttackStatus.NO_CENTRAL_SOLUTION)
    candidate = CentralElement(params, tuple(d or 0 for d in digits))
    expanded = candidate.expand()
    if act(expanded, r) != t:
        return AttackOutcome(AttackStatus.NO_CENTRAL_SOLUTION)
    return AttackOutcome(
        AttackStatus.RECOVERED, recovered=expanded, witness=candidate
    )


def attack_sap(pub: SapPublicKey, ct: SapCiphertext) -> AttackOutcome:
    """Message recovery from a key with a central action solution: such an A
    commutes with every mask G, so D - (A G) . R = S."""
    out = solve_central_sap(pub.r, pub.t)
    if out.status is not AttackStatus.RECOVERED:
        return out
    s = ct.d - act(out.recovered, ct.h)
    return AttackOutcome(AttackStatus.RECOVERED, recovered=s, witness=out.witness)


def _column_vector(mat: RingElement, k: int) -> ActionVector:
    return ActionVector(
        mat.params, tuple(mat.rows[i][k] for i in range(mat.params.m))
    )


def solve_central_dp(
    x: RingElement, p_elem: RingElement, rng=None
) -> AttackOutcome:
    """Find central C with C X = P, column by column.

    Only columns of X with every entry coprime to p are lifted; a candidate
    is accepted only if the full matrix equation holds.  On success the
    witness also carries a decomposition pair (C H^-1, H) for a fresh
    invertible central H, exhibiting P = (C H^-1) X H.
    """
    params = x.params
    p = params.p
    m = params.m
    qualifying = [
        k
        for k in range(m)
        if all(x.rows[i][k] % p != 0 for i in range(m))
    ]
    if not qualifying:
        return AttackOutcome(AttackStatus.NOT_APPLICABLE)
    for k in qualifying:
        out = solve_central_sap(_column_vector(x, k), _column_vector(p_elem, k))
        if out.status is not AttackStatus.RECOVERED:
            continue
        candidate = out.recovered
        if candidate * x != p_elem:
            continue
        h = central_sample(params, rng or random.Random(0), require_invertible=True)
        h_elem = h.expand()
        pair = (candidate * h_elem.inverse(), h_elem)
        return AttackOutcome(
            AttackStatus.RECOVERED,
            recovered=candidate,
            witness={"central": out.witness, "decomposition": pair},
        )
    return AttackOutcome(AttackStatus.NO_CENTRAL_SOLUTION)


def attack_egdp_via_central(
    pub: EgdpPublicKey, ct: EgdpCiphertextAdd, rng=None
) -> AttackOutcome:
    """Decrypt through a central solution C of C X = P: centrality gives
    C F = B1 C X B2 = B1 P B2, the exact additive mask."""
    out = solve_central_dp(pub.x, pub.p_elem, rng)
    if out.status is not AttackStatus.RECOVERED:
        return out
    s = ct.d - out.recovered * ct.f
    return AttackOutcome(AttackStatus.RECOVERED, recovered=s, witness=out.witness)


def brute_force_unit_attack(
    pub: EgdpPublicKey,
    ct: EgdpCiphertextAdd,
    search_bound: int = 1 << 20,
) -> AttackOutcome:
    """Search central pairs (w1, w2) with w2 invertible and F w2 = w1 X;
    any hit unmasks via D - w1 P w2^-1.  Small parameters only: the search
    space is the center, the smallest set commuting with every commutant."""
    params = pub.params
    if params.p**params.m > search_bound:
        raise TooLarge("center exceeds the brute-force search bound")
    from .center import enumerate_center

    centrals = [(c, c.expand()) for c in enumerate_center(params)]
    for w1c, w1 in centrals:
        fw_target = w1 * pub.x
        for w2c, w2 in centrals:
            if not w2c.is_unit():
                continue
            if ct.f * w2 != fw_target:
                continue
            s = ct.d - w1 * pub.p_elem * w2.inverse()
            return AttackOutcome(
                AttackStatus.RECOVERED, recovered=s, witness=(w1c, w2c)
            )
    return AttackOutcome(AttackStatus.NOT_FOUND)


def egdp_break_from_dhdp_oracle(
    pub: EgdpPublicKey, ct: EgdpCiphertextAdd, oracle
) -> RingElement:
    """Reduction: an oracle producing the exchange value B1 P B2 from
    (X, A1 X A2, B1 X B2) decrypts the additive ciphertext outright."""
    return ct.d - oracle(pub.x, pub.p_elem, ct.f)
