"""Decomposition-problem schemes: the DHDP key exchange and the ElGamal-style
cryptosystem built on it.

Both sides work inside the commuting subsemigroup H(M) of a shared base M.
The exchange transmits A1 X A2 and B1 X B2 and both parties arrive at
A1 B1 X B2 A2.  The cryptosystem publishes (X, P = A1 X A2); the additive
mode masks a ring-element message with B1 P B2, the xor mode masks its
fixed-width bit encoding instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .center import HPolynomial, h_poly_sample, is_central
from .errors import (
    BadBase,
    BadParameter,
    ExhaustedRetries,
    InvalidKey,
    LengthMismatch,
)
from .params import RingParams
from .ring import RingElement, commutes, random_element

_MAX_TRIES = 256


@dataclass
class DhdpSession:
    """Single-owner state machine for one side of the exchange."""

    params: RingParams
    x: RingElement
    base: RingElement
    role: str  # "alice" | "bob"
    local1: RingElement
    local2: RingElement
    outbound: RingElement
    shared: RingElement | None = field(default=None)


def dhdp_init(
    params: RingParams,
    x: RingElement,
    base: RingElement,
    role: str,
    rng,
    max_degree: int = 8,
) -> DhdpSession:
    params.require_protocol_size()
    if role not in ("alice", "bob"):
        raise BadParameter(f"unknown role {role!r}")
    if commutes(base, x):
        raise BadBase("base and x commute; the exchange would be transparent")
    for _ in range(_MAX_TRIES):
        _, l1 = h_poly_sample(base, max_degree, rng)
        _, l2 = h_poly_sample(base, max_degree, rng)
        if role == "alice":
            if l1 != l2:
                break
        else:
            if l1 * x != x * l2:
                break
    else:
        raise ExhaustedRetries("could not sample session locals")
    return DhdpSession(
        params=params,
        x=x,
        base=base,
        role=role,
        local1=l1,
        local2=l2,
        outbound=l1 * x * l2,
    )


def dhdp_complete(session: DhdpSession, peer_outbound: RingElement) -> RingElement:
    session.shared = session.local1 * peer_outbound * session.local2
    return session.shared


@dataclass(frozen=True)
class EgdpValidation:
    # columns of X with every entry coprime to p, and whether the mod-p
    # ratios of P against X disagree somewhere down that column
    qualifying_columns: tuple
    resistant_columns: tuple

    @property
    def valid(self) -> bool:
        return len(self.resistant_columns) > 0


@dataclass(frozen=True)
class EgdpPublicKey:
    params: RingParams
    base: RingElement  # the commutant base M
    x: RingElement
    p_elem: RingElement  # A1 X A2


@dataclass(frozen=True)
class EgdpPrivateKey:
    params: RingParams
    a1: RingElement
    a2: RingElement
    provenance1: HPolynomial
    provenance2: HPolynomial


@dataclass(frozen=True)
class EgdpCiphertextAdd:
    f: RingElement
    d: RingElement


@dataclass(frozen=True)
class EgdpCiphertextXor:
    f: RingElement
    d_bits: bytes  # exactly the fixed bit-encoding length of an element


def egdp_validate_key(pub: EgdpPublicKey) -> EgdpValidation:
    """Blocks the reduction of the key to a central action problem: some
    column of X must be entrywise coprime to p with disagreeing ratios."""
    p = pub.params.p
    m = pub.params.m
    qualifying = []
    resistant = []
    for k in range(m):
        if any(pub.x.rows[i][k] % p == 0 for i in range(m)):
            continue
        qualifying.append(k)
        ratio0 = pow(pub.x.rows[0][k] % p, -1, p) * pub.p_elem.rows[0][k] % p
        if any(
            pow(pub.x.rows[j][k] % p, -1, p) * pub.p_elem.rows[j][k] % p != ratio0
            for j in range(1, m)
        ):
            resistant.append(k)
    return EgdpValidation(tuple(qualifying), tuple(resistant))


def egdp_keygen(
    params: RingParams, base: RingElement, rng, max_degree: int = 8
):
    params.require_protocol_size()
    if is_central(base):
        raise BadParameter("commutant base must not be central")
    for _ in range(_MAX_TRIES):
        poly1, a1 = h_poly_sample(base, max_degree, rng)
        poly2, a2 = h_poly_sample(base, max_degree, rng)
        x = None
        for _ in range(_MAX_TRIES):
            cand = random_element(params, rng)
            if is_central(cand) or commutes(cand, base):
                continue
            if commutes(cand, a1) or commutes(cand, a2):
                continue
            x = cand
            break
        if x is None:
            continue
        pub = EgdpPublicKey(params, base, x, a1 * x * a2)
        if egdp_validate_key(pub).valid:
            return pub, EgdpPrivateKey(params, a1, a2, poly1, poly2)
    raise ExhaustedRetries(f"no validated key pair after {_MAX_TRIES} attempts")


def _sample_mask_pair(pub: EgdpPublicKey, rng, max_degree: int):
    if not egdp_validate_key(pub).valid:
        raise InvalidKey("public key fails the column-ratio validation")
    for _ in range(_MAX_TRIES):
        _, b1 = h_poly_sample(pub.base, max_degree, rng)
        _, b2 = h_poly_sample(pub.base, max_degree, rng)
        if not commutes(pub.x, b1) and not commutes(pub.x, b2):
            return b1, b2
    raise ExhaustedRetries("could not sample non-commuting mask pair")


def egdp_encrypt_add(
    pub: EgdpPublicKey, s: RingElement, rng, max_degree: int = 8
) -> EgdpCiphertextAdd:
    b1, b2 = _sample_mask_pair(pub, rng, max_degree)
    return EgdpCiphertextAdd(f=b1 * pub.x * b2, d=s + b1 * pub.p_elem * b2)


def egdp_decrypt_add(priv: EgdpPrivateKey, ct: EgdpCiphertextAdd) -> RingElement:
    return ct.d - priv.a1 * ct.f * priv.a2


def egdp_encrypt_xor(
    pub: EgdpPublicKey, msg: bytes, rng, max_degree: int = 8
) -> EgdpCiphertextXor:
    """Mask a fixed-length bit string with the bit encoding of B1 P B2.

    The plaintext is an opaque t-bit string (passed as its padded byte
    form); xor is self-inverse, so it never needs to decode to an element.
    """
    from .codec import beta_byte_length, beta_encode

    nbytes = beta_byte_length(pub.params)
    if len(msg) != nbytes:
        raise LengthMismatch(f"xor message must be exactly {nbytes} bytes")
    b1, b2 = _sample_mask_pair(pub, rng, max_degree)
    mask = beta_encode(b1 * pub.p_elem * b2)
    return EgdpCiphertextXor(
        f=b1 * pub.x * b2, d_bits=bytes(a ^ b for a, b in zip(msg, mask))
    )


def egdp_decrypt_xor(priv: EgdpPrivateKey, ct: EgdpCiphertextXor) -> bytes:
    from .codec import beta_byte_length, beta_encode

    nbytes = beta_byte_length(priv.params)
    if len(ct.d_bits) != nbytes:
        raise LengthMismatch(f"xor payload must be exactly {nbytes} bytes")
    mask = beta_encode(priv.a1 * ct.f * priv.a2)
    return bytes(a ^ b for a, b in zip(ct.d_bits, mask))
