"""The semigroup-action public-key cryptosystem.

Alice publishes (M, R, T) with T = F . R for a secret F commuting with M;
Bob masks his message S with a fresh commutant G of M, sending
(H, D) = (G . R, S + G . T).  Alice removes the mask: S = D - F . H.

Key generation resamples until the published pair defeats the central
digit-lifting attack: every component of R must be coprime to p and the
component ratios t_k / r_k mod p must not all agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .center import HPolynomial, is_central, sample_noncentral_commutant
from .errors import BadParameter, ExhaustedRetries, InvalidKey
from .params import RingParams
from .ring import RingElement
from .vectors import ActionVector, act


@dataclass(frozen=True)
class SapValidation:
    components_coprime: bool
    ratios_differ: bool

    @property
    def valid(self) -> bool:
        return self.components_coprime and self.ratios_differ


@dataclass(frozen=True)
class SapPublicKey:
    params: RingParams
    base: RingElement  # the public M
    r: ActionVector
    t: ActionVector


@dataclass(frozen=True)
class SapPrivateKey:
    params: RingParams
    f: RingElement
    provenance: HPolynomial  # the polynomial that produced f, kept for audit


@dataclass(frozen=True)
class SapCiphertext:
    h: ActionVector
    d: ActionVector


def sap_validate_key(pub: SapPublicKey) -> SapValidation:
    """The attacker cannot recover a central solution of A . R = T exactly
    when every r_k is a unit mod p and some ratio r_k^-1 t_k differs mod p
    from the first one."""
    p = pub.params.p
    r = pub.r.comps
    t = pub.t.comps
    coprime = all(v % p != 0 for v in r)
    differ = False
    if coprime:
        ratio0 = pow(r[0] % p, -1, p) * t[0] % p
        differ = any(
            pow(r[k] % p, -1, p) * t[k] % p != ratio0 for k in range(1, len(r))
        )
    return SapValidation(components_coprime=coprime, ratios_differ=differ)


def _sample_unit_vector(params: RingParams, rng) -> ActionVector:
    # every component coprime to p, each uniform over its units-coset range
    comps = []
    for i in range(params.m):
        mod = params.moduli[i]
        v = rng.randrange(mod)
        while v % params.p == 0:
            v = rng.randrange(mod)
        comps.append(v)
    return ActionVector(params, tuple(comps))


def sap_keygen(
    params: RingParams,
    base: RingElement,
    rng,
    max_degree: int = 8,
    max_tries: int = 256,
):
    """Generate a validated key pair over the public base M."""
    params.require_protocol_size()
    if is_central(base):
        raise BadParameter("public base must not be central")
    for _ in range(max_tries):
        r = _sample_unit_vector(params, rng)
        poly, f = sample_noncentral_commutant(base, max_degree, rng)
        t = act(f, r)
        pub = SapPublicKey(params, base, r, t)
        if sap_validate_key(pub).valid:
            return pub, SapPrivateKey(params, f, poly)
    raise ExhaustedRetries(f"no validated key pair after {max_tries} attempts")


def sap_encrypt(
    pub: SapPublicKey, s: ActionVector, rng, max_degree: int = 8
) -> SapCiphertext:
    """Mask S with a fresh non-central commutant G; a new G per call blocks
    repetition attacks."""
    if not sap_validate_key(pub).valid:
        raise InvalidKey("public key fails the ratio validation")
    _, g = sample_noncentral_commutant(pub.base, max_degree, rng)
    return SapCiphertext(h=act(g, pub.r), d=s + act(g, pub.t))


def sap_decrypt(priv: SapPrivateKey, ct: SapCiphertext) -> ActionVector:
    return ct.d - act(priv.f, ct.h)
