import random

import pytest

from epm import RingParams
from epm.center import central_sample, h_poly_sample
from epm.dp import (
    EgdpCiphertextAdd,
    EgdpCiphertextXor,
    EgdpPrivateKey,
    EgdpPublicKey,
    egdp_encrypt_add,
    egdp_encrypt_xor,
    egdp_keygen,
)
from epm.ring import random_element
from epm.sap import SapCiphertext, sap_encrypt, sap_keygen
from epm.vectors import vec_random
from epm import codec
from epm.center import make_corner_M


@pytest.fixture
def params22():
    return RingParams(2, 2)


@pytest.fixture
def params32():
    return RingParams(3, 2)


@pytest.fixture
def params33():
    return RingParams(3, 3)


def make_rng(seed=0):
    return random.Random(seed)


ALL_KINDS = (
    "element",
    "vector",
    "sap_pub",
    "sap_priv",
    "sap_ct",
    "egdp_pub",
    "egdp_priv",
    "egdp_ct_add",
    "egdp_ct_xor",
)


def random_value(kind, params, rng):
    """A random instance of any serializable kind, for codec fixtures."""
    if kind == "element":
        return random_element(params, rng)
    if kind == "vector":
        return vec_random(params, rng)
    base = make_corner_M(params, _coprime(params, rng))
    if kind in ("sap_pub", "sap_priv", "sap_ct"):
        pub, priv = sap_keygen(params, base, rng, max_degree=3)
        if kind == "sap_pub":
            return pub
        if kind == "sap_priv":
            return priv
        return sap_encrypt(pub, vec_random(params, rng), rng, max_degree=3)
    pub, priv = egdp_keygen(params, base, rng, max_degree=3)
    if kind == "egdp_pub":
        return pub
    if kind == "egdp_priv":
        return priv
    if kind == "egdp_ct_add":
        return egdp_encrypt_add(pub, random_element(params, rng), rng, max_degree=3)
    msg = bytes(rng.randrange(256) for _ in range(codec.beta_byte_length(params)))
    return egdp_encrypt_xor(pub, msg, rng, max_degree=3)


def _coprime(params, rng):
    x = rng.randrange(1, params.moduli[-1])
    while x % params.p == 0:
        x = rng.randrange(1, params.moduli[-1])
    return x
