import pytest

from epm import RingParams, codec
from epm.center import CentralElement, is_central, make_corner_M
from epm.dp import (
    EgdpCiphertextAdd,
    EgdpPublicKey,
    dhdp_complete,
    dhdp_init,
    egdp_decrypt_add,
    egdp_decrypt_xor,
    egdp_encrypt_add,
    egdp_encrypt_xor,
    egdp_keygen,
    egdp_validate_key,
)
from epm.errors import BadBase, InvalidKey, LengthMismatch
from epm.ring import commutes, element, identity, random_element, zero

from conftest import make_rng


def diag(params, *entries):
    m = params.m
    return element(
        params, [[entries[i] if i == j else 0 for j in range(m)] for i in range(m)]
    )


@pytest.fixture
def worked(params22):
    m = make_corner_M(params22, 3)
    x = element(params22, [[1, 1], [2, 3]])
    return m, x


def test_dhdp_base_checks(params22, worked):
    m, x = worked
    assert not commutes(m, x)
    with pytest.raises(BadBase):
        dhdp_init(params22, identity(params22), m, "alice", make_rng(0))


def test_dhdp_worked_chain(params22, worked):
    m, x = worked
    a1, a2 = diag(params22, 1, 2), diag(params22, 0, 1)
    b1, b2 = diag(params22, 1, 3), diag(params22, 0, 2)
    assert b1 * x != x * b2
    g_a = a1 * x * a2
    g_b = b1 * x * b2
    assert g_a.rows == ((0, 1), (0, 2))
    assert g_b.rows == ((0, 0), (0, 2))
    shared_alice = a1 * g_b * a2
    shared_bob = b1 * g_a * b2
    assert shared_alice == shared_bob == zero(params22)


def test_dhdp_sessions_agree(params33):
    base = make_corner_M(params33, 2)
    rng = make_rng(1)
    for _ in range(200):
        x = random_element(params33, rng)
        if commutes(base, x):
            continue
        alice = dhdp_init(params33, x, base, "alice", rng)
        bob = dhdp_init(params33, x, base, "bob", rng)
        assert alice.local1 != alice.local2
        assert bob.local1 * x != x * bob.local2
        sa = dhdp_complete(alice, bob.outbound)
        sb = dhdp_complete(bob, alice.outbound)
        assert sa == sb


def test_egdp_validate_worked(params22, worked):
    m, x = worked
    p_elem = element(params22, [[0, 1], [0, 2]])
    pub = EgdpPublicKey(params22, m, x, p_elem)
    report = egdp_validate_key(pub)
    assert report.valid
    assert report.resistant_columns == (1,)  # 0-based second column


def test_egdp_validate_rejects_central_multiple(params22, worked):
    """P = c X for central c has equal ratios everywhere: invalid."""
    m, x = worked
    c = CentralElement(params22, (1, 1)).expand()
    pub = EgdpPublicKey(params22, m, x, c * x)
    assert not egdp_validate_key(pub).valid


def test_egdp_validate_no_unit_column(params22, worked):
    m, _ = worked
    x = element(params22, [[0, 0], [2, 2]])
    pub = EgdpPublicKey(params22, m, x, zero(params22))
    report = egdp_validate_key(pub)
    assert report.qualifying_columns == ()
    assert not report.valid


def test_egdp_keygen_contracts(params22, worked):
    m, _ = worked
    rng = make_rng(2)
    for _ in range(20):
        pub, priv = egdp_keygen(params22, m, rng)
        assert egdp_validate_key(pub).valid
        assert not commutes(pub.x, m)
        assert not is_central(pub.x)
        assert pub.p_elem == priv.a1 * pub.x * priv.a2
        assert priv.provenance1.evaluate(m) == priv.a1
        assert priv.provenance2.evaluate(m) == priv.a2


def test_egdp_worked_chain(params22, worked):
    m, x = worked
    from epm.dp import EgdpPrivateKey

    a1, a2 = diag(params22, 1, 2), diag(params22, 0, 1)
    b1, b2 = diag(params22, 1, 3), diag(params22, 0, 2)
    pub = EgdpPublicKey(params22, m, x, a1 * x * a2)
    assert pub.p_elem.rows == ((0, 1), (0, 2))
    f = b1 * x * b2
    assert f.rows == ((0, 0), (0, 2))
    mask = b1 * pub.p_elem * b2
    assert mask == zero(params22)
    s = element(params22, [[1, 0], [2, 3]])
    d = s + mask
    assert d == s
    assert d - a1 * f * a2 == s


def test_egdp_round_trip_add(params33):
    base = make_corner_M(params33, 2)
    rng = make_rng(3)
    pub, priv = egdp_keygen(params33, base, rng)
    for _ in range(200):
        s = random_element(params33, rng)
        ct = egdp_encrypt_add(pub, s, rng)
        assert egdp_decrypt_add(priv, ct) == s


def test_egdp_round_trip_xor(params33):
    base = make_corner_M(params33, 2)
    rng = make_rng(4)
    pub, priv = egdp_keygen(params33, base, rng)
    nbytes = codec.beta_byte_length(params33)
    for _ in range(200):
        msg = bytes(rng.randrange(256) for _ in range(nbytes))
        ct = egdp_encrypt_xor(pub, msg, rng)
        assert egdp_decrypt_xor(priv, ct) == msg


def test_egdp_xor_self_mask(params33):
    """Encrypting the mask itself yields all-zero payload bits."""
    base = make_corner_M(params33, 2)
    rng = make_rng(5)
    pub, priv = egdp_keygen(params33, base, rng)
    import random

    probe = egdp_encrypt_add(pub, zero(params33), random.Random(99))
    mask_elem = probe.d  # B1 P B2 for that rng state
    ct = egdp_encrypt_xor(pub, codec.beta_encode(mask_elem), random.Random(99))
    assert ct.d_bits == bytes(len(ct.d_bits))


def test_egdp_xor_length_check(params33):
    base = make_corner_M(params33, 2)
    rng = make_rng(6)
    pub, priv = egdp_keygen(params33, base, rng)
    with pytest.raises(LengthMismatch):
        egdp_encrypt_xor(pub, b"x", rng)


def test_egdp_encrypt_rejects_invalid_key(params22, worked):
    m, x = worked
    c = CentralElement(params22, (1, 1)).expand()
    weak = EgdpPublicKey(params22, m, x, c * x)
    with pytest.raises(InvalidKey):
        egdp_encrypt_add(weak, zero(params22), make_rng(0))


def test_fresh_randomness(params33):
    """Distinct rng states give distinct F with high probability."""
    base = make_corner_M(params33, 2)
    rng = make_rng(7)
    pub, _ = egdp_keygen(params33, base, rng)
    s = zero(params33)
    seen = {egdp_encrypt_add(pub, s, make_rng(seed)).f.rows for seed in range(40)}
    assert len(seen) > 30
