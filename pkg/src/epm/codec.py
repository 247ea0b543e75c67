"""Canonical bit-exact serialization and message packing.

The bit encoding of a ring element concatenates, row-major, fixed-width
encodings of every entry's free part: the residue itself above the
diagonal, the cofactor a[i][j] / p^(i-j) below it.  The total width t is a
pure function of (p, m), which makes the encoding injective and gives the
xor cipher mode its fixed-length masks.

Wire files carry a 4-byte magic, a kind byte, the parameters, and a
kind-specific body; decoding re-validates every invariant.
"""

from __future__ import annotations

from .center import CentralElement, HPolynomial
from .errors import (
    BadParameter,
    EpmError,
    Malformed,
    MalformedBits,
    MessageTooLong,
    InvariantViolation,
    KindMismatch,
)
from .params import RingParams
from .ring import RingElement
from .vectors import ActionVector

MAGIC = b"EPM1"

KIND_ELEMENT = 0x01
KIND_VECTOR = 0x02
KIND_SAP_PUB = 0x10
KIND_SAP_PRIV = 0x11
KIND_SAP_CT = 0x12
KIND_EGDP_PUB = 0x20
KIND_EGDP_PRIV = 0x21
KIND_EGDP_CT_ADD = 0x22
KIND_EGDP_CT_XOR = 0x23

KIND_NAMES = {
    "element": KIND_ELEMENT,
    "vector": KIND_VECTOR,
    "sap_pub": KIND_SAP_PUB,
    "sap_priv": KIND_SAP_PRIV,
    "sap_ct": KIND_SAP_CT,
    "egdp_pub": KIND_EGDP_PUB,
    "egdp_priv": KIND_EGDP_PRIV,
    "egdp_ct_add": KIND_EGDP_CT_ADD,
    "egdp_ct_xor": KIND_EGDP_CT_XOR,
}
KIND_BY_BYTE = {v: k for k, v in KIND_NAMES.items()}


class _BitWriter:
    def __init__(self):
        self.acc = 0
        self.nbits = 0

    def write(self, value: int, width: int):
        assert 0 <= value < (1 << width) if width else value == 0
        self.acc = (self.acc << width) | value
        self.nbits += width

    def to_bytes(self) -> bytes:
        pad = (-self.nbits) % 8
        total = self.nbits + pad
        return (self.acc << pad).to_bytes(total // 8, "big")


class _BitReader:
    def __init__(self, data: bytes, nbits: int):
        if len(data) != (nbits + 7) // 8:
            raise MalformedBits(
                f"expected {(nbits + 7) // 8} bytes for {nbits} bits, got {len(data)}"
            )
        self.value = int.from_bytes(data, "big")
        self.total = len(data) * 8
        self.pos = 0
        self.nbits = nbits

    def read(self, width: int) -> int:
        shift = self.total - self.pos - width
        self.pos += width
        return (self.value >> shift) & ((1 << width) - 1) if width else 0

    def finish(self):
        if self.pos != self.nbits:
            raise MalformedBits("bit stream length mismatch")
        pad = self.total - self.nbits
        if pad and self.value & ((1 << pad) - 1):
            raise MalformedBits("nonzero padding bits")


def _free_widths(params: RingParams):
    """(position, free-modulus, bit width) per entry, row-major.  The free
    part of entry (i, j) ranges over Z_{p^min(i,j)} (1-based min)."""
    m = params.m
    out = []
    for i in range(m):
        for j in range(m):
            q = params.moduli[min(i, j)]
            out.append(((i, j), q, (q - 1).bit_length()))
    return out


def beta_bit_length(params: RingParams) -> int:
    return sum(w for _, _, w in _free_widths(params))


def beta_byte_length(params: RingParams) -> int:
    return (beta_bit_length(params) + 7) // 8


def beta_encode(a: RingElement) -> bytes:
    p = a.params.p
    writer = _BitWriter()
    for (i, j), _, width in _free_widths(a.params):
        v = a.rows[i][j]
        if i > j:
            v //= p ** (i - j)
        writer.write(v, width)
    return writer.to_bytes()


def beta_decode(params: RingParams, data: bytes) -> RingElement:
    p = params.p
    m = params.m
    reader = _BitReader(data, beta_bit_length(params))
    rows = [[0] * m for _ in range(m)]
    for (i, j), q, width in _free_widths(params):
        v = reader.read(width)
        if v >= q:
            raise MalformedBits(f"digit {v} out of range at entry ({i + 1},{j + 1})")
        rows[i][j] = v if i <= j else v * p ** (i - j)
    reader.finish()
    return RingElement(params, tuple(tuple(r) for r in rows))


def _vector_widths(params: RingParams):
    return [
        (params.moduli[i], (params.moduli[i] - 1).bit_length())
        for i in range(params.m)
    ]


def vector_bit_length(params: RingParams) -> int:
    return sum(w for _, w in _vector_widths(params))


def vector_byte_length(params: RingParams) -> int:
    return (vector_bit_length(params) + 7) // 8


def vector_encode(v: ActionVector) -> bytes:
    writer = _BitWriter()
    for comp, (_, width) in zip(v.comps, _vector_widths(v.params)):
        writer.write(comp, width)
    return writer.to_bytes()


def vector_decode(params: RingParams, data: bytes) -> ActionVector:
    reader = _BitReader(data, vector_bit_length(params))
    comps = []
    for q, width in _vector_widths(params):
        v = reader.read(width)
        if v >= q:
            raise MalformedBits(f"component {v} out of range")
        comps.append(v)
    reader.finish()
    return ActionVector(params, tuple(comps))


# ---------------------------------------------------------------------------
# message packing (mixed radix)

def _pack_limits(capacity: int):
    """Largest message length (bytes) whose factor encoding fits below
    `capacity`, i.e. (256^L - 1) * (L + 1) + L < capacity."""
    max_len = -1
    length = 0
    while (256**length - 1) * (length + 1) + length < capacity:
        max_len = length
        length += 1
    return max_len


def _pack_int(data: bytes, capacity: int) -> int:
    max_len = _pack_limits(capacity)
    if len(data) > max_len:
        raise MessageTooLong(f"message exceeds capacity of {max(max_len, 0)} bytes")
    value = int.from_bytes(data, "big") if data else 0
    return value * (max_len + 1) + len(data)


def _unpack_int(n: int, capacity: int) -> bytes:
    max_len = _pack_limits(capacity)
    length = n % (max_len + 1)
    value = n // (max_len + 1)
    if value >> (8 * length):
        raise Malformed("packed value inconsistent with its length tag")
    return value.to_bytes(length, "big")


def message_vector_capacity(params: RingParams) -> int:
    cap = 1
    for q in params.moduli:
        cap *= q
    return max(_pack_limits(cap), 0)


def pack_message_vector(data: bytes, params: RingParams) -> ActionVector:
    cap = 1
    for q in params.moduli:
        cap *= q
    n = _pack_int(data, cap)
    comps = []
    for q in params.moduli:
        comps.append(n % q)
        n //= q
    return ActionVector(params, tuple(comps))


def unpack_message_vector(v: ActionVector) -> bytes:
    cap = 1
    n = 0
    for q, comp in zip(reversed(v.params.moduli), reversed(v.comps)):
        n = n * q + comp
        cap *= q
    return _unpack_int(n, cap)


def message_element_capacity(params: RingParams) -> int:
    cap = 1
    for _, q, _ in _free_widths(params):
        cap *= q
    return max(_pack_limits(cap), 0)


def pack_message_element(data: bytes, params: RingParams) -> RingElement:
    p = params.p
    m = params.m
    widths = _free_widths(params)
    cap = 1
    for _, q, _ in widths:
        cap *= q
    n = _pack_int(data, cap)
    rows = [[0] * m for _ in range(m)]
    for (i, j), q, _ in widths:
        d = n % q
        n //= q
        rows[i][j] = d if i <= j else d * p ** (i - j)
    return RingElement(params, tuple(tuple(r) for r in rows))


def unpack_message_element(a: RingElement) -> bytes:
    p = a.params.p
    widths = _free_widths(a.params)
    cap = 1
    n = 0
    for (i, j), q, _ in reversed(widths):
        v = a.rows[i][j]
        if i > j:
            v //= p ** (i - j)
        n = n * q + v
        cap *= q
    return _unpack_int(n, cap)


# ---------------------------------------------------------------------------
# wire format

def _encode_uint(n: int, width: int) -> bytes:
    return n.to_bytes(width, "big")


def _poly_encode(poly: HPolynomial) -> bytes:
    p = poly.params.p
    width = (p - 1).bit_length()
    writer = _BitWriter()
    for c in poly.coeffs:
        for d in c.digits:
            writer.write(d, width)
    return _encode_uint(len(poly.coeffs), 2) + writer.to_bytes()


def _poly_byte_length(params: RingParams, ncoeffs: int) -> int:
    width = (params.p - 1).bit_length()
    return (ncoeffs * params.m * width + 7) // 8


def _poly_decode(params: RingParams, body: bytes, offset: int):
    if len(body) < offset + 2:
        raise Malformed("truncated polynomial header")
    ncoeffs = int.from_bytes(body[offset : offset + 2], "big")
    offset += 2
    width = (params.p - 1).bit_length()
    nbytes = _poly_byte_length(params, ncoeffs)
    raw = body[offset : offset + nbytes]
    reader = _BitReader(raw, ncoeffs * params.m * width)
    coeffs = []
    for _ in range(ncoeffs):
        digits = []
        for _ in range(params.m):
            d = reader.read(width)
            if d >= params.p:
                raise InvariantViolation(f"central digit {d} out of range")
            digits.append(d)
        coeffs.append(CentralElement(params, tuple(digits)))
    reader.finish()
    return HPolynomial(params, tuple(coeffs)), offset + nbytes


def _body_encode(kind: int, value) -> tuple[RingParams, bytes]:
    from .dp import (
        EgdpCiphertextAdd,
        EgdpCiphertextXor,
        EgdpPrivateKey,
        EgdpPublicKey,
    )
    from .sap import SapCiphertext, SapPrivateKey, SapPublicKey

    if kind == KIND_ELEMENT:
        return value.params, beta_encode(value)
    if kind == KIND_VECTOR:
        return value.params, vector_encode(value)
    if kind == KIND_SAP_PUB:
        assert isinstance(value, SapPublicKey)
        return value.params, (
            beta_encode(value.base) + vector_encode(value.r) + vector_encode(value.t)
        )
    if kind == KIND_SAP_PRIV:
        assert isinstance(value, SapPrivateKey)
        return value.params, beta_encode(value.f) + _poly_encode(value.provenance)
    if kind == KIND_SAP_CT:
        assert isinstance(value, SapCiphertext)
        return value.h.params, vector_encode(value.h) + vector_encode(value.d)
    if kind == KIND_EGDP_PUB:
        assert isinstance(value, EgdpPublicKey)
        return value.params, (
            beta_encode(value.base) + beta_encode(value.x) + beta_encode(value.p_elem)
        )
    if kind == KIND_EGDP_PRIV:
        assert isinstance(value, EgdpPrivateKey)
        return value.params, (
            beta_encode(value.a1)
            + beta_encode(value.a2)
            + _poly_encode(value.provenance1)
            + _poly_encode(value.provenance2)
        )
    if kind == KIND_EGDP_CT_ADD:
        assert isinstance(value, EgdpCiphertextAdd)
        return value.f.params, beta_encode(value.f) + beta_encode(value.d)
    if kind == KIND_EGDP_CT_XOR:
        assert isinstance(value, EgdpCiphertextXor)
        params = value.f.params
        if len(value.d_bits) != beta_byte_length(params):
            raise InvariantViolation("xor payload has the wrong mask length")
        return params, beta_encode(value.f) + value.d_bits
    raise BadParameter(f"unknown kind {kind}")


def serialize(kind: str, value) -> bytes:
    if kind not in KIND_NAMES:
        raise BadParameter(f"unknown kind {kind!r}")
    kind_byte = KIND_NAMES[kind]
    params, body = _body_encode(kind_byte, value)
    p_bytes = params.p.to_bytes((params.p.bit_length() + 7) // 8, "big")
    return (
        MAGIC
        + bytes([kind_byte])
        + _encode_uint(len(p_bytes), 2)
        + p_bytes
        + _encode_uint(params.m, 2)
        + body
    )


def _element_byte_length_guarded(params: RingParams, body_len: int) -> int:
    # incremental width sum with early abort on corrupted dimensions
    total_bits = 0
    q = 1
    for k in range(1, params.m + 1):
        q *= params.p
        width = (q - 1).bit_length()
        count = 2 * (params.m - k) + 1  # entries whose free modulus is p^k
        total_bits += width * count
        if (total_bits + 7) // 8 > body_len:
            raise Malformed("body shorter than one element encoding")
    return (total_bits + 7) // 8


def _vector_byte_length_guarded(params: RingParams, body_len: int) -> int:
    total_bits = 0
    q = 1
    for _ in range(params.m):
        q *= params.p
        total_bits += (q - 1).bit_length()
        if (total_bits + 7) // 8 > body_len:
            raise Malformed("body shorter than one vector encoding")
    return (total_bits + 7) // 8


def deserialize(data: bytes, expect: str | None = None):
    from .dp import (
        EgdpCiphertextAdd,
        EgdpCiphertextXor,
        EgdpPrivateKey,
        EgdpPublicKey,
    )
    from .sap import SapCiphertext, SapPrivateKey, SapPublicKey

    if len(data) < 9 or data[:4] != MAGIC:
        raise Malformed("bad magic")
    kind_byte = data[4]
    if kind_byte not in KIND_BY_BYTE:
        raise Malformed(f"unknown kind byte 0x{kind_byte:02x}")
    kind = KIND_BY_BYTE[kind_byte]
    if expect is not None and kind != expect:
        raise KindMismatch(f"expected {expect}, found {kind}")
    plen = int.from_bytes(data[5:7], "big")
    if len(data) < 7 + plen + 2:
        raise Malformed("truncated header")
    p_bytes = data[7 : 7 + plen]
    if plen == 0 or (plen > 1 and p_bytes[0] == 0):
        raise Malformed("non-canonical prime encoding")
    p = int.from_bytes(p_bytes, "big")
    m = int.from_bytes(data[7 + plen : 7 + plen + 2], "big")
    try:
        params = RingParams(p, m)
    except EpmError as exc:
        raise InvariantViolation(f"invalid parameters: {exc.detail}") from exc
    body = data[7 + plen + 2 :]

    if kind in ("vector", "sap_ct"):
        elen = 0  # no element parts in the body
        vlen = _vector_byte_length_guarded(params, len(body))
    else:
        elen = _element_byte_length_guarded(params, len(body))
        vlen = vector_byte_length(params) if kind == "sap_pub" else 0

    def take(n, offset):
        if offset + n > len(body):
            raise Malformed("truncated body")
        return body[offset : offset + n], offset + n

    try:
        if kind == "element":
            raw, end = take(elen, 0)
            value = beta_decode(params, raw)
        elif kind == "vector":
            raw, end = take(vlen, 0)
            value = vector_decode(params, raw)
        elif kind == "sap_pub":
            raw, off = take(elen, 0)
            base = beta_decode(params, raw)
            raw, off = take(vlen, off)
            r = vector_decode(params, raw)
            raw, end = take(vlen, off)
            t = vector_decode(params, raw)
            value = SapPublicKey(params, base, r, t)
        elif kind == "sap_priv":
            raw, off = take(elen, 0)
            f = beta_decode(params, raw)
            poly, end = _poly_decode(params, body, off)
            value = SapPrivateKey(params, f, poly)
        elif kind == "sap_ct":
            raw, off = take(vlen, 0)
            h = vector_decode(params, raw)
            raw, end = take(vlen, off)
            d = vector_decode(params, raw)
            value = SapCiphertext(h, d)
        elif kind == "egdp_pub":
            raw, off = take(elen, 0)
            base = beta_decode(params, raw)
            raw, off = take(elen, off)
            x = beta_decode(params, raw)
            raw, end = take(elen, off)
            p_elem = beta_decode(params, raw)
            value = EgdpPublicKey(params, base, x, p_elem)
        elif kind == "egdp_priv":
            raw, off = take(elen, 0)
            a1 = beta_decode(params, raw)
            raw, off = take(elen, off)
            a2 = beta_decode(params, raw)
            poly1, off = _poly_decode(params, body, off)
            poly2, end = _poly_decode(params, body, off)
            value = EgdpPrivateKey(params, a1, a2, poly1, poly2)
        elif kind == "egdp_ct_add":
            raw, off = take(elen, 0)
            f = beta_decode(params, raw)
            raw, end = take(elen, off)
            d = beta_decode(params, raw)
            value = EgdpCiphertextAdd(f, d)
        else:  # egdp_ct_xor
            raw, off = take(elen, 0)
            f = beta_decode(params, raw)
            raw, end = take(elen, off)
            value = EgdpCiphertextXor(f, raw)
    except MalformedBits as exc:
        raise InvariantViolation(exc.detail) from exc
    if end != len(body):
        raise Malformed("trailing bytes after body")
    return value
