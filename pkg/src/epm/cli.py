"""Command-line surface: parameter setup, keygen, encrypt/decrypt, exchange
simulation, validation, attacks, and oracle verification.

All files are in the binary wire format (see codec); transcripts are JSON
lines of labeled base64 records.  --seed makes every command reproducible;
the EPM_SEED environment variable overrides it as a test hook.

Exit codes: 0 success, 1 usage or operational error, 2 validation failure,
3 attack not applicable / nothing recovered.
"""

from __future__ import annotations

import argparse
import base64
import json
import os
import random
import sys

from . import codec, oracle
from .attacks import (
    AttackStatus,
    attack_egdp_via_central,
    attack_sap,
    brute_force_unit_attack,
    solve_central_dp,
)
from .center import make_corner_M, make_two_entry_M
from .dp import (
    dhdp_complete,
    dhdp_init,
    egdp_decrypt_add,
    egdp_decrypt_xor,
    egdp_encrypt_add,
    egdp_encrypt_xor,
    egdp_keygen,
    egdp_validate_key,
)
from .errors import EpmError, InvalidKey, Malformed
from .params import RingParams
from .ring import commutes, random_element
from .sap import sap_decrypt, sap_encrypt, sap_keygen, sap_validate_key
from .vectors import act


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _rng(args) -> random.Random:
    seed = os.environ.get("EPM_SEED")
    if seed is not None:
        return random.Random(int(seed))
    if getattr(args, "seed", None) is not None:
        return random.Random(args.seed)
    return random.Random()


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes):
    with open(path, "wb") as fh:
        fh.write(data)


def _append_transcript(path: str, records):
    with open(path, "a", encoding="ascii") as fh:
        for label, blob in records:
            fh.write(
                json.dumps(
                    {"label": label, "data": base64.b64encode(blob).decode("ascii")}
                )
                + "\n"
            )


def _load_transcript(path: str) -> dict:
    out = {}
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            out[rec["label"]] = base64.b64decode(rec["data"])
    return out


def _transcript_value(records: dict, label: str, expect: str):
    if label not in records:
        raise Malformed(f"transcript has no {label!r} record")
    return codec.deserialize(records[label], expect=expect)


# ---------------------------------------------------------------------------
# subcommands

def cmd_params_new(args):
    params = RingParams(args.p, args.m)
    params.require_protocol_size()
    rng = _rng(args)
    if args.two_entry:
        x, y = (int(v) for v in args.two_entry.split(","))
        base = make_two_entry_M(params, x, y)
    elif args.corner_x is not None:
        base = make_corner_M(params, args.corner_x)
    else:
        x = rng.randrange(1, params.moduli[-1])
        while x % params.p == 0:
            x = rng.randrange(1, params.moduli[-1])
        if params.p == 2:
            base = make_two_entry_M(params, x, 1)
        else:
            from sympy import primitive_root

            base = make_two_entry_M(params, x, primitive_root(params.p))
    _write(args.out, codec.serialize("element", base))
    print(f"wrote base element for p={args.p}, m={args.m} to {args.out}")
    return 0


def cmd_sap_keygen(args):
    base = codec.deserialize(_read(args.params), expect="element")
    pub, priv = sap_keygen(
        base.params, base, _rng(args), max_degree=args.max_degree
    )
    _write(args.pub, codec.serialize("sap_pub", pub))
    _write(args.priv, codec.serialize("sap_priv", priv))
    print(f"wrote {args.pub} and {args.priv}")
    return 0


def cmd_sap_encrypt(args):
    pub = codec.deserialize(_read(args.pub), expect="sap_pub")
    msg = _read(args.infile)
    s = codec.pack_message_vector(msg, pub.params)
    ct = sap_encrypt(pub, s, _rng(args), max_degree=args.max_degree)
    blob = codec.serialize("sap_ct", ct)
    _write(args.out, blob)
    if args.transcript:
        _append_transcript(
            args.transcript,
            [("sap_pub", codec.serialize("sap_pub", pub)), ("sap_ct", blob)],
        )
    print(f"wrote {args.out}")
    return 0


def cmd_sap_decrypt(args):
    priv = codec.deserialize(_read(args.priv), expect="sap_priv")
    ct = codec.deserialize(_read(args.infile), expect="sap_ct")
    s = sap_decrypt(priv, ct)
    _write(args.out, codec.unpack_message_vector(s))
    print(f"wrote {args.out}")
    return 0


def cmd_sap_validate(args):
    pub = codec.deserialize(_read(args.pub), expect="sap_pub")
    report = sap_validate_key(pub)
    print(
        json.dumps(
            {
                "valid": report.valid,
                "components_coprime": report.components_coprime,
                "ratios_differ": report.ratios_differ,
            }
        )
    )
    return 0 if report.valid else 2


def cmd_dhdp_simulate(args):
    base = codec.deserialize(_read(args.params), expect="element")
    params = base.params
    rng = _rng(args)
    x = random_element(params, rng)
    while commutes(base, x):
        x = random_element(params, rng)
    alice = dhdp_init(params, x, base, "alice", rng, max_degree=args.max_degree)
    bob = dhdp_init(params, x, base, "bob", rng, max_degree=args.max_degree)
    shared_a = dhdp_complete(alice, bob.outbound)
    shared_b = dhdp_complete(bob, alice.outbound)
    match = shared_a == shared_b
    if args.transcript:
        _append_transcript(
            args.transcript,
            [
                ("M", codec.serialize("element", base)),
                ("X", codec.serialize("element", x)),
                ("G_A", codec.serialize("element", alice.outbound)),
                ("G_B", codec.serialize("element", bob.outbound)),
                ("shared_alice", codec.serialize("element", shared_a)),
                ("shared_bob", codec.serialize("element", shared_b)),
            ],
        )
    print(f"shared secrets match: {str(match).lower()}")
    return 0 if match else 2


def cmd_egdp_keygen(args):
    base = codec.deserialize(_read(args.params), expect="element")
    pub, priv = egdp_keygen(
        base.params, base, _rng(args), max_degree=args.max_degree
    )
    _write(args.pub, codec.serialize("egdp_pub", pub))
    _write(args.priv, codec.serialize("egdp_priv", priv))
    print(f"wrote {args.pub} and {args.priv}")
    return 0


def cmd_egdp_encrypt(args):
    pub = codec.deserialize(_read(args.pub), expect="egdp_pub")
    msg = _read(args.infile)
    rng = _rng(args)
    if args.mode == "add":
        s = codec.pack_message_element(msg, pub.params)
        ct = egdp_encrypt_add(pub, s, rng, max_degree=args.max_degree)
        blob = codec.serialize("egdp_ct_add", ct)
        label = "egdp_ct_add"
    else:
        ct = egdp_encrypt_xor(pub, msg, rng, max_degree=args.max_degree)
        blob = codec.serialize("egdp_ct_xor", ct)
        label = "egdp_ct_xor"
    _write(args.out, blob)
    if args.transcript:
        _append_transcript(
            args.transcript,
            [("egdp_pub", codec.serialize("egdp_pub", pub)), (label, blob)],
        )
    print(f"wrote {args.out}")
    return 0


def cmd_egdp_decrypt(args):
    priv = codec.deserialize(_read(args.priv), expect="egdp_priv")
    if args.mode == "add":
        ct = codec.deserialize(_read(args.infile), expect="egdp_ct_add")
        s = egdp_decrypt_add(priv, ct)
        _write(args.out, codec.unpack_message_element(s))
    else:
        ct = codec.deserialize(_read(args.infile), expect="egdp_ct_xor")
        _write(args.out, egdp_decrypt_xor(priv, ct))
    print(f"wrote {args.out}")
    return 0


def cmd_egdp_validate(args):
    pub = codec.deserialize(_read(args.pub), expect="egdp_pub")
    report = egdp_validate_key(pub)
    print(
        json.dumps(
            {
                "valid": report.valid,
                "qualifying_columns": [k + 1 for k in report.qualifying_columns],
                "resistant_columns": [k + 1 for k in report.resistant_columns],
            }
        )
    )
    return 0 if report.valid else 2


def _print_outcome(outcome, recovered_blob=None):
    payload = {"status": outcome.status.value}
    if recovered_blob is not None:
        payload["recovered"] = base64.b64encode(recovered_blob).decode("ascii")
    print(json.dumps(payload))
    return 0 if outcome.status is AttackStatus.RECOVERED else 3


def cmd_attack_central_sap(args):
    records = _load_transcript(args.transcript)
    pub = _transcript_value(records, "sap_pub", "sap_pub")
    ct = _transcript_value(records, "sap_ct", "sap_ct")
    outcome = attack_sap(pub, ct)
    blob = None
    if outcome.status is AttackStatus.RECOVERED:
        blob = codec.unpack_message_vector(outcome.recovered)
    return _print_outcome(outcome, blob)


def cmd_attack_central_dp(args):
    records = _load_transcript(args.transcript)
    pub = _transcript_value(records, "egdp_pub", "egdp_pub")
    if "egdp_ct_add" in records:
        ct = _transcript_value(records, "egdp_ct_add", "egdp_ct_add")
        outcome = attack_egdp_via_central(pub, ct, _rng(args))
        blob = None
        if outcome.status is AttackStatus.RECOVERED:
            blob = codec.unpack_message_element(outcome.recovered)
        return _print_outcome(outcome, blob)
    outcome = solve_central_dp(pub.x, pub.p_elem, _rng(args))
    blob = None
    if outcome.status is AttackStatus.RECOVERED:
        blob = codec.serialize("element", outcome.recovered)
    return _print_outcome(outcome, blob)


def cmd_attack_unit(args):
    records = _load_transcript(args.transcript)
    pub = _transcript_value(records, "egdp_pub", "egdp_pub")
    ct = _transcript_value(records, "egdp_ct_add", "egdp_ct_add")
    outcome = brute_force_unit_attack(pub, ct, search_bound=args.search_bound)
    blob = None
    if outcome.status is AttackStatus.RECOVERED:
        blob = codec.unpack_message_element(outcome.recovered)
    return _print_outcome(outcome, blob)


def cmd_verify_params(args):
    params = RingParams(args.p, args.m)
    rows = []
    card = oracle.ring_cardinality(params)
    enumerated = sum(1 for _ in oracle.enumerate_ring(params))
    rows.append(("cardinality", card, enumerated))
    units = oracle.brute_force_units(params)
    rows.append(("units", oracle.unit_cardinality(params), len(units)))
    center = oracle.brute_force_center(params)
    rows.append(("center", params.p**params.m, len(center)))
    ok = True
    print(f"{'quantity':<12} {'formula':>12} {'enumerated':>12} {'match':>6}")
    for name, formula, found in rows:
        match = formula == found
        ok = ok and match
        print(f"{name:<12} {formula:>12} {found:>12} {str(match).lower():>6}")
    return 0 if ok else 2


def cmd_encode(args):
    data = _read(args.infile)
    if args.pack:
        base = codec.deserialize(_read(args.params), expect="element")
        if args.pack == "vector":
            value = codec.pack_message_vector(data, base.params)
            _write(args.out, codec.serialize("vector", value))
        else:
            value = codec.pack_message_element(data, base.params)
            _write(args.out, codec.serialize("element", value))
    else:
        _write(args.out, base64.b64encode(data) + b"\n")
    return 0


def cmd_decode(args):
    data = _read(args.infile)
    if args.unpack:
        value = codec.deserialize(data, expect=args.unpack)
        if args.unpack == "vector":
            _write(args.out, codec.unpack_message_vector(value))
        else:
            _write(args.out, codec.unpack_message_element(value))
    else:
        _write(args.out, base64.b64decode(data))
    return 0


# ---------------------------------------------------------------------------

def _add_seed(p):
    p.add_argument("--seed", type=int, default=None)


def _add_degree(p):
    p.add_argument("--max-degree", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="epm", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="parameter and base-element setup")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("new")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--corner-x", type=int, default=None)
    q.add_argument("--two-entry", default=None, metavar="X,Y")
    q.add_argument("--out", required=True)
    _add_seed(q)
    q.set_defaults(func=cmd_params_new)

    p = sub.add_parser("sap", help="semigroup-action cryptosystem")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("keygen")
    q.add_argument("--params", required=True)
    q.add_argument("--pub", required=True)
    q.add_argument("--priv", required=True)
    _add_seed(q)
    _add_degree(q)
    q.set_defaults(func=cmd_sap_keygen)
    q = psub.add_parser("encrypt")
    q.add_argument("--pub", required=True)
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--transcript", default=None)
    _add_seed(q)
    _add_degree(q)
    q.set_defaults(func=cmd_sap_encrypt)
    q = psub.add_parser("decrypt")
    q.add_argument("--priv", required=True)
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sap_decrypt)
    q = psub.add_parser("validate")
    q.add_argument("--pub", required=True)
    q.set_defaults(func=cmd_sap_validate)

    p = sub.add_parser("dhdp", help="decomposition key exchange")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("simulate")
    q.add_argument("--params", required=True)
    q.add_argument("--transcript", default=None)
    _add_seed(q)
    _add_degree(q)
    q.set_defaults(func=cmd_dhdp_simulate)

    p = sub.add_parser("egdp", help="ElGamal-style decomposition cryptosystem")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("keygen")
    q.add_argument("--params", required=True)
    q.add_argument("--pub", required=True)
    q.add_argument("--priv", required=True)
    _add_seed(q)
    _add_degree(q)
    q.set_defaults(func=cmd_egdp_keygen)
    q = psub.add_parser("encrypt")
    q.add_argument("--pub", required=True)
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--mode", choices=("add", "xor"), default="add")
    q.add_argument("--transcript", default=None)
    _add_seed(q)
    _add_degree(q)
    q.set_defaults(func=cmd_egdp_encrypt)
    q = psub.add_parser("decrypt")
    q.add_argument("--priv", required=True)
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--mode", choices=("add", "xor"), default="add")
    q.set_defaults(func=cmd_egdp_decrypt)
    q = psub.add_parser("validate")
    q.add_argument("--pub", required=True)
    q.set_defaults(func=cmd_egdp_validate)

    p = sub.add_parser("attack", help="published attacks")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("central-sap")
    q.add_argument("--transcript", required=True)
    q.set_defaults(func=cmd_attack_central_sap)
    q = psub.add_parser("central-dp")
    q.add_argument("--transcript", required=True)
    _add_seed(q)
    q.set_defaults(func=cmd_attack_central_dp)
    q = psub.add_parser("unit-bruteforce")
    q.add_argument("--transcript", required=True)
    q.add_argument("--search-bound", type=int, default=1 << 20)
    q.set_defaults(func=cmd_attack_unit)

    p = sub.add_parser("verify-params", help="oracle verification tables")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_verify_params)

    p = sub.add_parser("encode", help="base64-wrap a file, or pack a message")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pack", choices=("vector", "element"), default=None)
    p.add_argument("--params", default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="base64-unwrap a file, or unpack a message")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--unpack", choices=("vector", "element"), default=None)
    p.set_defaults(func=cmd_decode)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "pack", None) and not getattr(args, "params", None):
        parser.error("--pack requires --params")
    try:
        return args.func(args)
    except InvalidKey as exc:
        sys.stderr.write(json.dumps({"code": exc.code, "detail": exc.detail}) + "\n")
        return 2
    except EpmError as exc:
        sys.stderr.write(json.dumps({"code": exc.code, "detail": exc.detail}) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"code": "io_error", "detail": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
