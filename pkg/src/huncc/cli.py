"""Command-line interface.

Exit codes: 0 success, 1 domain or I/O error, 2 usage error.  Every random
choice comes from an explicit ``--seed``.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .analysis import bitcount_example_check, rate, sweep
from .cryptosys import McElieceCipher, load_key, load_presets, get_preset, mceliece_keygen
from .errors import HunccError
from .galois import FieldSpec
from .iscode import iscode_build, iscode_from_matrix, verify_individual_secrecy_bruteforce
from .netsim import DECODE_COLUMNS, NetworkConfig, parse_scenario, run_decode_experiment, to_csv
from .pipeline import (
    Transmission,
    concat_frames,
    huncc_decode,
    huncc_encode,
    huncc_virtual_decode,
    make_config,
)

TRANSMISSION_FILE = "transmission.hnct"
VIRTUAL_FILE = "virtual.bin"


class UsageError(Exception):
    pass


def _parse_index_list(text):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def _parse_field(text):
    text = text.strip().lower().removeprefix("gf")
    text = text.strip("()")
    try:
        if "^" in text:
            p, m = text.split("^", 1)
            return FieldSpec(int(p), int(m))
        return FieldSpec(int(text), 1)
    except ValueError:
        raise UsageError(f"bad field {text!r}; use p or p^m") from None


def _parse_matrix(text):
    try:
        return np.array([[int(x) for x in row.split(",")] for row in text.split(";")], dtype=np.int64)
    except ValueError:
        raise UsageError(f"bad matrix {text!r}; use rows like 1,1;2,1") from None


def _check_paths(args):
    if args.paths < 1:
        raise UsageError("--paths must be at least 1")
    if args.encrypted < 1:
        raise UsageError("--encrypted must be at least 1: with no encrypted path there is no computational secrecy")
    if args.encrypted > args.paths:
        raise UsageError("--encrypted cannot exceed --paths")
    if args.u is not None and args.u < args.paths:
        raise UsageError("--u must be at least --paths")


def _config(args, cipher):
    return make_config(
        args.paths,
        args.encrypted,
        cipher,
        u=args.u,
        code_seed=args.code_seed,
        encrypted=_parse_index_list(args.encrypted_paths),
    )


def _read_key(path):
    return load_key(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_keygen(args, out):
    params = get_preset(args.preset)
    kp = mceliece_keygen(params, args.seed)
    base = Path(args.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{base}.pub").write_bytes(kp.public.to_bytes())
    Path(f"{base}.key").write_bytes(kp.private.to_bytes())
    print(f"preset={args.preset} k_b={params.k} n_b={params.n} t={params.t} b={params.b:g}", file=out)
    print(f"wrote {base}.pub and {base}.key", file=out)
    return 0


def cmd_encode(args, out):
    _check_paths(args)
    data = Path(args.input).read_bytes()
    if not data:
        raise UsageError("input file is empty")
    pub = _read_key(args.pub)
    cfg = _config(args, McElieceCipher(public=pub))
    trans = huncc_encode(cfg, data, args.seed)
    dest = Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    if args.virtual_single_path:
        (dest / VIRTUAL_FILE).write_bytes(concat_frames(p.data for p in trans.payloads))
    else:
        (dest / TRANSMISSION_FILE).write_bytes(trans.to_bytes())
        for p in trans.payloads:
            (dest / f"path_{p.index:02d}.bin").write_bytes(p.data)
    per_batch = cfg.c * cfg.n_b + (cfg.l - cfg.c) * cfg.k_b
    print(f"bytes={len(data)} blocks={trans.blocks} payload_bits={trans.total_payload_bits} "
          f"bits_per_block_batch={per_batch}", file=out)
    for p in trans.payloads:
        kind = "encrypted" if p.encrypted else "plain"
        print(f"path {p.index}: {kind} {p.bit_length} bits", file=out)
    return 0


def cmd_decode(args, out):
    _check_paths(args)
    priv = _read_key(args.key)
    cfg = _config(args, McElieceCipher(private=priv))
    src = Path(args.input)
    if args.virtual_single_path:
        blob = (src / VIRTUAL_FILE if src.is_dir() else src).read_bytes()
        data = huncc_virtual_decode(cfg, blob)
    else:
        raw = (src / TRANSMISSION_FILE if src.is_dir() else src).read_bytes()
        data = huncc_decode(cfg, Transmission.from_bytes(raw, cfg.l))
    Path(args.out).write_bytes(data)
    print(f"recovered {len(data)} bytes", file=out)
    return 0


def cmd_simulate(args, out):
    sc = parse_scenario(Path(args.scenario).read_text(encoding="utf-8"))
    kp = mceliece_keygen(sc.preset, sc.key_seed)
    cfg = make_config(sc.l, sc.c, McElieceCipher.from_keypair(kp), u=sc.u, code_seed=sc.code_seed)
    net = NetworkConfig(sc.l, sc.eve)
    res = run_decode_experiment(net, cfg, sc.trials, sc.seed, message_bytes=sc.nbytes)
    row = res.as_row()
    if args.csv:
        out.write(to_csv([row], DECODE_COLUMNS))
    else:
        print(f"scenario: l={sc.l} c={sc.c} u={sc.u} preset={sc.preset} eve={sc.eve.kind} "
              f"links={list(net.eve.links)}", file=out)
        for k in DECODE_COLUMNS:
            v = row[k]
            print(f"  {k}: {v:.6g}" if isinstance(v, float) else f"  {k}: {v}", file=out)
    return 0


def cmd_verify(args, out):
    if args.l < 1 or not 1 <= args.c <= args.l:
        raise UsageError("need l >= 1 and 1 <= c <= l")
    if args.field:
        fld = _parse_field(args.field)
    else:
        fld = FieldSpec(2, args.u if args.u is not None else args.l)
    w = args.l - args.c
    if args.matrix:
        g = _parse_matrix(args.matrix)
        if g.shape != (args.l, args.l):
            raise UsageError(f"--matrix must be {args.l}x{args.l}")
        code = iscode_from_matrix(fld, g, w, verify=False)
    else:
        code = iscode_build(fld, args.l, w, seed=args.seed)
    rep = verify_individual_secrecy_bruteforce(code)
    if args.csv:
        out.write("passed,messages,checks,max_tv,omega,j\n")
        om = "" if rep.witness is None else " ".join(str(i + 1) for i in rep.witness.omega)
        j = "" if rep.witness is None else rep.witness.j + 1
        out.write(f"{int(rep.passed)},{rep.messages},{rep.checks},{rep.max_tv:.6g},{om},{j}\n")
    else:
        print(rep.summary(), file=out)
    return 0 if rep.passed else 1


def cmd_sweep(args, out):
    table = sweep(args.preset, args.l, args.w)
    if args.csv:
        out.write(table.to_csv())
        return 0
    print(f"preset={args.preset} l={args.l} w={table.w}", file=out)
    print(f"{'c':>3} {'rate_exact':>10} {'rate_formula':>12} {'f_crypto':>9} {'f_IS':>7} {'pubkey_bits':>11}", file=out)
    for r in table.rows:
        print(f"{r.c:>3} {r.rate_exact:>10.6f} {r.rate_formula:>12.6f} {r.f_crypto:>9.6f} "
              f"{r.f_IS:>7.4f} {r.pubkey_bits:>11}", file=out)
    return 0


def cmd_rate(args, out):
    r = rate(args.l, args.c, args.kb, args.nb)
    if args.csv:
        out.write("l,c,k_b,n_b,rate_exact,rate_formula\n")
        out.write(f"{r.l},{r.c},{r.k_b},{r.n_b},{r.exact_rate:.6g},{r.formula_rate:.6g}\n")
        return 0
    print(f"exact rate (message bits / sent bits): {r.exact_rate:.6f}", file=out)
    print(f"mean per-path rate:                    {r.formula_rate:.6f}", file=out)
    print(f"bits per block batch: {r.message_bits} message / {r.total_bits} sent", file=out)
    return 0


def cmd_info(args, out):
    print(f"huncc {__version__} (kernel backend: {_kernels.BACKEND})", file=out)
    path = os.environ.get("HUNCC_PRESET_PATH")
    if path:
        print(f"extra presets from {path}", file=out)
    print(f"{'preset':<14} {'d':>3} {'n_b':>6} {'k_b':>6} {'t':>4} {'b':>5}", file=out)
    for name, p in load_presets().items():
        print(f"{name:<14} {p.d:>3} {p.n:>6} {p.k:>6} {p.t:>4} {p.b:>5g}", file=out)
    bc = bitcount_example_check()
    print(f"two-path totals for 2288-bit payloads: McEliece {bc.mceliece_total} bits "
          f"(rate {bc.mceliece_rate:.4f}), RSA-3072 {bc.rsa_total} bits (rate {bc.rsa_rate:.4f})", file=out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_path_flags(p):
    p.add_argument("--paths", type=int, required=True, help="number of paths l")
    p.add_argument("--encrypted", type=int, required=True, help="number of encrypted paths c")
    p.add_argument("--u", type=int, default=None, help="symbol field GF(2^u), u >= l (default l)")
    p.add_argument("--code-seed", type=int, default=0, help="seed of the secrecy code (default 0)")
    p.add_argument("--encrypted-paths", default=None, help="comma list of 1-based encrypted paths (default 1..c)")
    p.add_argument("--virtual-single-path", action="store_true", help="one framed blob instead of l payloads")


def build_parser():
    parser = argparse.ArgumentParser(prog="huncc", description="Hybrid multipath secrecy coding with McEliece.")
    parser.add_argument("--version", action="version", version=f"huncc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a McEliece key pair")
    p.add_argument("--preset", required=True)
    p.add_argument("--seed", required=True, help="up to 64 hex digits")
    p.add_argument("--out", required=True, help="basename for .pub and .key")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encode", help="encode a file across l paths")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pub", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", required=True, help="encryption seed, up to 64 hex digits")
    _add_path_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a transmission back into the file")
    p.add_argument("--in", dest="input", required=True, help="encode output directory or container file")
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True, help="output file")
    _add_path_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="run a scenario file through the network simulator")
    p.add_argument("--scenario", required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-secrecy", help="exhaustive individual-secrecy check")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--field", default=None, help="p or p^m (default 2^u)")
    p.add_argument("--matrix", default=None, help="explicit generator, rows like 1,1;2,1")
    p.add_argument("--seed", type=int, default=0, help="code seed")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="rate / security table over c = 0..l")
    p.add_argument("--preset", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--w", type=int, default=None, help="secrecy parameter for the f_IS column (default l-1)")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rate", help="information rate for given parameters")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--kb", type=int, required=True)
    p.add_argument("--nb", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("info", help="backend, presets and reference bit counts")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"huncc: error: {exc}", file=sys.stderr)
        return 2
    except HunccError as exc:
        print(f"huncc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"huncc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
