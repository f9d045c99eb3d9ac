"""Command-line interface: ``csencrypt <subcommand> ...``.

Failures print one line ``E:<code>:<message>`` to stderr and exit with
2 (unreadable or malformed input), 3 (constraint violation) or
4 (solver divergence).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import attacks, fileio
from .errors import DivergenceError, FormatError, InvalidArgumentError
from .pipeline import decrypt_result, encrypt, keygen
from .recovery import SolverConfig
from .sensing import coherence, srm_matrix, srm_new
from .transforms.frft import centered_dft_matrix
from .transforms.wavelet import synthesis_matrix

EXIT_FORMAT = 2
EXIT_CONSTRAINT = 3
EXIT_DIVERGENCE = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(fn, path):
    try:
        return fn(path)
    except FileNotFoundError as exc:
        raise CliError(EXIT_FORMAT, f"cannot read {path}: no such file") from exc
    except OSError as exc:
        raise CliError(EXIT_FORMAT, f"cannot read {path}: {exc.strerror}") from exc


def _solver_config(args) -> SolverConfig:
    kw = {}
    if getattr(args, "lam", None) is not None:
        kw["lam"] = args.lam
    if getattr(args, "max_iters", None) is not None:
        kw["max_iters"] = args.max_iters
    return SolverConfig(**kw)


def cmd_keygen(args):
    keys = keygen(args.side, args.rate, args.seed)
    fileio.write_keys(args.out, keys)


def cmd_encrypt(args):
    image = _read(fileio.read_image, args.input)
    keys = _read(fileio.read_keys, args.keys)
    host = _read(fileio.read_image, args.host) if args.host else None
    fileio.write_cipher(args.out, encrypt(image, keys, host))


def cmd_decrypt(args):
    cipher = _read(fileio.read_cipher, args.input)
    keys = _read(fileio.read_keys, args.keys)
    host = _read(fileio.read_image, args.host) if args.host else None
    trace = []
    cb = (lambda it, f, res: trace.append((it, f, res))) if args.trace else None
    result = decrypt_result(cipher, keys, host, _solver_config(args), callback=cb)
    fileio.write_image(args.out, result.image)
    if args.trace:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "objective", "residual"])
        for it, f, res in trace:
            w.writerow([it, repr(f), repr(res)])
        with fileio.atomic_write(args.trace) as fh:
            fh.write(buf.getvalue().encode("utf-8"))


def cmd_attack(args):
    cipher = _read(fileio.read_cipher, args.input)
    if args.kind == "noise":
        out = attacks.add_noise(cipher, args.strength, args.seed)
    else:
        region = tuple(args.region) if args.region else None
        out = attacks.crop_pixels(cipher, args.strength, region)
    fileio.write_cipher(args.out, out)


def _parse_attack(text: str) -> attacks.AttackSpec:
    kind, sep, value = text.partition(":")
    if not sep:
        raise InvalidArgumentError(f"attack {text!r} must look like kind:value")
    if kind == "wrong_key" and value == "orders":
        return attacks.AttackSpec(kind, attacks.ORDER_KEY)
    try:
        return attacks.AttackSpec(kind, float(value))
    except ValueError as exc:
        raise InvalidArgumentError(f"bad attack value in {text!r}") from exc


def cmd_bench(args):
    image = _read(fileio.read_image, args.image)
    keys = _read(fileio.read_keys, args.keys)
    host = _read(fileio.read_image, args.host) if args.host else None
    if args.suite == "paper":
        suite = attacks.standard_suite(args.seed)
    else:
        suite = [_parse_attack(a) for a in args.attack or []]
    rows = attacks.run_bench(image, keys, suite, _solver_config(args), host)
    with fileio.atomic_write(args.out) as fh:
        fh.write(attacks.format_csv(rows, timing=not args.no_timing).encode("utf-8"))


def cmd_coherence(args):
    n = args.n
    if args.phi == "dft":
        phi = centered_dft_matrix(n)
    elif args.phi == "identity":
        phi = np.eye(n)
    else:
        phi = srm_matrix(srm_new(n, args.rate, args.seed, require_square=False))
    if args.psi == "identity":
        psi = np.eye(n)
    else:
        psi = synthesis_matrix(n, args.levels)
    print(f"{coherence(phi, psi):.4f}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="csencrypt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("keygen", help="derive a key file from a master seed")
    k.add_argument("--side", type=int, required=True)
    k.add_argument("--rate", required=True, help="exact rational M/N, e.g. 1/4")
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("encrypt", help="encrypt a PGM/PNG image")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--keys", required=True)
    e.add_argument("--host")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_encrypt)

    d = sub.add_parser("decrypt", help="decrypt a cipher file")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--keys", required=True)
    d.add_argument("--host")
    d.add_argument("--out", required=True)
    d.add_argument("--lambda", dest="lam", type=float)
    d.add_argument("--max-iters", type=int)
    d.add_argument("--trace", help="write iteration,objective,residual CSV here")
    d.set_defaults(func=cmd_decrypt)

    a = sub.add_parser("attack", help="apply noise or cropping to a cipher file")
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--kind", choices=("noise", "crop"), required=True)
    a.add_argument("--strength", type=float, required=True)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--region", type=int, nargs=4, metavar=("ROW", "COL", "HEIGHT", "WIDTH"))
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_attack)

    b = sub.add_parser("bench", help="run the robustness sweep and write CSV")
    b.add_argument("--image", required=True)
    b.add_argument("--keys", required=True)
    b.add_argument("--host")
    b.add_argument("--suite", choices=("paper", "custom"), default="paper")
    b.add_argument("--attack", action="append", help="custom attack kind:value, repeatable")
    b.add_argument("--seed", type=int, default=0, help="noise seed")
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--max-iters", type=int)
    b.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("coherence", help="print the mutual coherence of two bases")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--phi", choices=("dft", "identity", "srm"), default="dft")
    c.add_argument("--psi", choices=("identity", "wavelet"), default="identity")
    c.add_argument("--levels", type=int, default=1)
    c.add_argument("--rate", default="1")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_coherence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except FormatError as exc:
        code, msg = EXIT_FORMAT, str(exc)
    except InvalidArgumentError as exc:
        code, msg = EXIT_CONSTRAINT, str(exc)
    except DivergenceError as exc:
        code, msg = EXIT_DIVERGENCE, str(exc)
    except OSError as exc:
        code, msg = EXIT_FORMAT, f"{exc.filename or 'file'}: {exc.strerror or exc}"
    else:
        return 0
    print(f"E:{code}:{' '.join(msg.split())}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
