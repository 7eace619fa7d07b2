"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 bit cap exceeded, 4 degenerate instance,
5 a witness check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .classifier import classify
from .factorization import DEFAULT_BUDGET, SEED, BudgetExceeded, omega_rational_bound, sigma0
from .numeric import format_rational, parse_rational, slog
from .residue import eval_sum_mod
from .sequence import (
    DEFAULT_BIT_CAP,
    IDENTICALLY_ZERO_ON_EVENS,
    BitCapExceeded,
    InstanceFormatError,
    evaluate,
    load_instance,
    normalize_even,
)
from .witness import (
    DegenerateInstance,
    FactorizationIncomplete,
    WitnessCertificate,
    WitnessInfeasible,
    build_certificate,
    omega_lower_bound,
    verify_chain,
)
from .zsigmondy import omega_divisor_bound_check

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BIT_CAP = 3
EXIT_DEGENERATE = 4
EXIT_CHECK_FAILED = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _moduli(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        m = int(part)
        if m < 2:
            raise argparse.ArgumentTypeError(f"modulus must be >= 2, got {part}")
        out.append(m)
    return out


def _omega_text(w) -> str:
    return "inf" if w == math.inf else str(w)


def _n_range(args, default_from: int = 1) -> range:
    lo = args.n_from if args.n_from is not None else default_from
    hi = args.n_to if args.n_to is not None else lo
    if hi < lo:
        raise CliError(f"empty range {lo}..{hi}", EXIT_PARSE)
    return range(lo, hi + 1)


def _emit(args, rows: list[dict], out) -> None:
    if args.format == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        json.dump(rows, out, indent=2)
        out.write("\n")


def _load(args):
    if not args.instance:
        raise CliError("--instance is required", EXIT_PARSE)
    try:
        return load_instance(args.instance)
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    except InstanceFormatError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


# -- commands -----------------------------------------------------------------------


def cmd_eval(args, out) -> int:
    S = _load(args)
    rows = []
    for n in _n_range(args):
        if args.mod:
            row = {"n": n}
            for m in args.mod:
                row[f"mod_{m}"] = eval_sum_mod(S, n, m)
        else:
            row = {"n": n, "value": format_rational(evaluate(S, n, args.bit_cap))}
        rows.append(row)
    _emit(args, rows, out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    res = classify(_load(args))
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["parity", "kind", "data"])
        for parity, comp in (("even", res.even), ("odd", res.odd)):
            data = comp.to_json()
            payload = data.get("coeffs") or data.get("evidence") or ""
            w.writerow([parity, comp.kind, json.dumps(payload) if payload else ""])
        w.writerow(["verdict", res.verdict, ""])
    else:
        json.dump(res.to_json(), out, indent=2)
        out.write("\n")
    return EXIT_OK


def _report(cert: WitnessCertificate, out) -> int:
    bounds = omega_lower_bound(cert)
    report = {
        "passed": cert.passed,
        "links": [
            {
                "kappa": link.kappa,
                "rBits": link.r.bit_length(),
                "knownPrimes": sorted(link.known_primes),
                "partial": link.partial,
                "omegaProved": b.proved,
                "omegaEmpirical": b.empirical,
            }
            for link, b in zip(cert.chain, bounds)
        ],
        "checks": [c.to_json() for c in cert.checks],
    }
    json.dump(report, out, indent=2)
    out.write("\n")
    return EXIT_OK if cert.passed else EXIT_CHECK_FAILED


def cmd_witness(args, out) -> int:
    S = _load(args)
    I = normalize_even(S)
    if I is IDENTICALLY_ZERO_ON_EVENS or I.k < 2:
        raise CliError("instance is degenerate on even indices", EXIT_DEGENERATE)
    try:
        cert = build_certificate(I, args.kappa_max, args.budget)
    except DegenerateInstance as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from exc
    except (FactorizationIncomplete, WitnessInfeasible) as exc:
        raise CliError(str(exc), EXIT_CHECK_FAILED) from exc
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(cert.to_json(), fh, indent=2)
            fh.write("\n")
    return _report(cert, out)


def cmd_verify(args, out) -> int:
    if not args.certificate:
        raise CliError("--certificate is required", EXIT_PARSE)
    try:
        with open(args.certificate) as fh:
            cert = WitnessCertificate.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CliError(f"cannot read certificate: {exc}", EXIT_PARSE) from exc
    return _report(verify_chain(cert), out)


def cmd_scan(args, out) -> int:
    S = _load(args)
    C = args.base
    rows = []
    for n in _n_range(args):
        w, exact = omega_rational_bound(evaluate(S, n, args.bit_cap), args.budget, args.seed)
        sl = slog(C, n) if n >= 2 else 0
        d = sigma0(n)
        rows.append({
            "n": n,
            "omega": _omega_text(w),
            "exact": int(exact),
            "slog": sl,
            "omega_gt_slog": int(w > sl),
            "sigma0": d,
            "omega_ge_sigma0_minus_2": int(w >= d - 2),
        })
    _emit(args, rows, out)
    return EXIT_OK


def cmd_zsigmondy(args, out) -> int:
    if args.a is None or args.b is None:
        raise CliError("--a and --b are required", EXIT_PARSE)
    lo = args.n_from if args.n_from is not None else 2
    hi = args.n_to if args.n_to is not None else 20
    try:
        report = omega_divisor_bound_check(args.a, args.b, hi, lo, args.budget, args.seed)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    if args.format == "csv":
        out.write(report.to_csv())
    else:
        json.dump(report.to_json(), out, indent=2)
        out.write("\n")
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "zsigmondy": cmd_zsigmondy,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file")
    common.add_argument("--n-from", type=_positive, dest="n_from")
    common.add_argument("--n-to", type=_positive, dest="n_to")
    common.add_argument("--mod", type=_moduli, help="comma-separated moduli")
    common.add_argument("--base", type=parse_rational, default=2, help="tetration base C for slog")
    common.add_argument("--kappa-max", type=int, default=1, dest="kappa_max")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=SEED)
    common.add_argument("--bit-cap", type=_positive, default=DEFAULT_BIT_CAP, dest="bit_cap")
    common.add_argument("--out", help="write the certificate here (witness)")
    common.add_argument("--certificate", help="certificate JSON file (verify)")
    common.add_argument("--a", type=_positive)
    common.add_argument("--b", type=_positive)

    parser = argparse.ArgumentParser(prog="superpowers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "exact or modular values s_n",
        "classify": "bounded or unbounded omega",
        "witness": "build and verify a witness chain",
        "verify": "re-verify a certificate file",
        "scan": "omega(s_n) against slog_C(n) and sigma0(n)",
        "zsigmondy": "primitive divisors of a^n - b^n",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BitCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BIT_CAP
    except BudgetExceeded as exc:
        print(f"error: factorization budget exhausted: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
