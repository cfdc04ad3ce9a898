"""Command-line front end.

Exit codes: 0 pass, 1 a check failed, 2 usage error, 3 capability (budget) error.
"""
from __future__ import annotations

import argparse
import sys

from .cover import ConfigurationError, build_cover, cover_homology, symmetric_basis
from .orbits import CapabilityError, f2_vector, shadow_n1
from .siegel import NumericError
from .suites import SUITES_ALL, Params, canonical_json, digest, _jsonable, SCHEMA_VERSION
from .surface import standard_surface
from .symplectic import UsageError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--genus", type=int, default=4)
    p.add_argument("--beta", help="bitstring in (a1, b1, a2, b2, ...) order; default b1")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument("--out", help="write the report to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prymcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=sorted(SUITES_ALL))
    _common(verify)
    verify.add_argument("--p", type=_int_list, help="primes for the congruence character, e.g. 2,3,5")
    verify.add_argument("--ell", type=_int_list, help="moduli for the Prym closure, e.g. 2,3")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int)
    verify.add_argument("--tol", type=float)
    verify.add_argument("--timings", action="store_true", help="include elapsed_ms per check")
    graph = sub.add_parser("graph", help="export a graph")
    graph.add_argument("what", choices=["shadow-n1"])
    _common(graph)
    export = sub.add_parser("export", help="export a construction")
    export.add_argument("what", choices=["cover"])
    _common(export)
    return parser


def _params(args) -> Params:
    beta = f2_vector(args.beta) if args.beta else None
    if beta is not None and len(args.beta) != 2 * args.genus:
        raise UsageError("beta must have length 2g")
    return Params(args.genus, beta, getattr(args, "p", None), getattr(args, "ell", None),
                  getattr(args, "seed", 0), getattr(args, "trials", None), getattr(args, "tol", None))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _export(kind: str, params: Params) -> dict:
    g, beta = params.genus, params.resolved_beta()
    if kind == "shadow-n1":
        data = shadow_n1(g, beta).to_json()
    else:
        if g < 2:
            raise UsageError("genus must be at least 2")
        cover = build_cover(standard_surface(g), beta)
        hom = cover_homology(cover)
        data = {**cover.to_json(), "gram": hom.gram, "sigma": hom.sigma, "minus_basis": hom.minus_basis,
                "prym_basis": hom.prym_basis, "symmetric_basis": symmetric_basis(hom).basis}
    body = {"schema_version": SCHEMA_VERSION, "kind": kind, "parameters": params.to_json(),
            "data": _jsonable(data)}
    body["input_digest"] = digest({"kind": kind, "parameters": body["parameters"]})
    return body


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        params = _params(args)
        if args.command == "verify":
            report = SUITES_ALL[args.suite](params)
            text = (canonical_json(report.to_json(args.timings)) if args.json else report.text() + "\n")
            _emit(text, args.out)
            return EXIT_PASS if report.verdict else EXIT_FAIL
        _emit(canonical_json(_export(args.what, params)), args.out)
        return EXIT_PASS
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (UsageError, ConfigurationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_FAIL
