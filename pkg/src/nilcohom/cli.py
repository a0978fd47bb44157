"""Command-line interface: ``nilcohom <command> --input manifest.json``.

Exit codes: 0 success, 1 mathematical validation failure, 2 parse/schema error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import report as rp
from .cohomology import THEORIES, Cohomology
from .deformation import SweepError
from .manifest import ManifestError, fixture_path, list_fixtures, load_manifest
from .operators import MetricError, StructureError
from .parsing import ParseError, parse_rational

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class _UsageError(Exception):
    pass


def _degrees(value: str, dim: int) -> list[int] | None:
    if value == "all":
        return None
    try:
        ks = [int(x) for x in value.split(",")]
    except ValueError:
        raise _UsageError(f"--degree: expected an integer list or 'all', got {value!r}") from None
    for k in ks:
        if not 0 <= k <= dim:
            raise _UsageError(f"--degree: {k} outside 0..{dim}")
    return ks


def _samples(values: list[str] | None) -> list[Fraction] | None:
    if not values:
        return None
    try:
        ts = [parse_rational(x) for v in values for x in v.split(",") if x.strip()]
    except ParseError as exc:
        raise _UsageError(f"--t: {exc}") from None
    # t = 0 is the reference row of every sweep
    return sorted(set(ts) | {Fraction(0)})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilcohom", description="Symplectic cohomologies of nilmanifolds from invariant forms.")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", "-i", help="manifest JSON file")
    src.add_argument("--fixture", "-f", help="name of a bundled manifest (see the 'fixtures' command)")
    common.add_argument("--json", action="store_true", help="emit canonical JSON instead of text")
    common.add_argument("--output", "-o", help="write the report to this file")
    common.add_argument("--t", dest="t", action="append",
                        help="rational samples, repeatable or comma-separated, e.g. '1,1/2,-1/3'")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("fixtures", help="list bundled manifests", parents=[common])
    sub.add_parser("validate", help="check structure, omega and J", parents=[common])
    sub.add_parser("betti", help="Betti numbers", parents=[common])
    for name in ("cohomology", "harmonic"):
        s = sub.add_parser(name, help=f"{name} dimensions and bases", parents=[common])
        s.add_argument("--theory", choices=THEORIES, default="bc")
        s.add_argument("--degree", default="all")
    sub.add_parser("hlc", help="hard Lefschetz condition", parents=[common])
    sub.add_parser("delta", help="Bott-Chern defects in both conventions", parents=[common])
    s = sub.add_parser("lefschetz", help="H^(r,s) subgroups or the decomposition check", parents=[common])
    g = s.add_mutually_exclusive_group()
    g.add_argument("--groups", action="store_true")
    g.add_argument("--check", action="store_true")
    sub.add_parser("jdecomp", help="J-invariant and J-anti-invariant subgroups", parents=[common])
    sub.add_parser("vspace", help="exact Bott-Chern harmonic 2-forms", parents=[common])
    s = sub.add_parser("inclusion", help="is every de Rham harmonic form Bott-Chern harmonic?", parents=[common])
    s.add_argument("--degree", default="all")
    sub.add_parser("deform", help="sweep the manifest's deformation families", parents=[common])
    sub.add_parser("report", help="everything", parents=[common])
    return p


def _run(args) -> dict:
    if args.command == "fixtures":
        return {"fixtures": list_fixtures()}
    if args.fixture:
        path = fixture_path(args.fixture)
    elif args.input:
        path = Path(args.input)
    else:
        raise _UsageError("one of --input or --fixture is required")
    m = load_manifest(path)
    if args.command == "validate":
        return rp.validate_report(m)
    samples = _samples(args.t)
    coh = Cohomology(m.context())
    cmd = args.command
    if cmd == "betti":
        return rp.betti_report(coh)
    if cmd == "cohomology":
        return rp.cohomology_report(coh, args.theory, _degrees(args.degree, m.dim))
    if cmd == "harmonic":
        return rp.harmonic_report(coh, args.theory, _degrees(args.degree, m.dim))
    if cmd == "hlc":
        return rp.hlc_report(coh)
    if cmd == "delta":
        return rp.delta_report(coh)
    if cmd == "lefschetz":
        return rp.lefschetz_check_report(coh) if args.check else rp.lefschetz_groups_report(coh)
    if cmd == "jdecomp":
        if coh.ctx.J is None:
            raise ManifestError("J", "jdecomp needs an almost-complex structure", "validation")
        return rp.jdecomp_report(coh)
    if cmd == "vspace":
        return rp.vspace_report(coh)
    if cmd == "inclusion":
        return rp.inclusion_report(coh, _degrees(args.degree, m.dim))
    if cmd == "deform":
        if not m.deformations:
            raise ManifestError("deformations", "the manifest has no deformation families", "validation")
        return {"families": [rp.deform_report(f, samples) for f in m.deformations]}
    if cmd == "report":
        return rp.full_report(m, samples, m.outputs or None)
    raise _UsageError(f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = _run(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID if exc.kind == "validation" else EXIT_PARSE
    except (StructureError, MetricError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = rp.dumps(result) if args.json else rp.render_text(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
