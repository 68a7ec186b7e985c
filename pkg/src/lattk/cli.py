"""The ``lattk`` command line, with subcommands for Gram files, the check suite and exports."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import k3
from .errors import LatticeError, UnknownCheckError
from .forms import FiniteQuadraticForm
from .lattice import Lattice
from .linalg import make
from .serialize import dumps, parse_rational, to_jsonable
from .suite import REGISTRY, Report, SweepConfig, run_all

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXPORTABLE = ("U", "E8minus", "K3", "Mukai", "PicSP", "TwistedAlg", "TX")


class UsageError(Exception):
    pass


# -- Gram files ----------------------------------------------------------------------


def parse_gram_file(text: str) -> tuple[Lattice, Optional[list[str]]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "gram" not in data or "rank" not in data:
        raise UsageError("a Gram file is a JSON object with 'rank' and 'gram'")
    rank, gram = data["rank"], data["gram"]
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 0:
        raise UsageError("'rank' must be a nonnegative integer")
    if not isinstance(gram, list) or len(gram) != rank or any(not isinstance(r, list) or len(r) != rank for r in gram):
        raise UsageError(f"'gram' must be a {rank}x{rank} array")
    try:
        rows = [[parse_rational(x) for x in r] for r in gram]
    except LatticeError as exc:
        raise UsageError(str(exc)) from None
    m = make(rows, ncols=rank)
    if not m.is_symmetric():
        raise UsageError("Gram matrix is not symmetric")
    if not m.is_integral:
        raise UsageError("Gram matrix has non-integral entries; lattices need an integral Gram matrix")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != rank or not all(isinstance(x, str) for x in labels)):
        raise UsageError("'labels' must be a list of rank strings")
    return Lattice(m), labels


def gram_file_text(l: Lattice, labels: Optional[Sequence[str]] = None) -> str:
    data = {"rank": l.rank, "gram": l.gram}
    if labels is not None:
        data["labels"] = list(labels)
    return dumps(data)


def exported_lattice(name: str) -> tuple[Lattice, Optional[tuple[str, ...]]]:
    if name in ("U", "E8minus", "K3", "Mukai"):
        return k3.standard_lattice(name), k3.basis_labels(name)
    if name == "PicSP":
        return k3.PICARD.sublattice, ("h", "s")
    b = k3.realize_bfield(k3.DEFAULT_PARAMS)
    if name == "TwistedAlg":
        return k3.twisted_generators(b).sublattice, ("2e0+2B", "h", "s", "e4")
    if name == "TX":
        return k3.transcendental_models(b).t_x.sublattice, None
    raise UsageError(f"unknown lattice {name!r}; choose from {', '.join(EXPORTABLE)}")


# -- formatting ------------------------------------------------------------------------


def group_string(orders: Sequence[int]) -> str:
    return " ⊕ ".join(f"Z/{d}" for d in orders) if orders else "trivial"


def _fmt(x) -> str:
    return str(to_jsonable(x))


def lattice_info_text(l: Lattice, labels: Optional[Sequence[str]] = None) -> str:
    pos, neg, zero = l.signature
    det = l.determinant
    lines = [
        f"rank: {l.rank}",
        f"signature: ({pos}, {neg}, {zero})",
        f"determinant: {det}",
        f"parity: {'even' if l.is_even else 'odd'}",
    ]
    if labels:
        lines.append("basis: " + ", ".join(labels))
    if not l.is_nondegenerate:
        lines.append("discriminant group: not defined (degenerate lattice)")
        return "\n".join(lines) + "\n"
    form = l.discriminant.form
    if not form.orders:
        lines.append("unimodular, trivial discriminant group")
        return "\n".join(lines) + "\n"
    lines.append(f"disc {det}, group {group_string(form.orders)}")
    lines.append(_form_table(form))
    return "\n".join(lines) + "\n"


def _form_table(form: FiniteQuadraticForm) -> str:
    out = ["generator  order  q         b-row"]
    for i, d in enumerate(form.orders):
        q = _fmt(form.q[i]) if form.has_q else "-"
        out.append(f"x{i + 1:<8} {d:<6} {q:<9} " + " ".join(_fmt(v) for v in form.b[i]))
    return "\n".join(out)


def report_text(report: Report) -> str:
    lines = [
        f"lattk suite {report.version}",
        f"Mukai pairing: {report.convention}",
        f"seed {report.config.seed}, samples {report.config.samples}, numerator bound {report.config.bound}",
        "",
    ]
    for r in report.results:
        lines.append(f"[{r.status.upper():9}] {r.name}: {r.claim}")
        if r.status == "ambiguous":
            lines.append(f"             passing readings: {', '.join(r.witness['passing_readings'])}")
        for note in r.notes:
            lines.append(f"             note: {note}")
    lines += ["", f"overall: {report.status.upper()}"]
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_lattice_info(args) -> int:
    lattice, labels = parse_gram_file(_read(args.file))
    sys.stdout.write(lattice_info_text(lattice, labels))
    return EXIT_PASS


def cmd_verify(args) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    config = SweepConfig(samples=args.samples, seed=args.seed)
    if args.check is not None and args.check not in REGISTRY:
        raise UnknownCheckError(f"unknown check {args.check!r}; known checks: {', '.join(sorted(REGISTRY))}")
    report = run_all(config, None if args.all else [args.check])
    sys.stdout.write(dumps(report) if args.format == "json" else report_text(report))
    return EXIT_PASS if report.status == "pass" else EXIT_FAIL


def cmd_export(args) -> int:
    lattice, labels = exported_lattice(args.name)
    try:
        with open(args.file, "w", encoding="utf-8") as fh:
            fh.write(gram_file_text(lattice, labels))
    except OSError as exc:
        raise UsageError(f"cannot write {args.file}: {exc.strerror}") from None
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lattk", description="Exact integral lattice toolkit and check runner.")
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", help="lattice inspection")
    lat_sub = lat.add_subparsers(dest="lattice_command", required=True)
    info = lat_sub.add_parser("info", help="print invariants of a Gram file")
    info.add_argument("file")
    info.set_defaults(func=cmd_lattice_info)

    ver = sub.add_parser("verify", help="run named checks")
    which = ver.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true", help="run every registered check")
    which.add_argument("--check", metavar="NAME", help="run a single check")
    ver.add_argument("--format", choices=("text", "json"), default="text", help="report format (default: text)")
    ver.add_argument("--seed", type=int, default=0, help="seed for B-field sampling (default: 0)")
    ver.add_argument("--samples", type=int, default=100, help="number of sampled B-fields; 0 skips the sweep checks")
    ver.set_defaults(func=cmd_verify)

    exp = sub.add_parser("export", help="write a built-in lattice as a Gram file")
    exp.add_argument("name", choices=EXPORTABLE)
    exp.add_argument("file")
    exp.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, UnknownCheckError) as exc:
        print(f"lattk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
