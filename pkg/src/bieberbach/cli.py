"""Command line interface.

Exit status is 0 when every check passes, 1 when some check fails (the
report carries the witnesses) and 2 for unusable input: unreadable or
malformed group files, bad Bott matrices, unknown catalog names and bad
flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import catalog
from . import linalg as la
from .calabi import certificate_to_dict, torus_action
from .crystal import (CrystalGroup, bott_matrix_from_bits, format_group, from_bott_matrix,
                      parse_group, validate)
from .errors import CertificateFailure, InputError, InternalInconsistency, NotInjective
from .hcc import check_to_dict, full_report, report_to_dict, report_to_text
from .topology import betti, center_rank, euler_characteristic, h1, is_orientable

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def dumps(obj) -> str:
    """Canonical JSON: fixed field order, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")

    source = _Parser(add_help=False, parents=[fmt])
    source.add_argument("file", nargs="?", help="group file ('-' for stdin)")
    source.add_argument("--catalog", metavar="NAME", help="use a built-in catalog entry")

    p = _Parser(prog="bieberbach", description="Invariants and torus actions of Bieberbach groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[source], help="check the Bieberbach conditions")
    sub.add_parser("invariants", parents=[source], help="H_1, Betti numbers, center rank")
    sub.add_parser("calabi", parents=[source], help="build and certify the torus action")
    sub.add_parser("hcc", parents=[source], help="check the Halperin-Carlsson bounds")
    rep = sub.add_parser("report", parents=[source], help="full report")
    rep.add_argument("--all", action="store_true", help="every catalog entry, in name order")

    cat = sub.add_parser("catalog", help="list or print built-in groups")
    cat_sub = cat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cat_sub.add_parser("list")
    get = cat_sub.add_parser("get")
    get.add_argument("name")

    bott = sub.add_parser("bott", parents=[fmt], help="real Bott group from a binary matrix")
    bott.add_argument("n", type=int)
    bott.add_argument("matrix", help="upper-triangle bits row by row, or a file with the matrix rows")
    bott.add_argument("--report", action="store_true", help="print the full report instead of the group")
    return p


def _load(args) -> CrystalGroup:
    if args.catalog and args.file:
        raise InputError("give either a file or --catalog, not both")
    if args.catalog:
        return catalog.get(args.catalog).group
    if not args.file:
        raise InputError("no input: give a group file or --catalog NAME")
    if args.file == "-":
        return parse_group(sys.stdin.read(), name="stdin")
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    return parse_group(text, name=os.path.splitext(os.path.basename(args.file))[0])


def _read_bott(n: int, source: str):
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            rows = [line.split() for line in fh.read().splitlines() if line.split("#", 1)[0].strip()]
        try:
            return la.as_matrix([[int(x) for x in row] for row in rows])
        except ValueError:
            raise InputError(f"{source}: Bott matrix entries must be 0 or 1") from None
    return bott_matrix_from_bits(n, source)


def _header(group: CrystalGroup) -> dict:
    return {"group_name": group.name, "dim": group.dim}


def _validation_failed(group, report, fmt, out) -> int:
    d = _header(group)
    d["validation"] = [check_to_dict(c) for c in report.checks]
    d["passed"] = False
    _emit(d, fmt, out)
    return EXIT_FAIL


def _emit(d: dict, fmt: str, out, text: Optional[str] = None) -> None:
    if fmt == "json":
        out.write(dumps(d))
    else:
        out.write((text if text is not None else _generic_text(d)) + "\n")


def _generic_text(d, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in d.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_generic_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def _cmd_validate(group, fmt, out) -> int:
    report = validate(group)
    d = _header(group)
    d["validation"] = [check_to_dict(c) for c in report.checks]
    d["passed"] = report.ok
    _emit(d, fmt, out)
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_invariants(group, fmt, out) -> int:
    report = validate(group)
    if not report.ok:
        return _validation_failed(group, report, fmt, out)
    hom = h1(group)
    b = betti(group)
    d = _header(group)
    d["h1"] = {"free_rank": hom.free_rank, "torsion": list(hom.torsion_divisors), "text": str(hom)}
    d["betti"] = list(b)
    d["center_rank"] = center_rank(group)
    d["orientable"] = is_orientable(group)
    d["euler_characteristic"] = euler_characteristic(b)
    d["passed"] = True
    _emit(d, fmt, out)
    return EXIT_OK


def _cmd_calabi(group, fmt, out) -> int:
    report = validate(group)
    if not report.ok:
        return _validation_failed(group, report, fmt, out)
    d = _header(group)
    k = h1(group).free_rank
    d["k"] = k
    if k == 0:
        d["certificate"] = None
        d["note"] = "H_1 is finite: no torus action to build"
        d["passed"] = True
        _emit(d, fmt, out)
        return EXIT_OK
    try:
        cert = torus_action(group)
    except CertificateFailure as exc:
        d["certificate"] = None
        d["failure"] = {"check": exc.check, "detail": exc.detail}
        d["passed"] = False
        _emit(d, fmt, out)
        return EXIT_FAIL
    d["certificate"] = certificate_to_dict(cert)
    d["passed"] = cert.ok
    _emit(d, fmt, out)
    return EXIT_OK if cert.ok else EXIT_FAIL


def _cmd_hcc(group, fmt, out) -> int:
    rep = full_report(group)
    full = report_to_dict(rep)
    d = _header(group)
    for key in ("k", "betti", "hcc", "splitting_subgroup", "failures", "passed"):
        d[key] = full[key]
    if rep.invariants is None:
        d["validation"] = full["validation"]
    _emit(d, fmt, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_report(group, fmt, out) -> int:
    rep = full_report(group)
    _emit(report_to_dict(rep), fmt, out, report_to_text(rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_report_all(fmt, out) -> int:
    reports = [full_report(catalog.get(name).group) for name in catalog.list()]
    passed = all(r.passed for r in reports)
    if fmt == "json":
        out.write(dumps({"reports": [report_to_dict(r) for r in reports], "passed": passed}))
    else:
        out.write("\n\n".join(report_to_text(r) for r in reports) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


_SOURCE_COMMANDS = {
    "validate": _cmd_validate,
    "invariants": _cmd_invariants,
    "calabi": _cmd_calabi,
    "hcc": _cmd_hcc,
    "report": _cmd_report,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    """Run one command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if args.command == "catalog":
            if args.action == "list":
                out.write("\n".join(catalog.list()) + "\n")
            else:
                out.write(format_group(catalog.get(args.name).group))
            return EXIT_OK
        if args.command == "bott":
            group = from_bott_matrix(_read_bott(args.n, args.matrix))
            if group.dim != args.n:
                raise InputError(f"matrix is {group.dim} x {group.dim}, expected n = {args.n}")
            if args.report:
                return _cmd_report(group, args.format, out)
            out.write(format_group(group))
            return EXIT_OK
        if args.command == "report" and args.all:
            if args.file or args.catalog:
                raise InputError("--all takes no file or --catalog")
            return _cmd_report_all(args.format, out)
        return _SOURCE_COMMANDS[args.command](_load(args), args.format, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (InternalInconsistency, NotInjective) as exc:
        err.write(f"check failed: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
