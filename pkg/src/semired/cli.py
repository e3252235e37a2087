"""Command-line interface.

Reports go to stdout and are byte-identical for identical inputs; timing
goes to stderr.  Exit codes: 0 success, 1 domain error, 2 parse error.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .builtin import BUILTIN, builtin
from .certificate import CertificateError, certify, replay
from .dirichlet import parse_prescription
from .fixtures import FixtureDocument, FixtureError, galois_document, load_fixture, parse_fixture
from .grunwald import ConflictingPrescriptions, Infeasible, solve_report
from .ldata import GaloisDatum, PlaceError, base_change, local_factor, twist_ldata
from .local import expand_local_factor
from .reduction import DescentError, ReductionError, run_reduction
from .selftest import base_change_paths_agree, run_selftest
from .transfer import TransferError, complete_missing_factor, completed_pair, verify_strong_transfer

COMMANDS = ("lfactor", "bc", "twist", "gw-solve", "reduce", "replay", "descend", "complete", "verify",
            "selftest")


class UsageError(ValueError):
    code = "usage"


class Report:
    def __init__(self, command: str, inputs: str = ""):
        self.command = command
        self.inputs = hashlib.sha256(inputs.encode("utf-8")).hexdigest()[:16]
        self.lines: list[str] = []
        self.asserts: list[tuple[str, bool]] = []

    def out(self, line: str = "") -> None:
        self.lines.append(line)

    def check(self, name: str, ok: bool) -> None:
        self.asserts.append((name, ok))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.asserts)

    def text(self) -> str:
        body = [f"command: {self.command}", f"inputs: {self.inputs}"] + self.lines
        body += [f"{'pass' if ok else 'FAIL'} {name}" for name, ok in self.asserts]
        return "\n".join(body) + "\n"


def read_document(source: str) -> FixtureDocument:
    """A fixture path, or ``builtin:NAME`` for a built-in datum."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in BUILTIN:
            raise FixtureError(f"unknown built-in fixture {name!r}; choose from {', '.join(sorted(BUILTIN))}")
        return galois_document(builtin(name))
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read {source}: {exc.strerror}") from None
    return parse_fixture(text)


def _need(value, message: str):
    if value is None:
        raise UsageError(message)
    return value


def _show_factor(rep: Report, label: str, f) -> None:
    coeffs = ", ".join(str(c) for c in expand_local_factor(f))
    rep.out(f"{label}: {f}")
    rep.out(f"  expansion: [{coeffs}]")


def cmd_lfactor(args, rep: Report) -> None:
    fx = load_fixture(read_document(_need(args.fixture, "lfactor needs a fixture")))
    d = _need(fx.datum, "fixture has no [ldata]")
    labels = [args.place] if args.place else list(d.labels)
    for v in labels:
        if not d.has_place(v):
            raise PlaceError(f"unknown place {v!r}")
        _show_factor(rep, v, local_factor(d, v))


def cmd_bc(args, rep: Report) -> None:
    fx = load_fixture(read_document(_need(args.fixture, "bc needs a fixture")))
    d = _need(fx.datum, "fixture has no [ldata]")
    ext = _need(fx.extension, "bc needs an [extension] section with a chi entry")
    out = base_change(d, ext)
    rep.out(f"extension: {ext.chi} of degree {ext.degree} over {ext.base.label}")
    for v in out.labels:
        if not args.place or v == args.place or v.startswith(args.place + "."):
            _show_factor(rep, v, local_factor(out, v))
    if isinstance(d, GaloisDatum):
        rep.check("restriction path equals character-product path at unramified places",
                  base_change_paths_agree(d, ext))


def cmd_twist(args, rep: Report) -> None:
    fx = load_fixture(read_document(_need(args.fixture, "twist needs a fixture")))
    d = _need(fx.datum, "fixture has no [ldata]")
    ext = _need(fx.extension, "twist needs an [extension] section with a chi entry")
    out = twist_ldata(d, ext.chi)
    rep.out(f"twist by {ext.chi}")
    for v in out.labels:
        if not args.place or v == args.place:
            _show_factor(rep, v, local_factor(out, v))


def cmd_gw_solve(args, rep: Report) -> None:
    if not args.at:
        raise UsageError("gw-solve needs at least one --at prescription")
    order = _need(args.order, "gw-solve needs --order")
    prs = []
    for text in args.at:
        try:
            prs.append(parse_prescription(text))
        except ValueError as exc:
            raise FixtureError(f"--at {text!r}: {exc}") from None
    res = solve_report(prs, order)
    for pr in sorted(prs, key=lambda p: p.prime):
        rep.out(f"prescription: {pr}")
    rep.out(f"character: {res.character}")
    rep.out(f"order: {res.character.order}")
    rep.out(f"auxiliary: {','.join(str(x) for x in res.auxiliary) or '-'}")
    if res.special:
        rep.out(f"special case: a0-product {res.a0_product}, repaired at {res.repaired_at}")


def cmd_reduce(args, rep: Report) -> None:
    doc = read_document(_need(args.fixture, "reduce needs a fixture"))
    cert, run = certify(doc, args.probes)
    if args.out:
        Path(args.out).write_text(cert, encoding="utf-8")
        rep.out(f"certificate: {args.out}")
    else:
        rep.lines.extend(cert.rstrip("\n").splitlines())
    for name, ok in run.checks:
        rep.check(name, ok)
    rep.check("coverage re-run agrees", run.coverage is not False)


def cmd_replay(args, rep: Report) -> None:
    path = _need(args.fixture, "replay needs a certificate path")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read {path}: {exc.strerror}") from None
    res = replay(text)
    rep.check("replay is byte-identical", res.identical)
    if not res.identical:
        rep.out(f"first difference: {res.first_difference}")
    for name, ok in res.checks:
        rep.check(name, ok)


def cmd_descend(args, rep: Report) -> None:
    fx = load_fixture(read_document(_need(args.fixture, "descend needs a fixture")))
    d = fx.datum
    if not isinstance(d, GaloisDatum):
        raise UsageError("descend needs a Galois datum")
    node, lift = run_reduction(d, budget=args.probes)
    if node.is_leaf:
        rep.out("datum is semistable; nothing to descend")
        return
    for b in node.branches:
        rep.out(f"object over {b.node.datum.field.label}: {b.character}")
    rep.out(f"matched twist: {node.descent_index}")
    good = [v for v in d.labels if d.unramified_at(v)]
    rep.check("descended object matches the Artin factors at good places",
              all(lift.factor(v) == local_factor(d, v) for v in good))


def _pair(args):
    fx = load_fixture(read_document(_need(args.fixture, f"{args.command} needs a fixture")))
    return _need(fx.pair, "fixture has no [pair] section")


def cmd_complete(args, rep: Report) -> None:
    pair = _pair(args)
    c = complete_missing_factor(pair, args.place)
    rep.out(f"completed: side {c.side} at {c.place}")
    _show_factor(rep, c.place, c.factor)
    for line in c.transcript:
        rep.out(f"  {line}")
    report = verify_strong_transfer(completed_pair(pair, c))
    rep.check("completed pair is a strong transfer", report.strong)


def cmd_verify(args, rep: Report) -> None:
    report = verify_strong_transfer(_pair(args))
    rep.lines.extend(report.lines())


def cmd_selftest(args, rep: Report) -> None:
    for name, ok in run_selftest(args.seed):
        rep.check(name, ok)


HANDLERS = {
    "lfactor": cmd_lfactor, "bc": cmd_bc, "twist": cmd_twist, "gw-solve": cmd_gw_solve,
    "reduce": cmd_reduce, "replay": cmd_replay, "descend": cmd_descend, "complete": cmd_complete,
    "verify": cmd_verify, "selftest": cmd_selftest,
}

PARSE_ERRORS = (FixtureError, CertificateError, UsageError)
DOMAIN_ERRORS = (Infeasible, ConflictingPrescriptions, ReductionError, DescentError, TransferError,
                 PlaceError, ValueError, KeyError, NotImplementedError)


def _code(exc: BaseException) -> str:
    code = getattr(exc, "code", None)
    if isinstance(code, str):
        return code
    name = type(exc).__name__
    return "".join("-" + c.lower() if c.isupper() else c for c in name).lstrip("-")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semired", description="Exact reduction to the semistable case.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("fixture", nargs="?", help="fixture or certificate path, or builtin:NAME")
    ap.add_argument("--place")
    ap.add_argument("--probes", type=int, default=3)
    ap.add_argument("--order", type=int)
    ap.add_argument("--at", action="append")
    ap.add_argument("--out")
    ap.add_argument("--seed", type=int)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = " ".join(sys.argv[1:] if argv is None else argv)
    if args.fixture and not args.fixture.startswith("builtin:") and Path(args.fixture).is_file():
        inputs += "\n" + Path(args.fixture).read_text(encoding="utf-8", errors="replace")
    rep = Report(args.command, inputs)
    start = time.perf_counter()
    try:
        HANDLERS[args.command](args, rep)
    except PARSE_ERRORS as exc:
        print(f"error[{_code(exc)}]: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error[{_code(exc)}]: {msg}", file=sys.stderr)
        return 1
    finally:
        print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    sys.stdout.write(rep.text())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
