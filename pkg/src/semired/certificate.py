"""Reduction certificates: stable text rendering and byte-level replay."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .dirichlet import format_turn
from .fixtures import FixtureDocument, galois_document, load_fixture, parse_fixture, place_value
from .ldata import FormalAutDatum, GaloisDatum
from .reduction import ReductionNode, ReductionRun, reduce_datum

HEADER = "semired reduction certificate v1"


def _lift_digest(lift: FormalAutDatum) -> str:
    text = "".join(f"{v}: {f}\n" for v, f in lift.factors)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _render_node(node: ReductionNode, path: str, out: list[str], root: bool) -> None:
    d = node.datum
    out.append(f"node {path}")
    out.append(f"  field: {d.field.label}")
    if not root:
        out.append("  places:")
        out.extend(f"    {pl.label}: {place_value(pl)}" for pl in d.places)
    if node.is_leaf:
        out.append("  leaf: semistable")
    else:
        out.append(f"  modulus: {node.modulus}")
        out.append(f"  T: {' '.join(node.T)}")
        out.append(f"  p: {node.p}")
        for v in node.T:
            eta = node.etas[v]
            out.append(f"  eta {v}: " + " ".join(f"{g}:{format_turn(t)}" for g, t in sorted(eta.items())))
        out.append(f"  w0: {' '.join(node.w0) if node.w0 else '-'}")
        out.append(f"  probes: {' '.join(node.probes)}")
        for msg in node.skipped:
            out.append(f"  skipped {msg}")
        for i, b in enumerate(node.branches):
            aux = ",".join(str(x) for x in b.auxiliary) or "-"
            out.append(f"  branch {b.probe}: {b.character} aux {aux} -> {path}.{i}")
        out.append(f"  descent: twist {node.descent_index}")
    out.append(f"  lift: {_lift_digest(node.lift)}")
    for i, b in enumerate(node.branches):
        _render_node(b.node, f"{path}.{i}", out, False)


def render_certificate(doc: FixtureDocument, run: ReductionRun, budget: int) -> str:
    out = [HEADER, f"fixture-digest: {doc.digest()}", f"probes: {budget}"]
    cov = {None: "not-needed", True: "equal", False: "different"}[run.coverage]
    out.append(f"coverage: {cov}")
    out.append("[fixture]")
    out.extend("  " + line if line else "" for line in doc.text().splitlines())
    out.append("[end fixture]")
    _render_node(run.node, "0", out, True)
    out.append("checks:")
    out.extend(f"  {'pass' if ok else 'FAIL'} {name}" for name, ok in run.checks)
    out.append("lift:")
    out.extend(f"  {v}: {f}" for v, f in run.lift.factors)
    return "\n".join(out) + "\n"


def certify(doc: FixtureDocument, budget: int = 3) -> tuple[str, ReductionRun]:
    fx = load_fixture(doc)
    if not isinstance(fx.datum, GaloisDatum):
        raise ValueError("reduction needs a Galois datum")
    run = reduce_datum(fx.datum, budget)
    return render_certificate(doc, run, budget), run


def certify_datum(d: GaloisDatum, budget: int = 3) -> tuple[str, ReductionRun]:
    return certify(galois_document(d), budget)


class CertificateError(ValueError):
    code = "certificate"


def split_certificate(text: str) -> tuple[FixtureDocument, int]:
    lines = text.splitlines()
    if not lines or lines[0] != HEADER:
        raise CertificateError("not a reduction certificate")
    try:
        budget = int(next(line for line in lines if line.startswith("probes: ")).split(": ")[1])
        start = lines.index("[fixture]")
        end = lines.index("[end fixture]")
    except (StopIteration, ValueError):
        raise CertificateError("certificate is missing its header fields or fixture block") from None
    body = "\n".join(line[2:] for line in lines[start + 1:end]) + "\n"
    return parse_fixture(body), budget


@dataclass
class ReplayResult:
    identical: bool
    checks: list[tuple[str, bool]] = field(default_factory=list)
    first_difference: str = ""

    @property
    def passed(self) -> bool:
        return self.identical and all(ok for _, ok in self.checks)


def replay(text: str) -> ReplayResult:
    """Re-run the embedded fixture and compare the certificate byte for byte."""
    doc, budget = split_certificate(text)
    fresh, run = certify(doc, budget)
    checks = list(run.checks)
    checks.append(("coverage", run.coverage is not False))
    if fresh == text:
        return ReplayResult(True, checks)
    old, new = text.splitlines(), fresh.splitlines()
    for i, (a, b) in enumerate(zip(old, new), start=1):
        if a != b:
            return ReplayResult(False, checks, f"line {i}: recorded {a!r}, replayed {b!r}")
    return ReplayResult(False, checks, f"length differs: recorded {len(old)} lines, replayed {len(new)}")
