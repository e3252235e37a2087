"""Line-oriented fixture documents.

A document is a sequence of ``[section]`` headers followed by ``key: value``
lines.  Sections are [group], [rep], [char], [places], [ldata],
[extension] and [pair]; anything else is rejected.  Blank lines and lines
starting with ``#`` are ignored.  Printing a parsed canonical document gives
back the same text.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclo import CycNum, format_cyc, format_rational, parse_cyc, split_top
from .dirichlet import DirichletCharacter, format_turn, parse_dirichlet, parse_turn
from .fields import QQ, AbelianField, CyclicExtensionDatum
from .groups import FiniteGroup, GroupError, from_permutations
from .ldata import FormalAutDatum, GaloisDatum, PlaceRecord
from .local import LocalFactor, parse_arch, parse_epsilon, parse_local_factor
from .reps import Representation, RepresentationError
from .transfer import TransferPair

SECTIONS = ("group", "rep", "char", "places", "ldata", "extension", "pair")


class FixtureError(ValueError):
    """Syntax errors, dangling references and invalid content."""

    code = "parse"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Section:
    name: str
    entries: list[tuple[str, str]] = field(default_factory=list)
    lines: list[int] = field(default_factory=list)

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.entries if k == key]

    def prefixed(self, prefix: str) -> list[tuple[str, str, int]]:
        """Entries ``prefix <rest>: value`` as (rest, value, line)."""
        out = []
        for (k, v), n in zip(self.entries, self.lines):
            if k.startswith(prefix + " "):
                out.append((k[len(prefix) + 1:].strip(), v, n))
        return out

    def line_of(self, key: str) -> Optional[int]:
        for (k, _), n in zip(self.entries, self.lines):
            if k == key:
                return n
        return None


@dataclass
class FixtureDocument:
    sections: dict[str, Section] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.sections

    def __getitem__(self, name: str) -> Section:
        return self.sections[name]

    def add(self, name: str, entries: list[tuple[str, str]]) -> None:
        self.sections[name] = Section(name, list(entries), [0] * len(entries))

    def text(self) -> str:
        blocks = []
        for name, sec in self.sections.items():
            body = "".join(f"{k}: {v}\n" for k, v in sec.entries)
            blocks.append(f"[{name}]\n{body}")
        return "\n".join(blocks)

    def digest(self) -> str:
        return hashlib.sha256(self.text().encode("utf-8")).hexdigest()[:16]


def parse_fixture(text: str) -> FixtureDocument:
    doc = FixtureDocument()
    current: Optional[Section] = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise FixtureError(f"malformed section header {line!r}", n)
            name = line[1:-1].strip()
            if name not in SECTIONS:
                raise FixtureError(f"unknown section [{name}]", n)
            if name in doc.sections:
                raise FixtureError(f"duplicate section [{name}]", n)
            current = Section(name)
            doc.sections[name] = current
            continue
        if current is None:
            raise FixtureError("entry outside any section", n)
        key, sep, value = line.partition(":")
        if not sep or not key.strip():
            raise FixtureError(f"expected 'key: value', got {line!r}", n)
        current.entries.append((" ".join(key.split()), value.strip()))
        current.lines.append(n)
    return doc


def print_fixture(doc: FixtureDocument) -> str:
    return doc.text()


# value syntax ------------------------------------------------------------------

def format_entry(x: CycNum) -> str:
    return format_rational(x.to_fraction()) if x.is_rational() else format_cyc(x)


def format_matrix(m) -> str:
    return "; ".join(", ".join(format_entry(x) for x in row) for row in m)


def parse_matrix(text: str):
    rows = [split_top(r, ",") for r in split_top(text, ";")]
    if len({len(r) for r in rows}) != 1 or len(rows) != len(rows[0]):
        raise ValueError("matrix must be square")
    return tuple(tuple(parse_cyc(x) for x in r) for r in rows)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _keyvals(text: str) -> dict[str, str]:
    out = {}
    for tok in text.split():
        k, sep, v = tok.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {tok!r}")
        out[k] = v
    return out


# interpretation -------------------------------------------------------------------

@dataclass
class Fixture:
    document: FixtureDocument
    group: Optional[FiniteGroup] = None
    rep: Optional[Representation] = None
    datum: Optional[object] = None
    extension: Optional[CyclicExtensionDatum] = None
    pair: Optional[TransferPair] = None


def _wrap(sec: Section, key: str, fn, *args):
    try:
        return fn(*args)
    except FixtureError:
        raise
    except (ValueError, KeyError, GroupError, RepresentationError) as exc:
        raise FixtureError(f"[{sec.name}] {key}: {exc}", sec.line_of(key)) from None


def build_group(sec: Section) -> FiniteGroup:
    name = sec.get("name", "G")
    perms, rows = sec.all("perm"), sec.all("row")
    if perms and rows:
        raise FixtureError("[group] gives both 'perm' and 'row' entries", sec.line_of("row"))
    if perms:
        gens = [_wrap(sec, "perm", _ints, p) for p in perms]
        if len({len(g) for g in gens}) != 1 or any(sorted(g) != list(range(len(g))) for g in gens):
            raise FixtureError("[group] perm entries must be permutations of 0..d-1", sec.line_of("perm"))
        return from_permutations(gens, name)
    if rows:
        table = [_wrap(sec, "row", _ints, r) for r in rows]
        return _wrap(sec, "row", FiniteGroup, table, name)
    raise FixtureError("[group] needs 'perm' or 'row' entries", sec.lines[0] if sec.lines else None)


def build_rep(doc: FixtureDocument, G: FiniteGroup) -> Representation:
    if "rep" in doc and "char" in doc:
        raise FixtureError("give either [rep] or [char], not both")
    if "rep" in doc:
        sec = doc["rep"]
        images = {}
        for rest, value, n in sec.prefixed("gen"):
            g = int(rest)
            if not 0 <= g < G.order:
                raise FixtureError(f"[rep] gen {g} is not a group element", n)
            images[g] = _wrap(sec, f"gen {rest}", parse_matrix, value)
        return _wrap(sec, "name", Representation.from_generators, G, images, sec.get("name", "rho"))
    sec = doc["char"]
    images = {}
    for rest, value, n in sec.prefixed("gen"):
        g = int(rest)
        if not 0 <= g < G.order:
            raise FixtureError(f"[char] gen {g} is not a group element", n)
        t = _wrap(sec, f"gen {rest}", parse_turn, value)
        images[g] = ((CycNum.root(t),),)
    return _wrap(sec, "name", Representation.from_generators, G, images, sec.get("name", "chi"))


def build_places(sec: Section, G: Optional[FiniteGroup]) -> list:
    out = []
    for (label, value), n in zip(sec.entries, sec.lines):
        try:
            kv = _keyvals(value)
            q = int(kv.pop("q"))
            if G is None:
                if set(kv) - {"frob"}:
                    raise ValueError(f"unexpected keys {sorted(kv)}")
                out.append((label, q))
                continue
            frob = int(kv.pop("frob"))
            inertia = frozenset(_ints(kv.pop("inertia", "")))
            mono = tuple(_ints(kv.pop("monodromy", "")))
            if kv:
                raise ValueError(f"unexpected keys {sorted(kv)}")
            out.append(PlaceRecord(label, q, frob, inertia | {G.identity}, mono))
        except (ValueError, KeyError) as exc:
            raise FixtureError(f"[places] {label}: {exc}", n) from None
    return out


def build_field(doc: FixtureDocument) -> tuple[AbelianField, Optional[CyclicExtensionDatum]]:
    if "extension" not in doc:
        return QQ, None
    sec = doc["extension"]
    gens = tuple(_wrap(sec, "base", parse_dirichlet, x).primitive() for x in sec.all("base"))
    base = AbelianField(sec.get("field", "Q" if not gens else "F"), gens)
    chi = sec.get("chi")
    if chi is None:
        return base, None
    ext = _wrap(sec, "chi", CyclicExtensionDatum, base, parse_dirichlet(chi), sec.get("label"))
    return base, ext


def _formal_factors(sec: Section, prefix: str, places: dict[str, int], allow_unknown: bool = False):
    facs: dict[str, Optional[LocalFactor]] = {}
    for label, value, n in sec.prefixed(prefix):
        if label not in places:
            raise FixtureError(f"[{sec.name}] {prefix} {label}: place not declared in [places]", n)
        if allow_unknown and value == "unknown":
            facs[label] = None
            continue
        try:
            facs[label] = parse_local_factor(value, places[label])
        except ValueError as exc:
            raise FixtureError(f"[{sec.name}] {prefix} {label}: {exc}", n) from None
    return facs


def _unstable(sec: Section, key: str, places: dict[str, int]) -> frozenset:
    labels = (sec.get(key) or "").replace(",", " ").split()
    for v in labels:
        if v not in places:
            raise FixtureError(f"[{sec.name}] {key}: place {v} not declared in [places]", sec.line_of(key))
    return frozenset(labels)


def load_fixture(text_or_doc) -> Fixture:
    doc = parse_fixture(text_or_doc) if isinstance(text_or_doc, str) else text_or_doc
    fx = Fixture(doc)
    base, fx.extension = build_field(doc)
    if "group" in doc:
        fx.group = build_group(doc["group"])
        if "rep" not in doc and "char" not in doc:
            raise FixtureError("[group] given without [rep] or [char]")
        fx.rep = build_rep(doc, fx.group)
    elif "rep" in doc or "char" in doc:
        raise FixtureError("representation given without a [group]")
    places = build_places(doc["places"], fx.group) if "places" in doc else []
    ld = doc["ldata"] if "ldata" in doc else None
    kind = ld.get("kind") if ld else None
    if kind is None:
        kind = "galois" if fx.rep is not None else ("formal" if ld else None)
    if ld is not None:
        eps = _wrap(ld, "epsilon", parse_epsilon, ld.get("epsilon")) if ld.get("epsilon") else None
        arch = _wrap(ld, "arch", parse_arch, ld.get("arch")) if ld.get("arch") else None
    else:
        eps = arch = None
    if kind == "galois":
        if fx.rep is None:
            raise FixtureError("[ldata] kind galois needs [group] and [rep]/[char]")
        name = ld.get("name") if ld else None
        try:
            fx.datum = GaloisDatum(fx.rep, places, base, arch, eps, name or fx.rep.name)
        except (GroupError, ValueError) as exc:
            raise FixtureError(f"[places] {exc}") from None
    elif kind == "formal":
        if fx.group is not None:
            places = [(pl.label, pl.q) for pl in places]
        qs = dict(places)
        facs = _formal_factors(ld, "place", qs)
        missing = sorted(set(qs) - set(facs))
        if missing:
            raise FixtureError(f"[ldata] no factor for declared places {missing}")
        flags = {v: v not in _unstable(ld, "unstable", qs) for v in facs}
        fx.datum = FormalAutDatum.build(base, facs, flags, epsilon=eps, arch=arch, name=ld.get("name", "pi"))
    elif kind is not None:
        raise FixtureError(f"[ldata] unknown kind {kind!r}", ld.line_of("kind"))
    if "pair" in doc:
        sec = doc["pair"]
        if fx.group is not None:
            places = [(pl.label, pl.q) for pl in places]
        qs = dict(places)
        s1 = _formal_factors(sec, "side1", qs, allow_unknown=True)
        s2 = _formal_factors(sec, "side2", qs, allow_unknown=True)
        for side, table in (("side1", s1), ("side2", s2)):
            missing = sorted(set(qs) - set(table))
            if missing:
                raise FixtureError(f"[pair] {side} has no entry for {missing}")
        opt = {}
        for key in ("epsilon1", "epsilon2"):
            opt[key] = _wrap(sec, key, parse_epsilon, sec.get(key)) if sec.get(key) else None
        for key in ("arch1", "arch2"):
            opt[key] = _wrap(sec, key, parse_arch, sec.get(key)) if sec.get(key) else None
        fx.pair = TransferPair(tuple(places), s1, s2, opt["epsilon1"], opt["epsilon2"],
                               opt["arch1"], opt["arch2"],
                               _unstable(sec, "unstable1", qs), _unstable(sec, "unstable2", qs))
    return fx


# emission ------------------------------------------------------------------------

def group_section(G: FiniteGroup) -> list[tuple[str, str]]:
    entries = [("name", G.name)]
    perms = getattr(G, "permutations", None)
    gens = getattr(G, "generator_labels", None)
    if perms is not None and gens is not None:
        entries += [("perm", " ".join(str(x) for x in perms[g])) for g in gens]
    else:
        entries += [("row", " ".join(str(x) for x in row)) for row in G.table]
    return entries


def _generators(G: FiniteGroup) -> list[int]:
    gens = getattr(G, "generator_labels", None)
    return list(gens) if gens is not None else G.small_generating_set()


def rep_section(rep: Representation) -> tuple[str, list[tuple[str, str]]]:
    G = rep.group
    gens = _generators(G)
    if rep.dim == 1:
        entries = [("name", rep.name)]
        for g in gens:
            entries.append((f"gen {g}", format_turn(_turn_of(rep(g)[0][0], G.element_orders[g]))))
        return "char", entries
    return "rep", [("name", rep.name)] + [(f"gen {g}", format_matrix(rep(g))) for g in gens]


def _turn_of(x: CycNum, order: int) -> Fraction:
    for j in range(order):
        if CycNum.root(Fraction(j, order)) == x:
            return Fraction(j, order)
    raise ValueError("matrix entry is not a root of unity of the element order")


def place_value(pl: PlaceRecord) -> str:
    out = f"q={pl.q} frob={pl.frobenius}"
    if len(pl.inertia) > 1:
        out += " inertia=" + ",".join(str(h) for h in sorted(pl.inertia))
    if pl.monodromy:
        out += " monodromy=" + ",".join(str(x) for x in pl.monodromy)
    return out


def extension_entries(field_: AbelianField, chi: Optional[DirichletCharacter] = None,
                      label: Optional[str] = None) -> list[tuple[str, str]]:
    entries = []
    if field_.generators:
        entries.append(("field", field_.label))
        entries += [("base", str(g)) for g in field_.generators]
    if chi is not None:
        entries.append(("chi", str(chi)))
        if label:
            entries.append(("label", label))
    return entries


def galois_document(d: GaloisDatum) -> FixtureDocument:
    doc = FixtureDocument()
    doc.add("group", group_section(d.group))
    kind, entries = rep_section(d.rep)
    doc.add(kind, entries)
    doc.add("places", [(pl.label, place_value(pl)) for pl in d.places])
    ld = [("kind", "galois"), ("name", d.name)]
    if d.epsilon is not None:
        ld.append(("epsilon", str(d.epsilon)))
    if d.arch is not None:
        ld.append(("arch", str(d.arch)))
    doc.add("ldata", ld)
    ext = extension_entries(d.field)
    if ext:
        doc.add("extension", ext)
    return doc


def formal_document(pi: FormalAutDatum) -> FixtureDocument:
    doc = FixtureDocument()
    doc.add("places", [(v, f"q={f.q}") for v, f in pi.factors])
    ld = [("kind", "formal"), ("name", pi.name)]
    ld += [(f"place {v}", str(f)) for v, f in pi.factors]
    unstable = [v for v, ok in pi.semistable if not ok]
    if unstable:
        ld.append(("unstable", " ".join(unstable)))
    if pi.epsilon is not None:
        ld.append(("epsilon", str(pi.epsilon)))
    if pi.arch is not None:
        ld.append(("arch", str(pi.arch)))
    doc.add("ldata", ld)
    ext = extension_entries(pi.field)
    if ext:
        doc.add("extension", ext)
    return doc


def pair_document(pair: TransferPair) -> FixtureDocument:
    doc = FixtureDocument()
    doc.add("places", [(v, f"q={q}") for v, q in pair.places])
    entries = []
    for side, table in (("side1", pair.side1), ("side2", pair.side2)):
        for v in pair.labels:
            f = table.get(v)
            entries.append((f"{side} {v}", "unknown" if f is None else str(f)))
    for key in ("epsilon1", "epsilon2", "arch1", "arch2"):
        val = getattr(pair, key)
        if val is not None:
            entries.append((key, str(val)))
    for key in ("unstable1", "unstable2"):
        val = getattr(pair, key)
        if val:
            entries.append((key, " ".join(sorted(val))))
    doc.add("pair", entries)
    return doc
