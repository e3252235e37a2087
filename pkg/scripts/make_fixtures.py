"""Write the example fixtures under fixtures/ (deterministic; safe to re-run)."""
from __future__ import annotations

import argparse
import random
from fractions import Fraction
from pathlib import Path

from semired.builtin import builtin
from semired.cyclo import CycNum
from semired.dirichlet import parse_dirichlet
from semired.fields import QQ
from semired.fixtures import extension_entries, formal_document, galois_document, pair_document
from semired.ldata import FormalAutDatum
from semired.local import ArchFactor, EpsilonDatum, InverseRoot, LocalFactor
from semired.transfer import TransferPair

QUADRATIC = parse_dirichlet("dirichlet(3; 2:-1)")

BROKEN_ASSOC = """\
# a Latin square with identity 0 that is not associative
[group]
name: loop5
row: 0 1 2 3 4
row: 1 0 3 4 2
row: 2 4 0 1 3
row: 3 2 4 0 1
row: 4 3 1 2 0

[char]
gen 1: -1

[places]
v7: q=7 frob=0

[ldata]
kind: galois
"""

DANGLING_PLACE = """\
# v13 carries a factor but is not declared in [places]
[places]
v11: q=11

[ldata]
kind: formal
name: pi
place v11: root(2,1; 0; 11)
place v13: root(2,1; 0; 13)
"""


def formal_example() -> FormalAutDatum:
    rng = random.Random(11)
    facs = {}
    for p in (7, 11, 13, 17, 19, 23):
        roots = [InverseRoot(Fraction(rng.randrange(6), 6), Fraction(rng.choice([0, 1]), 2), p) for _ in range(2)]
        facs[f"v{p}"] = LocalFactor(p, roots)
    eps = EpsilonDatum(CycNum.root(Fraction(1, 4)), 7**2 * 13)
    return FormalAutDatum.build(QQ, facs, epsilon=eps, arch=ArchFactor((Fraction(0), Fraction(1))), name="pi")


def pair_example(perturb: bool = False) -> TransferPair:
    pi = formal_example()
    pair = TransferPair.from_data(pi, pi, unknown2=("v11",))
    if perturb:
        pair.epsilon2 = EpsilonDatum(pi.epsilon.root_number * CycNum.rational(-1), pi.epsilon.conductor)
    return pair


def documents() -> dict[str, str]:
    out = {}
    for name in ("c2", "c3", "s3", "s3-three", "q8"):
        doc = galois_document(builtin(name))
        doc.add("extension", extension_entries(QQ, QUADRATIC if name != "c2" else parse_dirichlet("dirichlet(4; 3:-1)")))
        out[f"{name}.gd"] = doc.text()
    doc = formal_document(formal_example())
    doc.add("extension", extension_entries(QQ, QUADRATIC, "Q(sqrt-3)"))
    out["formal.gd"] = doc.text()
    out["pair.gd"] = pair_document(pair_example()).text()
    out["pair-bad-epsilon.gd"] = pair_document(pair_example(perturb=True)).text()
    out["broken-assoc.gd"] = BROKEN_ASSOC
    out["dangling-place.gd"] = DANGLING_PLACE
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    target = Path(args.dir)
    target.mkdir(parents=True, exist_ok=True)
    for name, text in documents().items():
        (target / name).write_text(text, encoding="utf-8")
        print(f"wrote {target / name}")


if __name__ == "__main__":
    main()
