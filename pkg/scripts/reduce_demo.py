"""Reduce a built-in datum, print the tree and compare the lift with the Artin factors."""
from __future__ import annotations

import argparse

from semired.builtin import BUILTIN, builtin
from semired.reduction import reduce_datum, weak_lift_failures


def show(node, depth: int = 0) -> None:
    pad = "  " * depth
    modulus = node.modulus if node.modulus is not None else "semistable"
    print(f"{pad}{node.datum.field.label}: modulus {modulus}")
    for b in node.branches:
        print(f"{pad}  probe {b.probe} -> {b.character}")
        show(b.node, depth + 2)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name", nargs="?", default="s3", choices=sorted(BUILTIN))
    ap.add_argument("--probes", type=int, default=3)
    args = ap.parse_args()
    d = builtin(args.name)
    run = reduce_datum(d, budget=args.probes)
    show(run.node)
    bad = weak_lift_failures(d, run.lift)
    good = sum(1 for v in d.labels if d.unramified_at(v))
    print(f"lift agrees with the Artin factors at {good - len(bad)}/{good} good places")
    print(f"coverage re-run: {'agrees' if run.coverage is not False else 'DIFFERS'}")
    for name, ok in run.checks:
        print(f"{'pass' if ok else 'FAIL'} {name}")


if __name__ == "__main__":
    main()
