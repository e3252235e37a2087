"""Run every acceptance criterion and print one pass/FAIL line each.

Same checks as tests/test_acceptance.py, without pytest.
"""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from test_acceptance import ALL_CHECKS  # noqa: E402


def main() -> int:
    results = []
    for check in ALL_CHECKS:
        r = check()
        print(r.line(), flush=True)
        results.append(r)
    failed = [r.name for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} criteria pass")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
