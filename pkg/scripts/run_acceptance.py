"""Run the acceptance suite from the command line.

Usage:
    python scripts/run_acceptance.py [criteria ...] [--workers N]

Without arguments all eleven criteria run (roughly ten minutes); pass
indices to run a subset, e.g. ``python scripts/run_acceptance.py 1 2 5``.
"""

import argparse
import sys

from mfrisk import acceptance


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("criteria", nargs="*", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    results = acceptance.run_all(args.criteria or None, workers=args.workers)
    failed = [r.index for r in results if not r.passed]
    if failed:
        print(f"FAILED criteria: {failed}")
        return 1
    print("all criteria passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
