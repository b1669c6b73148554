"""Peripheral-cycle span check and length search on small 3-connected graphs."""

from __future__ import annotations

import argparse

from geocycles.experiments import peripheral_span, search_peripheral_lengths, verify_scheme
from geocycles.generators import cube, k4, prism, wheel


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=200)
    args = ap.parse_args()
    for name, g in (("K4", k4()), ("W5", wheel(5)), ("prism", prism()), ("cube", cube())):
        s = peripheral_span(g)
        res = search_peripheral_lengths(g, budget=args.budget, seed=args.seed)
        status = f"found after {res.evaluations} evaluations" if res.found else \
            f"budget exhausted, best {res.best_violations} violations"
        print(f"{name}: {s.peripheral} peripheral cycles, rank {s.rank}/{s.cyclomatic}; search {status}")
        if res.found:
            print(f"  scheme re-verifies: {verify_scheme(g, res.scheme)}")


if __name__ == "__main__":
    main()
