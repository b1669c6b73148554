"""Subdivided-ladder census, epsilon tables and the rail-sum probe."""

from __future__ import annotations

import argparse

from geocycles.experiments import divergence_probe, rung_census, rung_distance, subdivided_ladder
from geocycles.families import ladder, subdivided_ladder_family
from geocycles.truncation import metric_diagnostic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=8)
    args = ap.parse_args()

    print("rung distances (unit subdivided ladder):")
    for n in range(2, 7):
        print(f"  x{n}-y{n}: {rung_distance(n)}")

    print("geodetic circuits per truncation (all must use R1):")
    for t in subdivided_ladder(args.depth)[2:]:
        rc = rung_census(t)
        print(f"  i={t.index}: {len(rc.geodetic_circuits)} geodetic of {rc.circuits} circuits, "
              f"{len(rc.missing_rung)} avoid R1, {len(rc.outer_geodetic_without_rung)} outer-edge cycles avoid R1")

    for name, f in (("ladder/nst", ladder("nst")), ("ladder/unit", ladder("unit")),
                    ("subdivided/unit", subdivided_ladder_family("unit")),
                    ("subdivided/nst", subdivided_ladder_family("nst"))):
        d = metric_diagnostic(f, args.depth)
        print(f"{name}: {d.verdict}")
        for i, iv in d.intervals:
            hi = "inf" if iv.hi is None else f"{float(iv.hi):.3e}"
            print(f"  eps_{i}: [{float(iv.lo):.3e}, {hi}]")

    f = ladder("dyadic_harmonic")
    for depth in (5, 10, 20, 30):
        print(f"rail sums to depth {depth}: lower {float(divergence_probe(f, depth)):.4f}, "
              f"upper {float(divergence_probe(f, depth, 'upper')):.10f}")


if __name__ == "__main__":
    main()
