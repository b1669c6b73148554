"""Run the stage-by-stage decomposition on the NST subdivided ladder."""

from __future__ import annotations

import argparse

from geocycles.families import subdivided_ladder_family
from geocycles.pipeline import (
    generate_gamma,
    ladder_square,
    rung_element,
    single_circuit,
    stage_lengths,
    verify_stage_geodesy,
    verify_thinness,
)
from geocycles.truncation import Hierarchy


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--stages", type=int, default=6)
    ap.add_argument("--host", type=int, default=10)
    ap.add_argument("--stream", choices=["rung", "square"], default="rung")
    args = ap.parse_args()
    h = Hierarchy(subdivided_ladder_family("nst"))
    stream = rung_element(True) if args.stream == "rung" else single_circuit(ladder_square(1, subdivided=True))
    rep = generate_gamma(h, stream, args.stages, args.host)
    for st in rep.stages:
        lens = ", ".join(f"{float(x):.3e}" for x in stage_lengths(h, st))
        print(f"stage {st.index}: {len(st.chains)} chains, bound {float(st.bound):.3e}, lengths [{lens}]")
    print(f"non-geodetic levels: {verify_stage_geodesy(h, rep)}")
    print(f"thinness of R1: {verify_thinness(h, rep, 'R1')}")


if __name__ == "__main__":
    main()
