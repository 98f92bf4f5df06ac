"""Sideband spectrum of light through the oscillating pair, against Bessel weights.

Builds the solver's phase trace over one oscillation period, synthesizes the
carrier-free field, and tabulates each line's power next to J_n(beta)^2.
"""

import argparse
import sys
from pathlib import Path

from mirrorpair.cli import fmt, load_config, spectrum_table
from mirrorpair.spectrum import line_spacing_over_resolution

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "spectrum.json"))
    ap.add_argument("--show", type=int, default=6, help="lines either side of the carrier to print")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    s, block = cfg.scenario, cfg.block("spectrum")
    table, beta = spectrum_table(s, block)
    print(f"modulation index beta = {fmt(beta)} rad")
    if block.resolution_bandwidth is not None:
        r = line_spacing_over_resolution(s.trajectory.Omega, block.resolution_bandwidth)
        print(f"line spacing / resolution = {r:.4g}")
    print(f"{'n':>4} {'power':>14} {'J_n^2':>14} {'|diff|':>10}")
    for n, _, power, weight, dev in table.rows:
        if abs(n) <= args.show:
            print(f"{n:>4d} {power:14.6e} {weight:14.6e} {dev:10.2e}")
    worst = max(row[4] for row in table.rows)
    print(f"largest deviation over |n| <= {block.n_max}: {worst:.3g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
