"""Signal Ratio sweep of the oscillating mirror pair (D = 1e4 m, x0 = 3e-7 m).

Writes the sweep CSV, lists the located extrema and, with --record-goldens,
re-derives the dense-oracle values at the expected extrema and writes them
to tests/data/ratio_sweep_goldens.json.
"""

import argparse
import json
import sys
from pathlib import Path

from mirrorpair import locate_extrema, sweep_signal_ratio
from mirrorpair.cli import load_config, sweep_table, write_csv
from mirrorpair.sweep import ORACLE_SAMPLES, omega_for_tau_over_T, signal_ratio

ROOT = Path(__file__).resolve().parent.parent
PEAKS = (0.5, 1.5, 2.5)
TROUGHS = (1.0, 2.0)


def oracle_goldens(s):
    out = {"samples_per_period": ORACLE_SAMPLES, "peaks": {}, "troughs": {}}
    for key, ratios in (("peaks", PEAKS), ("troughs", TROUGHS)):
        for r in ratios:
            p = signal_ratio(s, omega_for_tau_over_T(s.D, r), ORACLE_SAMPLES)
            out[key][repr(r)] = {"pair_amp": p.pair_amp, "single_amp": p.single_amp, "ratio": p.ratio}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "ratio_sweep.json"))
    ap.add_argument("--out", default="ratio_sweep.csv")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--record-goldens", action="store_true")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    s, block = cfg.scenario, cfg.block("sweep")
    points = sweep_signal_ratio(s, block.grid(), block.samples_per_period, threads=args.threads)
    write_csv(sweep_table(points), args.out)
    print(f"wrote {len(points)} points to {args.out}")
    for e in locate_extrema(points):
        print(f"{e.kind.value:6s} tau/T={e.tau_over_T:.4f} ratio={e.ratio:.6g}")

    if args.record_goldens:
        path = ROOT / "tests" / "data" / "ratio_sweep_goldens.json"
        path.write_text(json.dumps(oracle_goldens(s), indent=2) + "\n")
        print(f"recorded goldens in {path}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
