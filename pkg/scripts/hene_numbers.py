"""He-Ne numbers for the falling mirror pair: shifts, displacements, ledger.

Prints the gravity split, the delay displacement against the Planck length
and the quoted value, the solver's frequency drift for a falling pair, and
the photon-stream ledger for the run described in configs/hene.json.
"""

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from mirrorpair.cli import gravity_report, load_config
from mirrorpair.formulary import photon_stream_ledger, sql_displacement

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "hene.json"))
    ap.add_argument("--theta", type=float, default=1e-3, help="pulse interval for the SQL comparison (s)")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    s = cfg.scenario
    report = dict(gravity_report(s, cfg.block("gravity")))
    width = max(map(len, report))
    print("gravity and displacement")
    for key, value in report.items():
        print(f"  {key:<{width}}  {value:.6g}")

    ratio = report["solver_frequency_shift"] / -report["d_omega_displaced"]
    print(f"  solver drift / formula        {ratio:.10f}")
    sql = sql_displacement(args.theta, s.M)
    print(f"  SQL at Theta={args.theta:g} s         {sql:.4g} m ({sql / report['delay_displacement']:.3g}x the delay shift)")

    b = cfg.block("ledger")
    led = photon_stream_ledger(b.n_photons, s.omega0, s.D, s.M, b.M_frame, b.epsilon)
    print(f"ledger, n = {b.n_photons:.0f}")
    for f in fields(led):
        print(f"  {f.name:<{width}}  {getattr(led, f.name):.6g}")
    print(f"  {'quantum_classical_gap':<{width}}  {led.quantum_classical_gap:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
