"""Self-convergence study behind the numeric acceptance bounds.

Prints two tables: integrator error against rtol on the algebraic solution
(w = sqrt z on [0.01, 1]) and the series/ODE zeta deviation on [0.01, 0.25]
against the truncation order at sigma = 3/10, stilde = 1.  Pass --json for
machine-readable output.
"""
import argparse
import json
import math

from painleve_blocks.numeric import convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    study = convergence_study()
    if args.json:
        print(json.dumps(study, indent=2))
        return
    print("algebraic solution, DOP853")
    print(f"{'rtol':>8} {'max dev':>12} {'nfev':>6} {'slope':>6}")
    prev = None
    for row in study["algebraic"]:
        slope = ""
        if prev:
            slope = f"{math.log(row['max_deviation'] / prev['max_deviation']) / math.log(row['rtol'] / prev['rtol']):.2f}"
        print(f"{row['rtol']:>8.0e} {row['max_deviation']:>12.3e} {row['nfev']:>6} {slope:>6}")
        prev = row
    print()
    print("series vs ODE, sigma=3/10, stilde=1, rtol=1e-13")
    print(f"{'order':>5} {'zeta dev':>12} {'trunc est':>12}")
    for row in study["series"]:
        print(f"{row['order']:>5} {row['zeta_rel_dev']:>12.3e} {row['truncation_estimate']:>12.3e}")


if __name__ == "__main__":
    main()
