"""Square-mean ergodic profiles of x(t) = sigma(t) Z in both forms.

The squared form averages E||x(t)||^2 and the root form averages its square
root.  For sigma(t) = exp(-|t|) with Lebesgue measure the squared mean over
[-r, r] is (1 - exp(-2r)) / (2r) and the root mean is (1 - exp(-r)) / r, so
both profiles decay like 1/r and should reach the same verdict.

    python scripts/square_mean_equivalence.py --K 20000 --r-max 200
"""

import argparse
import json
import math

import numpy as np

from closedsums import Grid, MeasureDensity, equivalence_check, scaled_gaussian


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--K", type=int, default=20_000)
    ap.add_argument("--r-max", type=float, default=200.0)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--radii", default="1,10,100,200")
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("--envelope", choices=("exp", "sin"), default="exp")
    args = ap.parse_args(argv)

    radii = [float(r) for r in args.radii.split(",")]
    grid = Grid.line(args.r_max, args.step)
    sigma = (lambda t: np.exp(-np.abs(t))) if args.envelope == "exp" else np.sin
    x = scaled_gaussian(grid, sigma, args.K, seed=args.seed)
    rep = equivalence_check(x, MeasureDensity.lebesgue(), radii, strict=False)

    out = rep.to_dict()
    if args.envelope == "exp":
        out["closed_form_squared"] = [(1 - math.exp(-2 * r)) / (2 * r) for r in radii]
        out["closed_form_root"] = [(1 - math.exp(-r)) / r for r in radii]
    print(json.dumps(out, indent=2, default=float))


if __name__ == "__main__":
    main()
