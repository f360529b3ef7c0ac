"""The alternating example: p vanishes on odd n, u vanishes on even n.

u is 2-periodic (so almost periodic) and every weighted mean of |u| is 0,
so u is also ergodic for the weight p.  The script prints the means for a
few window sizes and the inclusion length found by the translation probe.

    python scripts/alternating_example.py --N 1000
"""

import argparse
import json

from closedsums import alternating_example, ap_probe, ergodicity_profile


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=1000)
    ap.add_argument("--epsilon", type=float, default=0.1)
    args = ap.parse_args(argv)

    u, p = alternating_example(args.N)
    radii = [r for r in (1, 10, 100, 1000, 10_000) if r <= args.N]
    prof = ergodicity_profile(u, p, radii)
    probe = ap_probe(u, args.epsilon)
    out = {
        "N": args.N,
        "means": dict(zip(prof.radii, prof.means)),
        "profile_verdict": prof.verdict,
        "ap_verdict": probe.verdict,
        "inclusion_length": probe.window_len,
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
