"""L^2 norm of T h on growing boxes, for mean-zero Gaussian h.

Shows that the fixed-box lemma ratios hide a divergence: for gamma > 1/2 the
log-log slope of ||T h||_{L^2(box)} against the box size approaches gamma - 1/2.

    python scripts/radon_box_growth.py --boxes 10,20,40,80 --spacing 1.25
"""

import argparse

import numpy as np

from gainterm.config import Config
from gainterm.verify.estimates import radon_box_growth


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--boxes", default="10,20,40")
    p.add_argument("--spacing", type=float, default=1.25)
    p.add_argument("--gammas", default="0,0.5,0.75,1")
    p.add_argument("--seed", type=int, default=12345)
    a = p.parse_args(argv)
    boxes = tuple(float(b) for b in a.boxes.split(","))
    gammas = tuple(float(g) for g in a.gammas.split(","))
    res = radon_box_growth(Config(), np.random.default_rng(a.seed), gammas, boxes, a.spacing)
    print("h =", res["h"])
    for g, row in res["gamma"].items():
        norms = " ".join(f"{v:.4e}" for v in row["norms"])
        print(f"gamma={g:5s} norms=[{norms}] slope={row['slope']:+.3f} "
              f"(gamma - 1/2 = {row['predicted_slope_if_positive']:+.2f})")


if __name__ == "__main__":
    main()
