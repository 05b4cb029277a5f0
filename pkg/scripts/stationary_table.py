"""Quadrature against the two leading-order conventions over a (theta0, Lambda) table.

    python scripts/stationary_table.py --lambdas 100,1000,10000 --gamma 0
"""

import argparse
import math

import numpy as np

from gainterm.errors import ValidityError
from gainterm.symbol import symbol_closed_form, symbol_direct, symbol_stationary


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--lambdas", default="100,1000,10000")
    p.add_argument("--theta0", default=f"{math.pi / 3},{math.pi / 2},2.5")
    p.add_argument("--gamma", type=float, default=0.0)
    a = p.parse_args(argv)
    print("theta0,lambda,|quad-closed|,rel_err_computed,rel_err_published")
    for th0 in (float(t) for t in a.theta0.split(",")):
        for lam in (float(x) for x in a.lambdas.split(",")):
            s = math.sqrt(lam)
            x = np.array([0.0, 0.0, s])
            xi = s * np.array([math.sin(th0), 0.0, math.cos(th0)])
            q = symbol_direct(x, xi, a.gamma).value
            nrm = max(abs(q), lam ** (a.gamma - 1.0))
            try:
                comp = symbol_stationary(x, xi, a.gamma).value
                pub = symbol_stationary(x, xi, a.gamma, convention="published").value
            except ValidityError:
                continue
            cf = symbol_closed_form(x, xi, a.gamma).value
            print(f"{th0:.4f},{lam:g},{abs(q - cf):.2e},{abs(q - comp) / nrm:.2e},{abs(q - pub) / nrm:.2e}")


if __name__ == "__main__":
    main()
