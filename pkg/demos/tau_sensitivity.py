"""Show how the energy error depends on the grading parameter.

The mesh depends on tau and p only through tau/p, and the printed errors of
Table 3 sit at tau/p = 5 rather than the documented 4.  This sweeps tau at
p = 0.5 for one cell and prints the ratio to the printed value.

    python3 demos/tau_sensitivity.py [--eps1 1e-8] [--n 256]
"""
import argparse

import numpy as np

from bakhvalov_fem import load_reference
from bakhvalov_fem.study import solve_cell


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps1", type=float, default=1e-8, choices=(1e-8, 1e-10))
    ap.add_argument("--n", type=int, default=256)
    args = ap.parse_args()

    ref = load_reference(3)
    printed = ref.entry(args.eps1, args.n)
    print(f"Table 3, eps1 = {args.eps1:g}, eps2 = {ref.eps2:g}, N = {args.n}: printed {printed.printed}")
    print(f"{'tau':>5} {'e_energy':>11} {'ratio':>7}")
    for tau in np.arange(1.5, 3.51, 0.25):
        r = solve_cell(args.eps1, ref.eps2, args.n, tau=float(tau))
        print(f"{tau:5.2f} {r.e_energy:11.4e} {r.e_energy / printed.value:7.3f}")


if __name__ == "__main__":
    main()
