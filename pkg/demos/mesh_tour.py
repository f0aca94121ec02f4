"""Walk through the layer-adapted mesh for one parameter pair.

Prints the transition points, the smallest and largest element in each
region, and the mesh-size diagnostics as N doubles.

    python3 demos/mesh_tour.py [--eps1 1e-8] [--eps2 1e-4] [--tau 2.5]
"""
import argparse

import numpy as np

from bakhvalov_fem import MeshParams, build_mesh, manufactured_solution, mesh_diagnostics


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps1", type=float, default=1e-8)
    ap.add_argument("--eps2", type=float, default=1e-4)
    ap.add_argument("--tau", type=float, default=2.5)
    ap.add_argument("--p", type=float, default=0.5)
    args = ap.parse_args()

    ms = manufactured_solution(args.eps1, args.eps2)
    print(f"mu0 = {ms.mu0:.6g}  (left layer width ~ {1 / ms.mu0:.2e})")
    print(f"mu1 = {ms.mu1:.6g}  (right layer width ~ {1 / ms.mu1:.2e})")
    print()
    print(f"{'N':>5} {'sigma0':>10} {'sigma1':>10} {'min h':>10} {'max h':>10} "
          f"{'sizes':>7} {'T argmax':>9} {'mu N^2 Tmax':>12}")
    for N in (16, 64, 256, 1024, 4096):
        m = build_mesh(ms.mu0, ms.mu1, MeshParams(N, args.tau, args.p))
        d = mesh_diagnostics(m)
        h = np.asarray(m.h)
        side = d.left or d.right
        t_arg = side.T_argmax if side else "-"
        t_sc = f"{side.T_scaled:.4g}" if side else "-"
        print(f"{N:5d} {m.sigma0:10.3e} {m.sigma1:10.3e} {h.min():10.3e} {h.max():10.3e} "
              f"{str(d.sizes_ok):>7} {t_arg!s:>9} {t_sc:>12}")
        for n in d.notices:
            print(f"      notice: {n}")


if __name__ == "__main__":
    main()
