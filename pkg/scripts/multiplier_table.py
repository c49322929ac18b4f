"""Tabulate the linear multiplier three ways: closed form, PV quadrature, and
finite-difference linearization of the nonlinear right-hand side."""
import argparse

from stokesbubble.spectral import LinearizationConfig, verify_linearization


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--R", type=float, default=1.0)
    args = ap.parse_args()

    rows = verify_linearization(LinearizationConfig(kmax=args.kmax, gamma=args.gamma, R=args.R))
    by_k = {}
    for r in rows:
        by_k.setdefault(r.k, {})[r.method] = r
    print(f"{'k':>3} {'analytic':>12} {'quadrature':>14} {'err':>9} {'fd':>14} {'rel err':>9}")
    for k, d in by_k.items():
        q, f = d["pv_quadrature"], d["fd_linearization"]
        rel = f.abs_err / abs(f.analytic) if f.analytic else f.abs_err
        print(f"{k:3d} {q.analytic:12.6f} {q.numeric:14.10f} {q.abs_err:9.1e} {f.numeric:14.10f} {rel:9.1e}")


if __name__ == "__main__":
    main()
