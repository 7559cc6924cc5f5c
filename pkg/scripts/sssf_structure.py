"""Compare the optimal SSSF coefficients with the best second-order TMSV truncation.

At r = 0 with vacuum input the fidelity is the quadratic form c^T M c with
M_mn = (m+n)! / (m! n! 2^(m+n+1)), so its top eigenvector is the exact
optimum.  For r > 0 the 2-D optimizer is compared with the 1-D search over
coefficients proportional to (1, tanh s, tanh^2 s).

    python scripts/sssf_structure.py [--r 0.1 0.4 0.8 1.2] [--input coherent|fock]
"""

from __future__ import annotations

import argparse
from math import comb

import numpy as np

from cvtele.optimize import optimize_sssf, optimize_sssf_truncation
from cvtele.states import Coherent, Fock1


def exact_r0() -> tuple[float, np.ndarray]:
    m = np.array([[comb(i + j, i) / 2 ** (i + j + 1) for j in range(3)] for i in range(3)])
    vals, vecs = np.linalg.eigh(m)
    c = vecs[:, -1]
    return float(vals[-1]), c if c[0] > 0 else -c


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--r", type=float, nargs="+", default=[0.0, 0.1, 0.4, 0.8, 1.2])
    parser.add_argument("--input", choices=("coherent", "fock"), default="coherent")
    args = parser.parse_args(argv)
    inp = Coherent() if args.input == "coherent" else Fock1()

    f0, c0 = exact_r0()
    print(f"exact r=0 optimum: F={f0:.10f} c={np.round(c0, 8)} c1^2-c0c2={c0[1] ** 2 - c0[0] * c0[2]:.3e}")
    print(f"{'r':>5s} {'F_opt':>13s} {'F_trunc':>13s} {'F_opt-F_trunc':>14s} {'c1^2-c0c2':>11s}  c")
    for r in args.r:
        full = optimize_sssf(r, inp)
        trunc = optimize_sssf_truncation(r, inp)
        c = np.array([full.argmax[k] for k in ("c0", "c1", "c2")])
        gap = c[1] ** 2 - c[0] * c[2]
        print(f"{r:5.2f} {full.F_opt:13.10f} {trunc.F_opt:13.10f} {full.F_opt - trunc.F_opt:14.3e} {gap:11.3e}  {np.round(c, 6)}")


if __name__ == "__main__":
    main()
