#!/usr/bin/env python3
"""Independent restricted Hartree-Fock reference for the helium ground state.

Solves the radial RHF problem for two electrons in a doubly occupied 1s
orbital: finite differences for u(r) = r*R(r) on a uniform grid, dense
tridiagonal diagonalization, Hartree potential from cumulative trapezoid
integrals, and linear potential mixing. The total energy printed here is
frozen into the Rust acceptance tests as the helium reference value.

Usage: python3 tools/helium_hf_oracle.py [n_points] [r_max]
"""

import sys

import numpy as np
from scipy.linalg import eigh_tridiagonal


def solve_helium_rhf(n=24000, r_max=30.0, z=2.0, max_iter=300, tol=1e-13):
    # Interior nodes r_i = i*h, i = 1..n-1, with u(0) = u(r_max) = 0.
    h = r_max / n
    r = h * np.arange(1, n)

    def hartree(u_sq):
        # v_H(r) = (1/r) int_0^r u^2 ds + int_r^inf u^2 / s ds
        inner = np.concatenate(([0.0], np.cumsum(0.5 * (u_sq[1:] + u_sq[:-1]) * h)))
        inner += 0.5 * u_sq[0] * h  # leading cell, u^2 ~ r^2 near 0
        over_r = u_sq / r
        tail = np.concatenate(([0.0], np.cumsum(0.5 * (over_r[1:] + over_r[:-1]) * h)))
        outer = tail[-1] - tail
        return inner / r + outer

    v_h = np.zeros(n - 1)
    eps = 0.0
    u_sq = None
    for it in range(max_iter):
        v_eff = -z / r + v_h
        diag = 1.0 / h**2 + v_eff
        off = np.full(n - 2, -0.5 / h**2)
        w, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
        eps_new = w[0]
        u = vecs[:, 0]
        u /= np.sqrt(np.trapezoid(u * u, dx=h))
        u_sq = u * u
        v_h_new = hartree(u_sq)
        if it > 0 and abs(eps_new - eps) < tol:
            eps = eps_new
            v_h = v_h_new
            break
        eps = eps_new
        v_h = 0.5 * v_h + 0.5 * v_h_new
    else:
        raise RuntimeError("helium RHF did not converge")

    # E = 2*eps - J with J = int v_H[u^2] u^2 dr (each eigenvalue counts
    # the electron-electron repulsion once, so it is double-counted in 2*eps).
    j_coulomb = np.trapezoid(hartree(u_sq) * u_sq, dx=h)
    e_total = 2.0 * eps - j_coulomb
    return eps, j_coulomb, e_total


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 24000
    r_max = float(sys.argv[2]) if len(sys.argv) > 2 else 30.0
    eps, j, e = solve_helium_rhf(n=n, r_max=r_max)
    print(f"grid points        : {n}")
    print(f"r_max              : {r_max}")
    print(f"orbital eigenvalue : {eps:.8f} Ha")
    print(f"Coulomb integral J : {j:.8f} Ha")
    print(f"total RHF energy   : {e:.8f} Ha")


if __name__ == "__main__":
    main()
