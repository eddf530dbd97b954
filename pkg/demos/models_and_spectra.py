#!/usr/bin/env python3
"""The four model families and the steady states built from them.

A model family fixes which Pauli strings may appear in the Hamiltonian;
drawing coefficients gives one random instance. Mixing q of its
eigenstates with random probabilities gives the steady state that all
recovery routines consume: it commutes with the Hamiltonian by
construction, which is the only physics the constraints use.
"""

import numpy as np

from chaintomo.models import (
    MODEL_KINDS,
    assemble,
    enumerate_terms,
    min_length,
    param_count,
    sample_params,
)
from chaintomo.spectral import build_steady_state, eig_hermitian


def main():
    print("== families and parameter counts ==")
    for kind in MODEL_KINDS:
        L0 = min_length(kind)
        counts = ", ".join(f"L={L}: {param_count(kind, L)}" for L in range(L0, L0 + 4))
        print(f"{kind:8s} (valid from L={L0}): {counts}")

    print()
    print("== term order for h2 at L = 3 ==")
    basis = enumerate_terms("h2", 3)
    labels = [t.ops for t in basis.terms]
    print(f"{basis.n_params} terms: singles first, then nearest-neighbor pairs")
    print("  " + " ".join(labels[:9]))
    print("  " + " ".join(labels[9:]))

    print()
    print("== one random instance and its steady state ==")
    coeffs = sample_params(basis, seed=0)
    h = assemble(basis, coeffs)
    eig = eig_hermitian(h)
    print(f"Hamiltonian is {h.shape[0]} x {h.shape[1]}, "
          f"spectrum spans [{eig.eigenvalues[0]:+.4f}, {eig.eigenvalues[-1]:+.4f}]")

    state = build_steady_state(eig, q=3, selection="lowest", rng_seed=1)
    print(f"mixed the {state.q} lowest eigenstates with probabilities "
          + np.array2string(state.probs, precision=4))
    residual = np.max(np.abs(h @ state.rho - state.rho @ h))
    print(f"stationarity: max |[H, rho]| = {residual:.2e}")
    print(f"unit trace: {np.trace(state.rho).real:.12f}")

    print()
    print("== the same construction on the three-site family ==")
    basis3 = enumerate_terms("h3table", 3)
    h3 = assemble(basis3, sample_params(basis3, seed=0))
    state3 = build_steady_state(eig_hermitian(h3), q=2, selection="random", rng_seed=2)
    print(f"h3table at L=3 has {basis3.n_params} terms "
          f"(the complete traceless basis on three sites)")
    print(f"random selection drew energies {np.array2string(state3.energies, precision=4)}")


if __name__ == "__main__":
    main()
