#!/usr/bin/env python3
"""Tour of the Pauli-string layer: matrices, fast action, commutators.

Every operator in this package is a tensor product of single-site Pauli
matrices, written as a string like "XIZ" (site 0 gets X, site 2 gets Z).
The dense matrix is only ever needed for cross-checks; the working
representation applies a string to a state vector in O(2^L) using bit
tricks. This script shows both and confirms they agree.
"""

import numpy as np

from chaintomo.pauli import (
    PauliString,
    apply_string,
    commutator,
    expectation,
    string_matrix,
)


def main():
    rng = np.random.default_rng(7)

    print("== dense matrices ==")
    for label in ("X", "Z", "XY"):
        print(f"{label}:")
        print(string_matrix(PauliString(label)))

    print()
    print("== fast action vs dense multiply ==")
    for label in ("XIZ", "YYI", "IZX"):
        s = PauliString(label)
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        psi /= np.linalg.norm(psi)
        fast = apply_string(s, psi)
        dense = string_matrix(s) @ psi
        print(f"{label}: max deviation {np.max(np.abs(fast - dense)):.2e}")

    print()
    print("== commutators ==")
    # [X, Y] = 2iZ on one site; commuting strings give zero
    c = commutator(string_matrix("X"), string_matrix("Y"))
    print("[X, Y] =")
    print(c)
    c = commutator(string_matrix("XX"), string_matrix("IX"))
    print(f"[XX, IX] vanishes: {np.max(np.abs(c)) == 0.0}")

    print()
    print("== expectations in a random mixed state ==")
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    for label in ("XI", "ZZ", "YX"):
        val = expectation(string_matrix(label), rho)
        print(f"<{label}> = {val.real:+.6f}  (imaginary part {abs(val.imag):.1e})")


if __name__ == "__main__":
    main()
