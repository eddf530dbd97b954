"""Dense multi-qubit Pauli-string operators.

Operators are plain complex numpy arrays. A chain of L spin-1/2 sites lives
in a 2**L dimensional Hilbert space. Site 1 is the most significant tensor
factor, so basis state k encodes the spin configuration as the L-bit binary
expansion of k with site 1 first (bit 0 = spin up).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

PAULI_SYMBOLS = "IXYZ"

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Pauli operators, e.g. ``PauliString("XIZ")``.

    ``ops`` holds one symbol per site, site 1 first.
    """

    ops: str

    def __post_init__(self):
        if not self.ops:
            raise ValueError("Pauli string must cover at least one site")
        bad = set(self.ops) - set(PAULI_SYMBOLS)
        if bad:
            raise ValueError(f"unknown Pauli symbols {sorted(bad)!r} in {self.ops!r}")

    @property
    def length(self) -> int:
        return len(self.ops)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return sum(1 for c in self.ops if c != "I")

    def __str__(self) -> str:
        return self.ops


def pauli_matrix(op: str) -> np.ndarray:
    """Exact 2x2 matrix of a single-site operator ('I', 'X', 'Y' or 'Z')."""
    try:
        return PAULI_MATRICES[op].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli symbol {op!r}") from None


def string_matrix(s: PauliString | str) -> np.ndarray:
    """Dense matrix of a Pauli string via the Kronecker product over sites.

    Site 1 is the most significant factor, so ``string_matrix("XI")`` is
    kron(X, I). The result is Hermitian, unitary and squares to the identity.
    """
    ops = s.ops if isinstance(s, PauliString) else PauliString(s).ops
    return reduce(np.kron, (PAULI_MATRICES[c] for c in ops))


def string_action(s: PauliString | str) -> tuple[np.ndarray, np.ndarray]:
    """Permutation/phase form of a Pauli string.

    Every Pauli string acts on basis states as ``h|i> = phase(i) |i ^ flip>``,
    where flip has a bit set for each X or Y site and the phase collects the
    signs of the Y and Z sites. Returns ``(src, phase)`` with
    ``src = arange(2**L) ^ flip`` so that ``(h @ psi)[j] = phase[src[j]] * psi[src[j]]``.
    """
    ops = s.ops if isinstance(s, PauliString) else PauliString(s).ops
    L = len(ops)
    dim = 1 << L
    flip = 0
    sign_mask = 0  # sites contributing (-1)**bit to the phase
    n_y = 0
    for l, c in enumerate(ops):
        bit = 1 << (L - 1 - l)  # site 1 owns the most significant bit
        if c in "XY":
            flip |= bit
        if c in "YZ":
            sign_mask |= bit
        if c == "Y":
            n_y += 1
    idx = np.arange(dim)
    signs = np.where(np.bitwise_count(idx & sign_mask) & 1, -1.0, 1.0)
    phase = (1j**n_y) * signs
    return idx ^ flip, phase.astype(complex)


def apply_string(s: PauliString | str, psi: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a state vector (or a stack of column vectors).

    Costs O(2**L) instead of building the dense matrix; equivalent to
    ``string_matrix(s) @ psi``.
    """
    src, phase = string_action(s)
    if psi.shape[0] != src.size:
        raise ValueError(f"state dimension {psi.shape[0]} != operator dimension {src.size}")
    if psi.ndim == 1:
        return phase[src] * psi[src]
    return phase[src][:, None] * psi[src, :]


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator ab - ba."""
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def expectation(obs: np.ndarray, rho: np.ndarray) -> complex:
    """Expectation value Tr(obs @ rho) of an observable in state rho.

    rho must be a unit-trace density matrix of the same dimension. For a
    Hermitian observable the imaginary part is numerical residue (below
    1e-12) and callers that know the observable is Hermitian take ``.real``.
    """
    if obs.shape != rho.shape or obs.ndim != 2:
        raise ValueError(f"incompatible shapes {obs.shape} and {rho.shape}")
    # Tr(A B) without forming the product matrix.
    return complex(np.sum(obs.T * rho))


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    """Whether max |m - m^dagger| is within tol entrywise."""
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)
