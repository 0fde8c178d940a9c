"""Independent oracle routes used by the tests.

Everything here recomputes quantities from first principles (explicit
index sums, the degree-4 hyperdeterminant, dense Kronecker products) so
that agreement with the package is a genuine two-route check.
"""

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)


def kron3(a, b, c):
    return np.kron(a, np.kron(b, c))


def reduce_by_summation(rho, keep):
    """Partial trace via explicit basis-index summation (slow, independent)."""
    keep = sorted(keep)
    drop = [q for q in (1, 2, 3) if q not in keep]
    dim = 2 ** len(keep)
    out = np.zeros((dim, dim), dtype=complex)

    def full_index(kept_bits, dropped_bits):
        bits = {}
        for q, b in zip(keep, kept_bits):
            bits[q] = b
        for q, b in zip(drop, dropped_bits):
            bits[q] = b
        return 4 * bits[1] + 2 * bits[2] + bits[3]

    for i in range(dim):
        row_bits = [(i >> (len(keep) - 1 - k)) & 1 for k in range(len(keep))]
        for j in range(dim):
            col_bits = [(j >> (len(keep) - 1 - k)) & 1 for k in range(len(keep))]
            for d in range(2 ** len(drop)):
                d_bits = [(d >> (len(drop) - 1 - k)) & 1 for k in range(len(drop))]
                out[i, j] += rho[full_index(row_bits, d_bits), full_index(col_bits, d_bits)]
    return out


def three_tangle_hyperdeterminant(psi):
    """Residual tripartite entanglement of any 3-qubit pure state, computed
    from the degree-4 hyperdeterminant of the amplitude tensor."""
    def a(b1, b2, b3):
        return psi[4 * b1 + 2 * b2 + b3]

    d1 = (a(0, 0, 0) ** 2 * a(1, 1, 1) ** 2 + a(0, 0, 1) ** 2 * a(1, 1, 0) ** 2
          + a(0, 1, 0) ** 2 * a(1, 0, 1) ** 2 + a(1, 0, 0) ** 2 * a(0, 1, 1) ** 2)
    d2 = (a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0)
          + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0)
          + a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1)
          + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0)
          + a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1)
          + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1))
    d3 = (a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1)
          + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0))
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def pair_correlation_invariant(rho_a, rho_b, rho_ab):
    """Trace-route value of the fifth invariant for one qubit pair."""
    return 3.0 * float(
        (np.trace(np.kron(rho_a, rho_b) @ rho_ab)
         - np.trace(np.linalg.matrix_power(rho_a, 3)) / 3.0
         - np.trace(np.linalg.matrix_power(rho_b, 3)) / 3.0).real
    )


def purity(rho):
    return float(np.trace(rho @ rho).real)


def qubit_permutation_matrix(perm):
    """8x8 operator sending qubit q of the input to slot perm[q-1] of the output."""
    mat = np.zeros((8, 8))
    for b1 in range(2):
        for b2 in range(2):
            for b3 in range(2):
                bits = (b1, b2, b3)
                src = 4 * b1 + 2 * b2 + b3
                permuted = [0, 0, 0]
                for q in range(3):
                    permuted[perm[q] - 1] = bits[q]
                dst = 4 * permuted[0] + 2 * permuted[1] + permuted[2]
                mat[dst, src] = 1.0
    return mat


def random_unit_vectors(seed, count=6):
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((count, 3))
    return vecs / np.linalg.norm(vecs, axis=1, keepdims=True)


def bell_pair_density():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())
