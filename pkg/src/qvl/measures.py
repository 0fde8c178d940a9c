"""Entanglement invariants of the canonical three-qubit state.

Closed forms for the local-unitary invariants (marginal purities I1-I3,
three-tangle I4, two-body correlation invariant I5), the pairwise
concurrences E1-E4 with the companion invariant E5, and the Wootters
procedure for two-qubit mixed states.  Every closed form is re-verified
at call time against the corresponding density-matrix computation, so a
transcription slip cannot go unnoticed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .state import StateParams, density, make_state, partial_trace

_ORACLE_TOL = 1e-10

_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_SYY = np.kron(_SIGMA_Y, _SIGMA_Y)

# eigenvalues of a unit-trace PSD matrix below this are rounding noise
_EIG_FLOOR = 1e-14


@dataclass(frozen=True)
class WoottersResult:
    """Nonincreasing spectrum Q and the concurrence max(0, Q1-Q2-Q3-Q4)."""

    q: tuple[float, float, float, float]
    concurrence: float


@dataclass(frozen=True)
class MeasureSet:
    """All invariants of one state.

    tau_* are squared concurrences (tau_1_2 = E1**2 etc.); C1..C3 are the
    one-versus-rest bipartition concurrences and CT2 their squared total.
    """

    I1: float
    I2: float
    I3: float
    I4: float
    I5: float
    E1: float
    E2: float
    E3: float
    E4: float
    E5: float
    tau_1_23: float
    tau_1_2: float
    tau_1_3: float
    tau_2_3: float
    C1: float
    C2: float
    C3: float
    CT2: float

    def as_dict(self) -> dict:
        return {
            "I1": self.I1, "I2": self.I2, "I3": self.I3, "I4": self.I4, "I5": self.I5,
            "E1": self.E1, "E2": self.E2, "E3": self.E3, "E4": self.E4, "E5": self.E5,
            "tau_1_23": self.tau_1_23, "tau_1_2": self.tau_1_2,
            "tau_1_3": self.tau_1_3, "tau_2_3": self.tau_2_3,
            "C1": self.C1, "C2": self.C2, "C3": self.C3, "CT2": self.CT2,
        }


def _marginals(params: StateParams):
    rho = density(make_state(params))
    singles = {q: partial_trace(rho, (q,)) for q in (1, 2, 3)}
    pairs = {p: partial_trace(rho, p) for p in ((1, 2), (2, 3), (1, 3))}
    return singles, pairs


def purity_invariants(params: StateParams) -> tuple[float, float, float]:
    """Marginal purities (Tr rho_1^2, Tr rho_2^2, Tr rho_3^2) in closed form."""
    l0, l1, l2, l3, l4 = params.lambdas
    e = np.exp(1j * params.phi)
    i1 = l0**4 + 2 * l0**2 * l1**2 + (1 - l0**2) ** 2
    i2 = (1 - l3**2 - l4**2) ** 2 + 2 * abs(l2 * l4 + l1 * l3 * e) ** 2 + (l3**2 + l4**2) ** 2
    i3 = (1 - l2**2 - l4**2) ** 2 + 2 * abs(l3 * l4 + l1 * l2 * e) ** 2 + (l2**2 + l4**2) ** 2
    singles, _ = _marginals(params)
    for closed, q in zip((i1, i2, i3), (1, 2, 3)):
        direct = float(np.trace(singles[q] @ singles[q]).real)
        if abs(closed - direct) > _ORACLE_TOL:
            raise NumericalError(
                f"purity closed form for qubit {q} deviates from trace by {abs(closed - direct)}"
            )
    return float(i1), float(i2), float(i3)


def wootters_concurrence(rho2q: np.ndarray) -> WoottersResult:
    """Wootters spectrum and concurrence of a two-qubit density matrix.

    Q are the square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy), sorted descending.  They are computed as
    the singular values of sqrt(rho) (sy x sy) sqrt(rho)*, which is the
    same spectrum evaluated through a Hermitian factorization (the direct
    non-Hermitian eigenproblem loses ~1e-8 of accuracy on the rank-2
    reduced states this package produces).

    Raises:
        NumericalError: if rho has an eigenvalue below -1e-8.
    """
    rho = np.asarray(rho2q, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise DomainError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    w, v = np.linalg.eigh(rho)
    if w.min() < -1e-8:
        raise NumericalError(f"density matrix has negative eigenvalue {w.min()}")
    w = np.where(w < _EIG_FLOOR, 0.0, w)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    q = np.linalg.svd(sqrt_rho @ _SYY @ sqrt_rho.conj(), compute_uv=False)
    conc = max(0.0, q[0] - q[1] - q[2] - q[3])
    return WoottersResult(q=tuple(float(x) for x in q), concurrence=float(conc))


def tangles(params: StateParams) -> tuple[float, float, float, float, float]:
    """Squared-concurrence tangles (tau_1|23, tau_1|2, tau_1|3, tau_2|3)
    and the three-tangle I4 = tau_1|23 - tau_1|2 - tau_1|3 = 4 l0^2 l4^2."""
    l0, l1, l2, l3, l4 = params.lambdas
    e = np.exp(1j * params.phi)
    tau_1_23 = 4 * l0**2 * (1 - l0**2 - l1**2)
    tau_1_2 = 4 * l0**2 * l3**2
    tau_1_3 = 4 * l0**2 * l2**2
    tau_2_3 = 4 * abs(l1 * l4 * e - l2 * l3) ** 2
    i4 = 4 * l0**2 * l4**2
    if abs(i4 - (tau_1_23 - tau_1_2 - tau_1_3)) > 1e-12:
        raise NumericalError("three-tangle does not match the tangle difference")
    return float(tau_1_23), float(tau_1_2), float(tau_1_3), float(tau_2_3), float(i4)


def _pair_invariant(rho_a, rho_b, rho_ab) -> float:
    # closed-form I5 carries a factor 3 relative to this trace combination
    val = (
        np.trace(np.kron(rho_a, rho_b) @ rho_ab)
        - np.trace(rho_a @ rho_a @ rho_a) / 3.0
        - np.trace(rho_b @ rho_b @ rho_b) / 3.0
    )
    return 3.0 * float(val.real)


def correlation_invariant(params: StateParams) -> float:
    """The fifth invariant I5 built from two-body reduced-matrix correlations."""
    l0, l1, l2, l3, l4 = params.lambdas
    e = np.exp(1j * params.phi)
    i5 = (
        1
        + 3 * l0**2 * (l0**2 - 1 + l1**2 - l1**2 * l4**2 + l2**2 * l3**2)
        - 3 * (1 - l0**2) * abs(l1 * l4 * e - l2 * l3) ** 2
    )
    singles, pairs = _marginals(params)
    for (a, b) in ((1, 2), (2, 3), (1, 3)):
        direct = _pair_invariant(singles[a], singles[b], pairs[(a, b)])
        if abs(i5 - direct) > _ORACLE_TOL:
            raise NumericalError(
                f"I5 closed form deviates from pair ({a},{b}) traces by {abs(i5 - direct)}"
            )
    return float(i5)


def measure_set(params: StateParams) -> MeasureSet:
    """Compute the full invariant set of one state.

    The three two-body correlation identities

        Tr((rho_a x rho_b) rho_ab) - Tr rho_a^2 - Tr rho_b^2
            = E5 - 1 + (E_pair^2 + E4^2)/4

    (E_pair = E1, E3, E2 for pairs (1,2), (2,3), (1,3)) are verified as
    postconditions before the result is returned.
    """
    l0, l1, l2, l3, l4 = params.lambdas
    e = np.exp(1j * params.phi)
    i1, i2, i3 = purity_invariants(params)
    tau_1_23, tau_1_2, tau_1_3, tau_2_3, i4 = tangles(params)
    i5 = correlation_invariant(params)
    e1 = 2 * l0 * l3
    e2 = 2 * l0 * l2
    e3 = 2 * abs(l1 * l4 * e - l2 * l3)
    e4 = 2 * l0 * l4
    e5 = l0**2 * (l2**2 * l3**2 - l1**2 * l4**2 + abs(l1 * l4 * e - l2 * l3) ** 2)
    c1_sq = e1**2 + e2**2 + e4**2
    c2_sq = e1**2 + e3**2 + e4**2
    c3_sq = e2**2 + e3**2 + e4**2
    ct2 = c1_sq + c2_sq + c3_sq

    singles, pairs = _marginals(params)
    purity = {q: float(np.trace(singles[q] @ singles[q]).real) for q in (1, 2, 3)}
    for (a, b), e_pair in (((1, 2), e1), ((2, 3), e3), ((1, 3), e2)):
        lhs = float(
            np.trace(np.kron(singles[a], singles[b]) @ pairs[(a, b)]).real
        ) - purity[a] - purity[b]
        rhs = e5 - 1 + (e_pair**2 + e4**2) / 4
        if abs(lhs - rhs) > _ORACLE_TOL:
            raise NumericalError(
                f"correlation identity for pair ({a},{b}) violated by {abs(lhs - rhs)}"
            )
    if abs(c1_sq - 2 * (1 - i1)) > _ORACLE_TOL or abs(i4 - e4**2) > 1e-12:
        raise NumericalError("concurrence/purity consistency check failed")

    return MeasureSet(
        I1=i1, I2=i2, I3=i3, I4=i4, I5=i5,
        E1=float(e1), E2=float(e2), E3=float(e3), E4=float(e4), E5=float(e5),
        tau_1_23=tau_1_23, tau_1_2=tau_1_2, tau_1_3=tau_1_3, tau_2_3=tau_2_3,
        C1=float(np.sqrt(c1_sq)), C2=float(np.sqrt(c2_sq)), C3=float(np.sqrt(c3_sq)),
        CT2=float(ct2),
    )
