"""Permutation-symmetric three-qubit Bell operators.

Each qubit j carries two measurement directions a_j and a'_j; the dichotomic
observables are A_j = a_j . sigma and A'_j = a'_j . sigma.  Operators are
linear combinations of four permutation-symmetric groups of triple tensor
products:

    group 1:  A1 A2 A3' + A1 A2' A3 + A1' A2 A3      (one primed slot)
    group 2:  A1' A2' A3 + A1' A2 A3' + A1 A2' A3'   (two primed slots)
    group 3:  A1' A2' A3'                            (all primed)
    group 4:  A1 A2 A3                               (none primed)

Family ids 0..8 select which groups are switched on; see FAMILY_TERMS.
Operators here are materialized as dense 8x8 matrices; the correlation
tensor in :mod:`qvl.rmatrix` provides an independent contraction route to
the same expectation values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

_UNIT_TOL = 1e-9

# Terms as (slot1, slot2, slot3) indices into the vector list
# [a1, a2, a3, a1', a2', a3']: 0-2 unprimed, 3-5 primed.
GROUP_ONE_PRIMED = ((0, 1, 5), (0, 4, 2), (3, 1, 2))
GROUP_TWO_PRIMED = ((3, 4, 2), (3, 1, 5), (0, 4, 5))
GROUP_ALL_PRIMED = ((3, 4, 5),)
GROUP_UNPRIMED = ((0, 1, 2),)

# family id -> tuple of (term group, coefficient slot or None, take |coeff|)
FAMILY_TERMS: dict[int, tuple] = {
    0: ((GROUP_ONE_PRIMED, 0, False), (GROUP_TWO_PRIMED, 1, False),
        (GROUP_ALL_PRIMED, 2, False), (GROUP_UNPRIMED, 3, False)),
    1: ((GROUP_ONE_PRIMED, None, False),),
    2: ((GROUP_ONE_PRIMED, 0, True), (GROUP_TWO_PRIMED, 1, True)),
    3: ((GROUP_ONE_PRIMED, 0, False), (GROUP_ALL_PRIMED, 1, False)),
    4: ((GROUP_ONE_PRIMED, 0, True), (GROUP_UNPRIMED, 1, True)),
    5: ((GROUP_ALL_PRIMED, 0, False), (GROUP_UNPRIMED, 1, False)),
    6: ((GROUP_ONE_PRIMED, 0, False), (GROUP_TWO_PRIMED, 1, False),
        (GROUP_ALL_PRIMED, 2, False)),
    7: ((GROUP_ONE_PRIMED, 0, False), (GROUP_ALL_PRIMED, 1, False),
        (GROUP_UNPRIMED, 2, False)),
    8: ((GROUP_ONE_PRIMED, 0, False), (GROUP_TWO_PRIMED, 1, False),
        (GROUP_ALL_PRIMED, 2, False), (GROUP_UNPRIMED, 3, False)),
}

#: Coefficients turning family 3 into the Mermin operator.
MERMIN_COEFFS = (1.0, -1.0)


@dataclass(frozen=True)
class SettingsVector:
    """The six measurement unit vectors (a1, a2, a3, a1', a2', a3')."""

    a1: tuple[float, float, float]
    a2: tuple[float, float, float]
    a3: tuple[float, float, float]
    a1p: tuple[float, float, float]
    a2p: tuple[float, float, float]
    a3p: tuple[float, float, float]

    def __post_init__(self):
        for name, vec in self.items():
            norm = math.sqrt(sum(c * c for c in vec))
            if abs(norm - 1.0) > _UNIT_TOL:
                raise DomainError(f"setting {name} has norm {norm}, expected 1")

    def items(self):
        return (("a1", self.a1), ("a2", self.a2), ("a3", self.a3),
                ("a1p", self.a1p), ("a2p", self.a2p), ("a3p", self.a3p))

    def as_array(self) -> np.ndarray:
        """Stack the six vectors into a (6, 3) array, unprimed first."""
        return np.array([self.a1, self.a2, self.a3, self.a1p, self.a2p, self.a3p])

    @classmethod
    def from_array(cls, vecs: np.ndarray) -> "SettingsVector":
        vecs = np.asarray(vecs, dtype=float)
        if vecs.shape != (6, 3):
            raise DomainError(f"expected six 3-vectors, got shape {vecs.shape}")
        return cls(*(tuple(float(c) for c in v) for v in vecs))


def term_weights(family: int, coeffs) -> list:
    """Per-term (slots, weight) list of a family, with |.| applied where demanded."""
    if family not in FAMILY_TERMS:
        raise DomainError(f"unknown operator family {family}; valid ids are 0..8")
    coeffs = tuple(float(c) for c in coeffs)
    if any(not math.isfinite(c) for c in coeffs):
        raise DomainError(f"coefficients must be finite, got {coeffs}")
    weights = []
    for group, slot, take_abs in FAMILY_TERMS[family]:
        if slot is None:
            c = 1.0
        elif slot >= len(coeffs):
            raise DomainError(
                f"family {family} needs {slot + 1} coefficients, got {len(coeffs)}"
            )
        else:
            c = coeffs[slot]
        if take_abs:
            c = abs(c)
        weights.extend((t, c) for t in group)
    return weights


def pauli_observable(direction) -> np.ndarray:
    """The +/-1-valued observable a . sigma for a unit direction a."""
    a = np.asarray(direction, dtype=float)
    if a.shape != (3,):
        raise DomainError(f"direction must be a 3-vector, got shape {a.shape}")
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > _UNIT_TOL:
        raise DomainError(f"direction norm is {norm}, expected 1 within {_UNIT_TOL}")
    return a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z


def build_family(family: int, coeffs, settings: SettingsVector) -> np.ndarray:
    """Materialize one operator family as a dense 8x8 Hermitian matrix."""
    weights = term_weights(family, coeffs)
    obs = [pauli_observable(v) for _, v in settings.items()]
    op = np.zeros((8, 8), dtype=np.complex128)
    for (s1, s2, s3), c in weights:
        op += c * np.kron(obs[s1], np.kron(obs[s2], obs[s3]))
    return op


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    """Tr(rho op) as a real number; the imaginary residue must be noise."""
    rho = np.asarray(rho, dtype=np.complex128)
    op = np.asarray(op, dtype=np.complex128)
    if rho.shape != op.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"dimension mismatch: rho {rho.shape} vs operator {op.shape}")
    val = complex(np.einsum("ij,ji->", rho, op))
    if abs(val.imag) > 1e-8:
        raise NumericalError(f"expectation has imaginary residue {val.imag}")
    return float(val.real)
