"""Canonical three-qubit pure states and their density matrices.

A general three-qubit pure state can be brought by local unitaries to the
five-amplitude canonical form

    |psi> = l0|000> + l1*e^{i*phi}|100> + l2|101> + l3|110> + l4|111>,

with l_j >= 0, 0 <= phi <= pi and sum(l_j^2) = 1.  Basis kets |b1 b2 b3>
are indexed throughout the package as ``index = 4*b1 + 2*b2 + b3`` (qubit 1
is the most significant bit), so the five populated slots are 0, 4, 5, 6, 7.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NormalizationError

#: Basis slots of |000>, |100>, |101>, |110>, |111> under index = 4*b1+2*b2+b3.
CANONICAL_SLOTS = (0, 4, 5, 6, 7)

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class StateParams:
    """Amplitudes l0..l4 (non-negative) and relative phase phi in [0, pi]."""

    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    phi: float = 0.0

    def __post_init__(self):
        lams = self.lambdas
        if any(l < 0.0 for l in lams):
            raise DomainError(f"amplitudes must be non-negative, got {lams}")
        if not 0.0 <= self.phi <= np.pi:
            raise DomainError(f"phase must lie in [0, pi], got {self.phi}")
        norm2 = sum(l * l for l in lams)
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise NormalizationError(
                f"squared amplitudes sum to {norm2}, expected 1 within {_NORM_TOL}"
            )

    @property
    def lambdas(self) -> tuple[float, float, float, float, float]:
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3, self.lambda4)

    def as_dict(self) -> dict:
        return {"lambda": list(self.lambdas), "phi": self.phi}


def params_from_json(text: str) -> StateParams:
    """Parse the JSON state descriptor {"lambda": [l0..l4], "phi": x}."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid state JSON: {exc}") from exc
    if not isinstance(obj, dict) or "lambda" not in obj:
        raise DomainError('state JSON must be an object with a "lambda" key')
    lams = obj["lambda"]
    if not isinstance(lams, (list, tuple)) or len(lams) != 5:
        raise DomainError('"lambda" must be a list of five numbers')
    phi = obj.get("phi", 0.0)
    try:
        lams = [float(v) for v in lams]
        phi = float(phi)
    except (TypeError, ValueError) as exc:
        raise DomainError("state JSON entries must be numbers") from exc
    return StateParams(*lams, phi=phi)


def make_state(params: StateParams) -> np.ndarray:
    """Return the 8-component state vector of the canonical form.

    Amplitudes (l0, l1*e^{i*phi}, l2, l3, l4) are placed at basis slots
    (|000>, |100>, |101>, |110>, |111>); everything else is zero.
    """
    psi = np.zeros(8, dtype=np.complex128)
    psi[0] = params.lambda0
    psi[4] = params.lambda1 * np.exp(1j * params.phi)
    psi[5] = params.lambda2
    psi[6] = params.lambda3
    psi[7] = params.lambda4
    return psi


def density(state: np.ndarray) -> np.ndarray:
    """Return the rank-1 projector |psi><psi| of a normalized state vector."""
    psi = np.asarray(state, dtype=np.complex128)
    if psi.shape != (8,):
        raise DomainError(f"state vector must have 8 amplitudes, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > _NORM_TOL:
        raise NormalizationError(f"state vector norm^2 = {norm2}, expected 1")
    return np.outer(psi, psi.conj())


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out the qubits not listed in ``keep``.

    Args:
        rho: 8x8 density matrix of the full three-qubit system.
        keep: qubit labels (subset of {1, 2, 3}) to retain.  The reduced
            matrix orders the kept qubits by ascending label.

    Returns:
        2x2 or 4x4 reduced density matrix with unit trace.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (8, 8):
        raise DomainError(f"expected an 8x8 density matrix, got shape {rho.shape}")
    keep = sorted(set(keep))
    if not keep or len(keep) >= 3 or any(q not in (1, 2, 3) for q in keep):
        raise DomainError(f"keep set must be a nonempty proper subset of {{1,2,3}}, got {keep}")
    reduced = rho.reshape(2, 2, 2, 2, 2, 2)
    for q in sorted((q for q in (1, 2, 3) if q not in keep), reverse=True):
        half = reduced.ndim // 2
        reduced = np.trace(reduced, axis1=q - 1, axis2=q - 1 + half)
    dim = 2 ** len(keep)
    return reduced.reshape(dim, dim)


def random_params(seed: int) -> StateParams:
    """Draw canonical parameters uniformly: amplitudes on the non-negative
    orthant of the unit 4-sphere (|normal| samples, normalized), phase
    uniform on [0, pi].  Deterministic for a given seed."""
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    rng = np.random.default_rng(seed)
    lams = np.abs(rng.standard_normal(5))
    lams /= np.linalg.norm(lams)
    phi = rng.uniform(0.0, np.pi)
    return StateParams(*lams.tolist(), phi=float(phi))
