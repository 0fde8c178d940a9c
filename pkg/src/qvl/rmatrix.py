"""Three-point Pauli correlation tensor and the spectral violation bound.

The correlation tensor R[i1,i2,i3] = Tr(rho sigma_i1 x sigma_i2 x sigma_i3)
can be flattened into a 3x9 matrix along any of its three axes.  The
eigenvalues of each flattening's Gram matrix M = F F^T follow from the
characteristic cubic in closed (trigonometric) form, and twice the square
root of the two largest eigenvalues, minimized over the three flattenings,
upper-bounds the maximum Mermin violation of the state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .measures import MeasureSet
from .operators import PAULI
from .state import StateParams, density, make_state

_IMAG_TOL = 1e-10
_DEGENERATE_TOL = 1e-12

AXES = (1, 2, 3)


@dataclass(frozen=True)
class CubicSpectrum:
    """Characteristic-cubic data of one flattening's Gram matrix.

    The cubic is x^3 + alpha1 x^2 + alpha2 x + alpha3 = 0 with the reduced
    quantities gamma1, gamma2 and angle theta in [0, pi/3]; the roots are
    ordered x1 >= x3 >= x2 by construction.
    """

    alpha1: float
    alpha2: float
    alpha3: float
    gamma1: float
    gamma2: float
    theta: float
    x1: float
    x2: float
    x3: float

    @property
    def discriminant(self) -> float:
        return self.gamma1**2 + self.gamma2**3

    @property
    def roots_descending(self) -> tuple[float, float, float]:
        return (self.x1, self.x3, self.x2)


def correlation_tensor(rho: np.ndarray) -> np.ndarray:
    """The 3x3x3 tensor of triple Pauli correlations of an 8x8 density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (8, 8):
        raise DomainError(f"expected an 8x8 density matrix, got shape {rho.shape}")
    r6 = rho.reshape(2, 2, 2, 2, 2, 2)
    tensor = np.einsum("abcdef,ida,jeb,kfc->ijk", r6, PAULI, PAULI, PAULI)
    residue = float(np.max(np.abs(tensor.imag)))
    if residue > _IMAG_TOL:
        raise NumericalError(f"correlation entries have imaginary residue {residue}")
    return np.ascontiguousarray(tensor.real)


def flatten(tensor: np.ndarray, axis: int) -> np.ndarray:
    """Flatten the tensor to 3x9 along one axis.

    Row j holds the slice with index j on the chosen axis; the nine columns
    raster the remaining two indices in their original order (x < y < z,
    second index fastest).
    """
    tensor = np.asarray(tensor, dtype=float)
    if tensor.shape != (3, 3, 3):
        raise DomainError(f"expected a 3x3x3 tensor, got shape {tensor.shape}")
    if axis == 1:
        return tensor.reshape(3, 9)
    if axis == 2:
        return np.ascontiguousarray(tensor.transpose(1, 0, 2)).reshape(3, 9)
    if axis == 3:
        return np.ascontiguousarray(tensor.transpose(2, 0, 1)).reshape(3, 9)
    raise DomainError(f"axis must be 1, 2 or 3, got {axis}")


def gram_cubic(flattening: np.ndarray) -> CubicSpectrum:
    """Solve the characteristic cubic of M = F F^T trigonometrically.

    The Gram matrix is positive semidefinite, so the discriminant is
    non-positive (up to rounding) and the three roots are real and
    non-negative.  A degenerate |gamma2| below 1e-12 yields a triple root.
    """
    f = np.asarray(flattening, dtype=float)
    if f.shape != (3, 9):
        raise DomainError(f"expected a 3x9 flattening, got shape {f.shape}")
    m = f @ f.T
    alpha1 = -(m[0, 0] + m[1, 1] + m[2, 2])
    alpha2 = (
        m[0, 0] * m[1, 1] + m[0, 0] * m[2, 2] + m[1, 1] * m[2, 2]
        - m[0, 1] ** 2 - m[0, 2] ** 2 - m[1, 2] ** 2
    )
    alpha3 = (
        -m[0, 0] * m[1, 1] * m[2, 2]
        + m[0, 0] * m[1, 2] ** 2 + m[1, 1] * m[0, 2] ** 2 + m[2, 2] * m[0, 1] ** 2
        - 2 * m[0, 1] * m[1, 2] * m[0, 2]
    )
    gamma1 = -alpha1**3 / 27.0 - alpha3 / 2.0 + alpha1 * alpha2 / 6.0
    gamma2 = alpha2 / 3.0 - alpha1**2 / 9.0
    disc = gamma1**2 + gamma2**3
    if disc > 1e-10:
        raise NumericalError(f"cubic discriminant {disc} is positive; input not symmetric PSD?")
    if abs(gamma2) < _DEGENERATE_TOL:
        theta = 0.0
        x1 = x2 = x3 = -alpha1 / 3.0
    else:
        # rounding can push the cosine argument just past +/-1 at degeneracies
        arg = np.clip(gamma1 / (-gamma2) ** 1.5, -1.0, 1.0)
        theta = float(np.arccos(arg)) / 3.0
        amp = 2.0 * np.sqrt(-gamma2)
        x1 = -alpha1 / 3.0 + amp * np.cos(theta)
        x2 = -alpha1 / 3.0 + amp * np.cos(theta + 2.0 * np.pi / 3.0)
        x3 = -alpha1 / 3.0 + amp * np.cos(theta - 2.0 * np.pi / 3.0)
    spectrum = CubicSpectrum(
        alpha1=float(alpha1), alpha2=float(alpha2), alpha3=float(alpha3),
        gamma1=float(gamma1), gamma2=float(gamma2), theta=theta,
        x1=float(x1), x2=float(x2), x3=float(x3),
    )
    assert spectrum.x1 >= spectrum.x3 >= spectrum.x2
    return spectrum


def flattening_spectra(params: StateParams) -> list[CubicSpectrum]:
    """Cubic spectra of the three flattenings of a state's correlation tensor."""
    tensor = correlation_tensor(density(make_state(params)))
    return [gram_cubic(flatten(tensor, axis)) for axis in AXES]


def gamma_r(params: StateParams) -> float:
    """Spectral upper bound on the maximum Mermin violation.

    Twice the square root of the sum of the two largest Gram eigenvalues
    (x1 + x3 under the trigonometric ordering), minimized over the three
    flattenings; negative rounding residues under the root are clamped.
    """
    best = np.inf
    for spec in flattening_spectra(params):
        top_two = spec.x1 + spec.x3
        assert top_two >= spec.x1 + spec.x2 - 1e-9 and top_two >= spec.x2 + spec.x3 - 1e-9
        best = min(best, 2.0 * np.sqrt(max(top_two, 0.0)))
    return float(best)


def alpha_from_measures(measures: MeasureSet, axis: int) -> tuple[float, float, float]:
    """Characteristic-cubic coefficients expressed in entanglement measures.

    Axis 1 uses (E1, E2, E3) as written; axis 2 exchanges E2 with E3 and
    axis 3 exchanges E1 with E3.  E4 and E5 are flattening-invariant.
    """
    if axis == 1:
        e1, e2, e3 = measures.E1, measures.E2, measures.E3
    elif axis == 2:
        e1, e2, e3 = measures.E1, measures.E3, measures.E2
    elif axis == 3:
        e1, e2, e3 = measures.E3, measures.E2, measures.E1
    else:
        raise DomainError(f"axis must be 1, 2 or 3, got {axis}")
    e4, e5 = measures.E4, measures.E5
    alpha1 = -1.0 - (2 * e1**2 + 2 * e2**2 + 2 * e3**2 + 3 * e4**2)
    alpha2 = (
        2 * (e1**2 + e2**2 + e4**2) * e3**2
        + 2 * (e1**2 + e2**2) * (e4**2 + 1)
        + e1**4 + e2**4 + 4 * e4**2 + 16 * e5
    )
    alpha3 = (e1**2 + e2**2 + 2 * e3**2 + 2 * e4**2) * (
        2 * e4**4 + 2 * e1**2 * e2**2 + e1**2 * e4**2 + e2**2 * e4**2
    ) - (e1**2 + e2**2 + 2 * e4**2 + 8 * e5) ** 2
    return float(alpha1), float(alpha2), float(alpha3)


def mermin_bound_check(params: StateParams, config=None) -> tuple[float, float, bool]:
    """Optimized Mermin violation, its spectral bound, and whether the bound holds."""
    from .violation import OptimizerConfig, maximize_violation

    if config is None:
        config = OptimizerConfig()
    result = maximize_violation(params, 3, (1.0, -1.0), config)
    bound = gamma_r(params)
    return result.gamma, bound, bool(result.gamma <= bound + 1e-6)
