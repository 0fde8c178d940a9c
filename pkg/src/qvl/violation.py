"""Maximum-violation search and single-measure scans.

The search maximizes Tr(rho O) over the six measurement directions,
parametrized by twelve spherical angles (theta in [0, pi], phi in
[0, 2*pi) per unit vector) and optimized unconstrained -- the trig
functions wrap angles naturally.  A multi-start simplex search (default
64 seeded restarts) handles the multimodal landscape; the best restart
wins, ties broken by lowest restart index.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _simplex
from .errors import ConvergenceWarning, DomainError, NumericalError
from .operators import (
    FAMILY_TERMS,
    SettingsVector,
    build_family,
    expectation,
    term_weights,
)
from .rmatrix import correlation_tensor, gamma_r
from .state import StateParams, density, make_state

CSV_HEADER = "measure,value,gamma,gamma_R,lambda0,lambda1,lambda2,lambda3,lambda4,phi"

_SIMPLEX_STEP = 0.25


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start search settings; deterministic for a fixed seed."""

    restarts: int = 64
    max_iters: int = 2000
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        if self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class ViolationResult:
    gamma: float
    best_settings: SettingsVector
    restarts_agreeing: int
    converged: bool
    best_coeffs: tuple | None = None


@dataclass(frozen=True)
class ScanRow:
    measure_value: float
    gamma: float
    gamma_R: float
    params: StateParams


def _angles_to_vectors(angles: np.ndarray) -> np.ndarray:
    theta = angles[0::2]
    phi = angles[1::2]
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _term_arrays(family: int, coeffs):
    weights = term_weights(family, coeffs)
    idx = np.array([slots for slots, _ in weights], dtype=np.int64)
    w = np.array([c for _, c in weights], dtype=float)
    return idx[:, 0].copy(), idx[:, 1].copy(), idx[:, 2].copy(), w


def _run_multistart(tensor, family, coeffs, config, starts):
    i1, i2, i3, w = _term_arrays(family, coeffs)
    return _simplex.run_restarts(
        tensor, i1, i2, i3, w, starts,
        config.tol, config.tol, config.max_iters, _SIMPLEX_STEP,
    )


def _coefficient_slots(family: int) -> int:
    slots = [slot for _, slot, _ in FAMILY_TERMS[family] if slot is not None]
    if not slots:
        raise DomainError(f"family {family} has no coefficients to optimize")
    return max(slots) + 1


def _group_sums(tensor, family: int, vecs: np.ndarray) -> np.ndarray:
    """Unweighted per-coefficient contraction sums at fixed settings."""
    sums = np.zeros(_coefficient_slots(family))
    for group, slot, _ in FAMILY_TERMS[family]:
        for t in group:
            sums[slot] += float(
                np.einsum("i,j,k,ijk->", vecs[t[0]], vecs[t[1]], vecs[t[2]], tensor)
            )
    return sums


def _best_unit_coeffs(family: int, group_sums: np.ndarray, current: np.ndarray):
    """Maximize the coefficient-linear objective over the unit sphere.

    Families that take coefficient magnitudes admit only non-negative
    weights, so their optimum zeroes the non-positive contractions.
    """
    uses_abs = any(flag for _, slot, flag in FAMILY_TERMS[family] if slot is not None)
    if uses_abs:
        direction = np.clip(group_sums, 0.0, None)
        if not direction.any():
            direction = np.zeros_like(group_sums)
            direction[int(np.argmax(group_sums))] = 1.0
    else:
        direction = group_sums
    norm = float(np.linalg.norm(direction))
    return current if norm == 0.0 else direction / norm


def maximize_violation(
    params: StateParams,
    family: int,
    coeffs,
    config: OptimizerConfig | None = None,
    optimize_coeffs: bool = False,
) -> ViolationResult:
    """Best expectation of one operator family over all measurement settings.

    Restart start points are drawn from a generator seeded by config.seed,
    so identical inputs reproduce identical results bit for bit.  The
    returned gamma is re-evaluated through the dense-matrix route at the
    winning settings as a cross-check.

    With ``optimize_coeffs`` the coefficients become free parameters on the
    unit sphere (the objective is scale-linear in them, so only the
    direction is meaningful): the search alternates the simplex step over
    angles with the exactly solvable coefficient update, starting from the
    provided coefficients, and reports the winner in ``best_coeffs``.
    """
    if config is None:
        config = OptimizerConfig()
    rho = density(make_state(params))
    tensor = correlation_tensor(rho)

    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed))
    starts = np.empty((config.restarts, 12))
    starts[:, 0::2] = rng.uniform(0.0, np.pi, size=(config.restarts, 6))
    starts[:, 1::2] = rng.uniform(0.0, 2.0 * np.pi, size=(config.restarts, 6))

    best_coeffs = None
    if optimize_coeffs:
        n_slots = _coefficient_slots(family)
        current = np.asarray(coeffs, dtype=float)[:n_slots]
        norm = float(np.linalg.norm(current))
        if norm == 0.0:
            raise DomainError("initial coefficients must not all be zero")
        coeffs = tuple(current / norm)

    xs, fs, _ = _run_multistart(tensor, family, coeffs, config, starts)
    best = int(np.argmin(fs))
    gamma = -float(fs[best])
    agreeing = int(np.sum(fs <= fs[best] + 10.0 * config.tol))
    best_angles = xs[best]

    if optimize_coeffs:
        current = np.asarray(coeffs, dtype=float)
        for _ in range(50):
            sums = _group_sums(tensor, family, _angles_to_vectors(best_angles))
            current = _best_unit_coeffs(family, sums, current)
            xs, fs, _ = _run_multistart(
                tensor, family, tuple(current), config, best_angles[None, :]
            )
            improved = -float(fs[0])
            if improved <= gamma + config.tol:
                gamma = max(gamma, improved)
                best_angles = xs[0]
                break
            gamma = improved
            best_angles = xs[0]
        coeffs = tuple(float(c) for c in current)
        best_coeffs = coeffs

    converged = agreeing >= 2
    if not converged:
        warnings.warn(
            f"only {agreeing} restart(s) agree with the best value", ConvergenceWarning
        )
    settings = SettingsVector.from_array(_angles_to_vectors(best_angles))
    dense = expectation(rho, build_family(family, coeffs, settings))
    if abs(dense - gamma) > config.tol:
        raise NumericalError(
            f"contracted optimum {gamma} disagrees with dense expectation {dense}"
        )
    return ViolationResult(
        gamma=gamma, best_settings=settings,
        restarts_agreeing=agreeing, converged=converged,
        best_coeffs=best_coeffs,
    )


def single_measure_slice(measure: int, value: float, nuisance: float = 0.0) -> StateParams:
    """Canonical parameters with exactly one of E1..E4 switched on.

    The active concurrence satisfies E^2 = value.  Slices: E1 via
    l2 = l4 = 0, E2 via l3 = l4 = 0, E3 via l0 = l3 = 0, E4 via
    l1 = l2 = l3 = 0.  The active amplitude pair splits symmetrically at
    nuisance 0 and as (e^{+n}, e^{-n}) otherwise, with the slice's spare
    amplitude absorbing the leftover norm; E4 has no spare amplitude, so
    its split is fixed by normalization and any nonzero nuisance is
    rejected.
    """
    if measure not in (1, 2, 3, 4):
        raise DomainError(f"measure must be 1..4, got {measure}")
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"measure value must lie in [0, 1], got {value}")
    s = math.sqrt(value)
    lams = [0.0] * 5
    if measure == 4:
        if nuisance != 0.0:
            raise DomainError("the E4 slice has no free amplitude to absorb a nuisance")
        lams[0] = (math.sqrt(1.0 + s) + math.sqrt(1.0 - s)) / 2.0
        lams[4] = (math.sqrt(1.0 + s) - math.sqrt(1.0 - s)) / 2.0
        return StateParams(*lams)
    used = s * math.cosh(2.0 * nuisance)
    spare_sq = 1.0 - used
    if spare_sq < -1e-12:
        raise DomainError(
            f"nuisance {nuisance} leaves squared norm {used} > 1; no normalization possible"
        )
    spare = math.sqrt(max(spare_sq, 0.0))
    hi = math.sqrt(s / 2.0) * math.exp(nuisance)
    lo = math.sqrt(s / 2.0) * math.exp(-nuisance)
    if measure == 1:
        lams[0], lams[3], lams[1] = hi, lo, spare
    elif measure == 2:
        lams[0], lams[2], lams[1] = hi, lo, spare
    else:
        lams[1], lams[4], lams[2] = hi, lo, spare
    return StateParams(*lams)


def _row_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence(entropy=[seed, index]).generate_state(1)[0])


def scan(
    measure: int,
    grid,
    family: int,
    coeffs,
    config: OptimizerConfig | None = None,
    max_workers: int = 1,
) -> list[ScanRow]:
    """One ScanRow per grid value, in grid order.

    Rows are independent and may be computed in parallel; the output order
    and all values depend only on the inputs.  An optimizer failure on one
    row records NaN for that row's gamma instead of aborting the scan.
    """
    if config is None:
        config = OptimizerConfig()
    grid = [float(v) for v in grid]
    params_list = [single_measure_slice(measure, v) for v in grid]

    def compute(index: int) -> ScanRow:
        p = params_list[index]
        row_config = replace(config, seed=_row_seed(config.seed, index))
        try:
            gamma = maximize_violation(p, family, coeffs, row_config).gamma
        except NumericalError as exc:
            warnings.warn(f"scan row {index} failed: {exc}")
            gamma = float("nan")
        return ScanRow(
            measure_value=grid[index], gamma=gamma, gamma_R=gamma_r(p), params=p
        )

    if max_workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(compute, range(len(grid))))
    else:
        rows = [compute(i) for i in range(len(grid))]
    return rows


def format_scan_csv(rows, measure: int) -> str:
    """Render scan rows as CSV with 12 significant digits per number."""
    lines = [CSV_HEADER]
    for row in rows:
        fields = [str(int(measure)), f"{row.measure_value:.12g}",
                  f"{row.gamma:.12g}", f"{row.gamma_R:.12g}"]
        fields.extend(f"{l:.12g}" for l in row.params.lambdas)
        fields.append(f"{row.params.phi:.12g}")
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
