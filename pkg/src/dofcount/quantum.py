"""Minimal finite-dimensional quantum reference system.

Just enough quantum mechanics for a degrees-of-freedom comparison: density
matrices, orthonormal measurement bases, Born-rule outcome probabilities,
and sharp projective collapse.  Collapse onto the observed basis vector is
the quantum counterpart of the card box rebuilding its subdeck: repeating
the same measurement is then certain, while a different basis
re-randomizes.

No POVMs, channels, or composite systems.  "Superselection" appears only
as an ObservableSet with fewer bases than the dimension allows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDimensionError,
    DegenerateDrawError,
    DimensionMismatchError,
    InvariantError,
    ValidationError,
    ZeroProbabilityOutcomeError,
)
from .rng import RandomStream

# Tolerances for the floating-point (quantum) side, all in one place.
# The classical side is exact rational and needs none of these.
HERMITICITY_TOL = 1e-12      # elementwise |rho - rho^dagger|
TRACE_TOL = 1e-12            # |tr(rho) - 1|
EIGENVALUE_FLOOR = -1e-12    # smallest admissible eigenvalue
ORTHONORMALITY_TOL = 1e-10   # elementwise |Gram - I|
PROBABILITY_FLOOR = -1e-12   # smallest admissible Born probability
PROBABILITY_SUM_TOL = 1e-10  # |sum of Born probabilities - 1|
COLLAPSE_MIN_PROBABILITY = 1e-12
RANK_TOL = 1e-9              # relative singular value threshold


@dataclass(frozen=True, eq=False)
class DensityState:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise ValidationError("density matrix trace is not 1")
        if np.min(np.linalg.eigvalsh(m)) < EIGENVALUE_FLOOR:
            raise ValidationError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Orthonormal basis; row k of ``vectors`` is the k-th outcome vector."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValidationError(f"basis must be n x n, got shape {v.shape}")
        gram = v @ v.conj().T
        if np.max(np.abs(gram - np.eye(v.shape[0]))) > ORTHONORMALITY_TOL:
            raise ValidationError("basis vectors are not orthonormal")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def dimension(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class ObservableSet:
    """The bases an experimenter is allowed to measure.

    Restricting the number of bases below dimension+1 models a system with
    fewer physically measurable variables than the dimension admits.
    """

    bases: tuple[MeasurementBasis, ...]

    def __post_init__(self):
        if not self.bases:
            raise ValidationError("observable set needs at least one basis")
        dims = {basis.dimension for basis in self.bases}
        if len(dims) != 1:
            raise DimensionMismatchError(f"bases have mixed dimensions {sorted(dims)}")

    @property
    def dimension(self) -> int:
        return self.bases[0].dimension

    @property
    def num_bases(self) -> int:
        return len(self.bases)


def random_pure_state(n: int, rng: RandomStream) -> DensityState:
    """Rank-one projector of a normalized complex Gaussian vector."""
    if n < 2:
        raise BadDimensionError(f"dimension must be at least 2, got {n}")
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    psi = psi / np.linalg.norm(psi)
    return DensityState(np.outer(psi, psi.conj()))


_MGS_PIVOT_TOL = 1e-8
_MAX_BASIS_ATTEMPTS = 8


def random_basis(n: int, rng: RandomStream) -> MeasurementBasis:
    """Orthonormalized complex Gaussian matrix.

    Modified Gram-Schmidt with one re-orthogonalization pass; a draw whose
    columns are (numerically) dependent is thrown away and redrawn.
    """
    if n < 2:
        raise BadDimensionError(f"dimension must be at least 2, got {n}")
    for _ in range(_MAX_BASIS_ATTEMPTS):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rows = _gram_schmidt(a)
        if rows is not None:
            return MeasurementBasis(np.array(rows))
    raise DegenerateDrawError(
        f"no nondegenerate basis draw in {_MAX_BASIS_ATTEMPTS} attempts"
    )


def _gram_schmidt(a: np.ndarray) -> list[np.ndarray] | None:
    n = a.shape[0]
    rows: list[np.ndarray] = []
    for j in range(n):
        v = a[:, j].astype(complex)
        for _ in range(2):  # second pass restores orthogonality lost to roundoff
            for q in rows:
                v = v - np.vdot(q, v) * q
        norm = np.linalg.norm(v)
        if norm < _MGS_PIVOT_TOL:
            return None
        rows.append(v / norm)
    return rows


def random_observable_set(
    n: int, num_bases: int | None = None, rng: RandomStream | None = None
) -> ObservableSet:
    """``num_bases`` random bases; defaults to n+1, enough for full tomography.

    n+1 bases contribute 1 + (n+1)(n-1) = n**2 independent outcome
    probabilities, matching the dimension of the space of states.
    """
    if rng is None:
        raise ValidationError("random_observable_set requires a RandomStream")
    m = n + 1 if num_bases is None else num_bases
    if m < 1:
        raise ValidationError("observable set needs at least one basis")
    return ObservableSet(tuple(random_basis(n, rng) for _ in range(m)))


def measurement_distribution(
    state: DensityState, basis: MeasurementBasis
) -> np.ndarray:
    """Born probabilities p_k = <b_k| rho |b_k>, clamped to [0, 1]."""
    if state.dimension != basis.dimension:
        raise DimensionMismatchError(
            f"state dimension {state.dimension} != basis dimension {basis.dimension}"
        )
    raw = np.einsum("ki,ij,kj->k", basis.vectors.conj(), state.matrix, basis.vectors)
    probs = raw.real
    if np.min(probs) < PROBABILITY_FLOOR:
        raise InvariantError(f"negative Born probability {np.min(probs)}")
    probs = np.clip(probs, 0.0, 1.0)
    if abs(float(np.sum(probs)) - 1.0) > PROBABILITY_SUM_TOL:
        raise InvariantError(f"Born probabilities sum to {np.sum(probs)}")
    return probs


def collapse(state: DensityState, basis: MeasurementBasis, outcome: int) -> DensityState:
    """Sharp projective update: the state becomes |b_k><b_k|.

    Re-measuring the same basis immediately afterwards returns outcome k
    with certainty, mirroring the card box's subdeck rebuild.
    """
    probs = measurement_distribution(state, basis)
    if not 0 <= outcome < len(probs):
        raise ValidationError(f"outcome index {outcome} out of range")
    if probs[outcome] <= COLLAPSE_MIN_PROBABILITY:
        raise ZeroProbabilityOutcomeError(
            f"outcome {outcome} has probability {probs[outcome]:.3g}"
        )
    b = basis.vectors[outcome]
    return DensityState(np.outer(b, b.conj()))
