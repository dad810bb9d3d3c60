"""Trace functionals, basis-diagonal surrogates, the trace-based determinant,
and Schatten-type quasi-norm quantities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    NumericalFailureError,
    SingularMatrixError,
)
from .hermitian import (
    CommutingTuple,
    HermitianMatrix,
    MultivariateFunction,
    SINGULARITY_RTOL,
    UNITARITY_TOL,
    _check_rows_in_domain,
    apply_multivariable,
    eigendecompose,
    max_abs,
)
from .randomgen import random_unitary, rng_from_seed

TRACE_IMAG_ATOL = 1e-12
CROSS_CHECK_RTOL = 1e-9

_KINDS = ("standard", "normalized")


@dataclass(frozen=True)
class TraceFunctional:
    """The standard trace Tr, or the tracial state Tr/dim, on dim x dim matrices."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}")
        if self.dim < 1:
            raise DimensionMismatchError("dim must be at least 1")

    @property
    def weight(self) -> float:
        """Weight of one diagonal entry: 1 for Tr, 1/dim for the tracial state."""
        return 1.0 if self.kind == "standard" else 1.0 / self.dim

    def value(self, x) -> float:
        """Trace of a matrix (HermitianMatrix or ndarray with a real trace).

        The imaginary residue must be negligible (it is, for Hermitian
        arguments and products of Hermitians) and is discarded.
        """
        a = x.entries if isinstance(x, HermitianMatrix) else np.asarray(x)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"trace functional on dim {self.dim} applied to shape {a.shape}"
            )
        t = complex(np.trace(a))
        if abs(t.imag) > max(TRACE_IMAG_ATOL, TRACE_IMAG_ATOL * abs(t.real)):
            raise NumericalFailureError(
                "trace has a non-negligible imaginary part", residual=t.imag
            )
        return t.real * self.weight


def trace(tf: TraceFunctional, x) -> float:
    return tf.value(x)


class BasisFrame:
    """An orthonormal basis, stored as a unitary whose columns are the vectors."""

    __slots__ = ("vectors",)

    def __init__(self, vectors):
        v = np.asarray(vectors, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatchError("basis frame must be a square matrix of columns")
        residual = max_abs(v.conj().T @ v - np.eye(v.shape[0]))
        if residual > UNITARITY_TOL:
            raise DomainError(f"frame is not orthonormal: residual {residual:.3e}")
        self.vectors = v

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def standard(cls, dim: int) -> "BasisFrame":
        return cls(np.eye(dim))


def _eigenvalue_route(tf: TraceFunctional, f: MultivariateFunction, t: CommutingTuple) -> float:
    vals = f.evaluate_rows(t.joint_eigenvalues)
    return float(vals.sum()) * tf.weight


def trace_of_function(tf: TraceFunctional, f: MultivariateFunction, t: CommutingTuple) -> float:
    """tau(f(x_1, ..., x_k)) for a commuting tuple.

    Computed two ways -- through the assembled matrix and as the weighted sum
    of f over the joint eigenvalue rows -- and cross-checked to 1e-9 relative;
    disagreement raises :class:`NumericalFailureError`.
    """
    if tf.dim != t.dim:
        raise DimensionMismatchError("trace functional and tuple dimensions differ")
    via_rows = _eigenvalue_route(tf, f, t)
    via_matrix = tf.value(apply_multivariable(f, t))
    gap = abs(via_rows - via_matrix)
    if gap > CROSS_CHECK_RTOL * max(1.0, abs(via_rows), abs(via_matrix)):
        raise NumericalFailureError(
            "matrix and joint-eigenvalue trace routes disagree", residual=gap
        )
    return via_rows


def diagonal_surrogate(
    tf: TraceFunctional, f: MultivariateFunction, t: CommutingTuple, b: BasisFrame
) -> float:
    """Weighted sum of f over the basis-diagonal compressions of the tuple.

    Evaluates sum_j w_j f(<phi_j, x_1 phi_j>, ..., <phi_j, x_k phi_j>). For
    convex f this never exceeds trace_of_function, with equality when the
    frame is the joint eigenbasis.
    """
    if tf.dim != t.dim or b.dim != t.dim:
        raise DimensionMismatchError("dimension mismatch between trace, tuple, and frame")
    v = b.vectors
    comps = np.empty((t.dim, t.k))
    for i, m in enumerate(t.members):
        comps[:, i] = np.einsum("ij,ij->j", v.conj(), m.entries @ v).real
    _check_rows_in_domain(comps, f.domain)
    vals = f.evaluate_rows(comps)
    return float(vals.sum()) * tf.weight


def surrogate_supremum_probe(
    tf: TraceFunctional,
    f: MultivariateFunction,
    t: CommutingTuple,
    basis_count: int,
    seed,
) -> float:
    """Max of the diagonal surrogate over seeded random frames plus the joint basis.

    For convex f the joint eigenbasis attains trace_of_function and no frame
    exceeds it, so the probe returns that value.
    """
    if basis_count < 1:
        raise DomainError("basis_count must be at least 1")
    rng = rng_from_seed(seed)
    best = diagonal_surrogate(tf, f, t, BasisFrame(t.joint_basis))
    for _ in range(basis_count):
        frame = BasisFrame(random_unitary(t.dim, rng))
        best = max(best, diagonal_surrogate(tf, f, t, frame))
    return best


def kf_determinant(tf: TraceFunctional, x) -> float:
    """exp(tau(log |x|)) for an invertible matrix.

    For a Hermitian argument |x| acts as absolute eigenvalues; a plain
    ndarray is accepted for products of Hermitians, using singular values.
    Under the tracial state on dim n this equals det(|x|)^(1/n). Singular
    input is an error, never silently regularized.
    """
    if isinstance(x, HermitianMatrix):
        sv = np.abs(eigendecompose(x).eigenvalues)
    else:
        a = np.asarray(x, dtype=np.complex128)
        if a.shape != (tf.dim, tf.dim):
            raise DimensionMismatchError("matrix shape does not match the trace functional")
        sv = np.linalg.svd(a, compute_uv=False)
    scale = float(sv.max()) if sv.size else 0.0
    if scale == 0.0 or sv.min() <= SINGULARITY_RTOL * scale:
        raise SingularMatrixError(
            f"determinant needs an invertible input, min singular value {sv.min():.3e}"
        )
    return float(np.exp(np.sum(np.log(sv)) * tf.weight))


def schatten_quasi_power(tf: TraceFunctional, x: HermitianMatrix, p: float) -> float:
    """(tau(x^(1/p)))^p for positive semidefinite x and p > 0."""
    if p <= 0:
        raise DomainError("p must be positive")
    w = eigendecompose(x).eigenvalues
    floor = -max(1e-10, 1e-10 * max_abs(w))
    if w.min() < floor:
        raise DomainError(f"input must be PSD, min eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return float((np.sum(w ** (1.0 / p)) * tf.weight) ** p)


def schatten_norm(tf: TraceFunctional, x: HermitianMatrix, p: float) -> float:
    """The p-norm (tau(|x|^p))^(1/p) for p >= 1."""
    if p < 1:
        raise DomainError("the p-norm needs p >= 1")
    w = np.abs(eigendecompose(x).eigenvalues)
    return float((np.sum(w ** p) * tf.weight) ** (1.0 / p))
