"""Dense Hermitian matrices and their functional calculus.

Everything operates on finite-dimensional complex matrix algebras: Hermitian
matrices, their spectral decompositions, tuples of pairwise-commuting
Hermitians with a shared eigenbasis, and the evaluation of multivariate
functions on such tuples through the joint eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    NotCommutingError,
    NumericalFailureError,
    SingularMatrixError,
)

HERMITICITY_ATOL = 1e-12
UNITARITY_TOL = 1e-10
RECONSTRUCTION_RTOL = 1e-10
COMMUTATOR_RTOL = 1e-10
JOINT_DIAG_RTOL = 1e-8
DEGENERACY_GAP_RTOL = 1e-7
DOMAIN_SLACK = 1e-9
SINGULARITY_RTOL = 1e-12

# Fixed key for the generic linear combination used by joint_diagonalize;
# deterministic so joint bases are reproducible across runs.
_JOINT_DIAG_KEY = 0x9E3779B97F4A7C15


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude; 0 for empty arrays."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def hybrid_tol(scale: float, abs_tol: float = 1e-10, rel_tol: float = 1e-8) -> float:
    """Absolute/relative hybrid tolerance max(abs_tol, rel_tol * scale)."""
    return max(abs_tol, rel_tol * scale)


class HermitianMatrix:
    """A dense n-by-n complex matrix with enforced Hermitian symmetry.

    The stored entries are exactly symmetrized, (a + a*)/2, and frozen.
    Construction rejects inputs whose anti-Hermitian part exceeds ``atol``.
    """

    __slots__ = ("entries", "_spectral")

    def __init__(self, entries, *, atol: float = HERMITICITY_ATOL):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionMismatchError("dimension must be at least 1")
        residual = max_abs(a - a.conj().T)
        if residual > atol:
            raise DomainError(
                f"matrix is not Hermitian: asymmetry {residual:.3e} exceeds {atol:.3e}"
            )
        h = (a + a.conj().T) / 2.0
        h.flags.writeable = False
        self.entries = h
        self._spectral = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls(np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> "HermitianMatrix":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def diagonal(cls, values) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def from_raw(cls, a: np.ndarray) -> "HermitianMatrix":
        """Wrap an array that is Hermitian up to rounding, symmetrizing it.

        For internal results (U diag U*, sums of means, ...) whose
        anti-Hermitian part is pure float noise.
        """
        a = np.asarray(a, dtype=np.complex128)
        return cls((a + a.conj().T) / 2.0, atol=np.inf)

    def norm(self) -> float:
        """Operator (spectral) norm, the largest eigenvalue magnitude."""
        return max_abs(eigendecompose(self).eigenvalues)

    def __add__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        _require_same_dim(self, other)
        return HermitianMatrix.from_raw(self.entries + other.entries)

    def __sub__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        _require_same_dim(self, other)
        return HermitianMatrix.from_raw(self.entries - other.entries)

    def __neg__(self):
        return HermitianMatrix.from_raw(-self.entries)

    def __mul__(self, scalar):
        s = complex(scalar)
        if abs(s.imag) > HERMITICITY_ATOL * max(1.0, abs(s.real)):
            raise DomainError("only real scalar multiples keep a matrix Hermitian")
        return HermitianMatrix.from_raw(self.entries * s.real)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


def _require_same_dim(*mats: HermitianMatrix) -> int:
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise DimensionMismatchError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and a unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def eigendecompose(x: HermitianMatrix) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    Validates unitarity of the eigenbasis and reconstruction of the input;
    a miss raises :class:`NumericalFailureError` with the residual attached.
    Results are cached on the (immutable) matrix.
    """
    if x._spectral is not None:
        return x._spectral
    try:
        w, u = np.linalg.eigh(x.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed to converge: {exc}") from exc
    unit_res = max_abs(u.conj().T @ u - np.eye(x.dim))
    if unit_res > UNITARITY_TOL:
        raise NumericalFailureError("eigenbasis is not unitary", residual=unit_res)
    recon_res = max_abs((u * w) @ u.conj().T - x.entries)
    bound = RECONSTRUCTION_RTOL * max(1.0, max_abs(x.entries))
    if recon_res > bound:
        raise NumericalFailureError("spectral reconstruction residual too large", residual=recon_res)
    dec = SpectralDecomposition(eigenvalues=w, basis=u)
    x._spectral = dec
    return dec


class CommutingTuple:
    """k pairwise-commuting Hermitian matrices with a shared joint eigenbasis.

    ``joint_eigenvalues`` has one row per basis vector; row j lists the
    eigenvalue of each member on that vector, (lambda_1j, ..., lambda_kj).
    """

    __slots__ = ("members", "joint_basis", "joint_eigenvalues")

    def __init__(self, members, joint_basis, joint_eigenvalues, *, validate: bool = True):
        members = tuple(members)
        if not members:
            raise DimensionMismatchError("a commuting tuple needs at least one member")
        dim = _require_same_dim(*members)
        joint_basis = np.asarray(joint_basis, dtype=np.complex128)
        joint_eigenvalues = np.asarray(joint_eigenvalues, dtype=float)
        if joint_basis.shape != (dim, dim):
            raise DimensionMismatchError("joint basis shape does not match member dimension")
        if joint_eigenvalues.shape != (dim, len(members)):
            raise DimensionMismatchError("joint eigenvalue table must be dim x k")
        if validate:
            _validate_commutation(members)
            unit_res = max_abs(joint_basis.conj().T @ joint_basis - np.eye(dim))
            if unit_res > UNITARITY_TOL:
                raise NumericalFailureError("joint basis is not unitary", residual=unit_res)
            for i, m in enumerate(members):
                d = joint_basis.conj().T @ m.entries @ joint_basis
                off = d - np.diag(np.diagonal(d))
                bound = JOINT_DIAG_RTOL * max(1.0, max_abs(m.entries))
                if max_abs(off) > bound:
                    raise NumericalFailureError(
                        f"member {i} is not diagonal in the joint basis",
                        residual=max_abs(off),
                    )
        self.members = members
        self.joint_basis = joint_basis
        self.joint_eigenvalues = joint_eigenvalues

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].dim


def _validate_commutation(members: Sequence[HermitianMatrix]) -> None:
    norms = [m.norm() for m in members]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            a, b = members[i].entries, members[j].entries
            res = max_abs(a @ b - b @ a)
            bound = COMMUTATOR_RTOL * max(norms[i] * norms[j], 1e-300)
            if res > max(bound, 1e-14):
                raise NotCommutingError(
                    f"members {i} and {j} do not commute: residual {res:.3e} > {bound:.3e}"
                )


def _cluster_indices(values: np.ndarray, gap: float):
    """Split sorted values into runs of consecutive near-equal entries."""
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > gap:
            clusters.append(range(start, i))
            start = i
    return clusters


def _refine_degenerate(cols: np.ndarray, entries: Sequence[np.ndarray], start: int) -> np.ndarray:
    """Re-diagonalize members restricted to a jointly degenerate subspace."""
    if start >= len(entries):
        return cols
    m = cols.conj().T @ entries[start] @ cols
    m = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    cols = cols @ v
    spread = float(w[-1] - w[0]) if len(w) > 1 else 0.0
    gap = max(DEGENERACY_GAP_RTOL * spread, 1e-14 * max(1.0, max_abs(w)))
    for cluster in _cluster_indices(w, gap):
        if len(cluster) > 1:
            idx = list(cluster)
            cols[:, idx] = _refine_degenerate(cols[:, idx], entries, start + 1)
    return cols


def joint_diagonalize(members: Sequence[HermitianMatrix]) -> CommutingTuple:
    """Simultaneously diagonalize pairwise-commuting Hermitian matrices.

    Diagonalizes a generic random-coefficient combination of the members
    (coefficients seeded, in [1, 2]); eigenvalue clusters whose gap falls
    below ``DEGENERACY_GAP_RTOL`` times the spread are refined by recursively
    re-diagonalizing the members restricted to the cluster subspace.

    Raises :class:`NotCommutingError` when inputs exceed the commutator
    tolerance and :class:`NumericalFailureError` when the refined basis still
    fails to diagonalize some member.
    """
    members = tuple(members)
    if not members:
        raise DimensionMismatchError("need at least one matrix")
    dim = _require_same_dim(*members)
    _validate_commutation(members)

    entries = [m.entries for m in members]
    rng = np.random.Generator(np.random.Philox(key=_JOINT_DIAG_KEY))
    coeffs = rng.uniform(1.0, 2.0, size=len(members))
    combo = sum(c * a for c, a in zip(coeffs, entries))
    combo = (combo + combo.conj().T) / 2.0
    w, u = np.linalg.eigh(combo)

    spread = float(w[-1] - w[0]) if dim > 1 else 0.0
    gap = max(DEGENERACY_GAP_RTOL * spread, 1e-14 * max(1.0, max_abs(w)))
    for cluster in _cluster_indices(w, gap):
        if len(cluster) > 1:
            idx = list(cluster)
            u[:, idx] = _refine_degenerate(u[:, idx], entries, 0)

    rows = np.empty((dim, len(members)))
    for i, a in enumerate(entries):
        d = u.conj().T @ a @ u
        off = max_abs(d - np.diag(np.diagonal(d)))
        bound = JOINT_DIAG_RTOL * max(1.0, max_abs(a))
        if off > bound:
            raise NumericalFailureError(
                f"joint diagonalization failed on member {i}", residual=off
            )
        rows[:, i] = np.diagonal(d).real
    return CommutingTuple(members, u, rows, validate=False)


def commuting_tuple_from_rows(
    members: Sequence[HermitianMatrix], basis: np.ndarray, rows: np.ndarray
) -> CommutingTuple:
    """Assemble a CommutingTuple whose basis and eigenvalue rows are known."""
    return CommutingTuple(members, basis, rows, validate=False)


def mix_commuting(a: CommutingTuple, b: CommutingTuple, lam: float) -> CommutingTuple:
    """Convex combination lam*a + (1-lam)*b of two commuting tuples.

    When both tuples share the same joint basis the combination keeps that
    basis and mixes the eigenvalue rows; otherwise the mixed members are
    re-diagonalized from scratch (and must still commute).
    """
    if a.k != b.k:
        raise DimensionMismatchError("tuples have different arity")
    members = tuple(
        HermitianMatrix.from_raw(lam * x.entries + (1.0 - lam) * y.entries)
        for x, y in zip(a.members, b.members)
    )
    if a.joint_basis is b.joint_basis or np.array_equal(a.joint_basis, b.joint_basis):
        rows = lam * a.joint_eigenvalues + (1.0 - lam) * b.joint_eigenvalues
        return CommutingTuple(members, a.joint_basis, rows, validate=False)
    return joint_diagonalize(members)


@dataclass(frozen=True)
class MultivariateFunction:
    """A real-valued function on a closed cube of R^arity.

    ``evaluator`` must accept ``arity`` coordinate arrays (numpy
    broadcasting) and return finite real values on the cube. ``is_convex``
    is plain metadata used by the harness catalogs.
    """

    arity: int
    domain: tuple
    evaluator: Callable
    name: str
    is_convex: bool = True

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError("arity must be at least 1")
        if len(self.domain) != self.arity:
            raise DimensionMismatchError("domain must list one interval per argument")
        for lo, hi in self.domain:
            if not lo <= hi:
                raise DomainError(f"empty interval ({lo}, {hi})")

    def __call__(self, *coords):
        return self.evaluator(*coords)

    def evaluate_rows(self, rows: np.ndarray) -> np.ndarray:
        """Evaluate on each row of a (m, arity) coordinate table."""
        cols = [rows[:, i] for i in range(self.arity)]
        out = np.asarray(self.evaluator(*cols), dtype=float)
        return np.broadcast_to(out, (rows.shape[0],)).astype(float, copy=False)


def _check_rows_in_domain(rows: np.ndarray, domain, slack: float = DOMAIN_SLACK) -> None:
    for i, (lo, hi) in enumerate(domain):
        col = rows[:, i]
        if col.min() < lo - slack or col.max() > hi + slack:
            raise DomainError(
                f"eigenvalues of member {i} escape the interval [{lo}, {hi}]: "
                f"range [{col.min():.6g}, {col.max():.6g}]"
            )


def apply_multivariable(f: MultivariateFunction, t: CommutingTuple) -> HermitianMatrix:
    """Evaluate f on a commuting tuple through its joint eigenvalues.

    Returns basis diag(f(row_j)) basis*.
    """
    if f.arity != t.k:
        raise DimensionMismatchError(f"function arity {f.arity} != tuple arity {t.k}")
    _check_rows_in_domain(t.joint_eigenvalues, f.domain)
    vals = f.evaluate_rows(t.joint_eigenvalues)
    if not np.all(np.isfinite(vals)):
        raise DomainError(f"{f.name} produced non-finite values on the joint spectrum")
    u = t.joint_basis
    return HermitianMatrix.from_raw((u * vals) @ u.conj().T)


def apply_scalar(g: MultivariateFunction, x: HermitianMatrix) -> HermitianMatrix:
    """Apply a one-variable function to a Hermitian matrix spectrally."""
    if g.arity != 1:
        raise DimensionMismatchError("apply_scalar needs a one-variable function")
    dec = eigendecompose(x)
    _check_rows_in_domain(dec.eigenvalues[:, None], g.domain)
    vals = np.asarray(g.evaluator(dec.eigenvalues), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError(f"{g.name} produced non-finite values on the spectrum")
    u = dec.basis
    return HermitianMatrix.from_raw((u * vals) @ u.conj().T)


def _eigen_map(x: HermitianMatrix, fn: Callable[[np.ndarray], np.ndarray]) -> HermitianMatrix:
    dec = eigendecompose(x)
    u = dec.basis
    return HermitianMatrix.from_raw((u * fn(dec.eigenvalues)) @ u.conj().T)


def matrix_exp(x: HermitianMatrix) -> HermitianMatrix:
    return _eigen_map(x, np.exp)


def matrix_log(x: HermitianMatrix) -> HermitianMatrix:
    """Spectral logarithm; requires a strictly positive spectrum."""
    w = eigendecompose(x).eigenvalues
    scale = max_abs(w)
    if scale == 0.0 or w.min() <= SINGULARITY_RTOL * scale:
        raise DomainError(
            f"matrix_log needs a strictly positive spectrum, min eigenvalue {w.min():.3e}"
        )
    return _eigen_map(x, np.log)


def matrix_sqrt(x: HermitianMatrix) -> HermitianMatrix:
    """Spectral square root of a positive semidefinite matrix.

    Eigenvalues down to -1e-10 * scale are treated as rounding and clipped.
    """
    w = eigendecompose(x).eigenvalues
    floor = -hybrid_tol(max(1.0, max_abs(w)))
    if w.min() < floor:
        raise DomainError(f"matrix_sqrt needs a PSD input, min eigenvalue {w.min():.3e}")
    return _eigen_map(x, lambda v: np.sqrt(np.clip(v, 0.0, None)))


def matrix_inverse(x: HermitianMatrix) -> HermitianMatrix:
    """Spectral inverse; errors on (near-)singular input instead of regularizing."""
    w = eigendecompose(x).eigenvalues
    scale = max_abs(w)
    if scale == 0.0 or np.abs(w).min() <= SINGULARITY_RTOL * scale:
        raise SingularMatrixError(
            f"matrix is numerically singular: min |eigenvalue| {np.abs(w).min():.3e}"
        )
    return _eigen_map(x, lambda v: 1.0 / v)


def matrix_abs_power(x: HermitianMatrix, p: float) -> HermitianMatrix:
    """|x|^p through the spectral calculus, |x| = absolute eigenvalues."""
    w = eigendecompose(x).eigenvalues
    if p < 0:
        scale = max_abs(w)
        if scale == 0.0 or np.abs(w).min() <= SINGULARITY_RTOL * scale:
            raise SingularMatrixError("negative powers need an invertible matrix")
    return _eigen_map(x, lambda v: np.abs(v) ** p)


def psd_check(x: HermitianMatrix, floor: float) -> bool:
    """True iff the minimum eigenvalue of x is at least ``floor``.

    The Loewner comparison a <= b is psd_check(b - a, -tol).
    """
    return bool(eigendecompose(x).eigenvalues.min() >= floor)
