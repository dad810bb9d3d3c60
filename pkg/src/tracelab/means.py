"""Operator means of positive matrices: parallel sum, n-fold harmonic mean,
geometric mean, means generated by discrete measures, and the block-matrix
characterization of the harmonic-mean bound.

Means are evaluated through an epsilon-regularization schedule (inputs
shifted by eps*I for a decreasing ladder of eps, then Richardson
extrapolated) so that singular PSD inputs are handled by the same code path
as strictly positive ones. Matrix inverses always go through an
eigendecomposition so near-singular spectra are detected uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    MeanConvergenceError,
    NumericalFailureError,
    SingularMatrixError,
)
from .hermitian import (
    HermitianMatrix,
    SINGULARITY_RTOL,
    eigendecompose,
    max_abs,
    psd_check,
)

EPSILON_SCHEDULE = (1e-4, 1e-5, 1e-6)
EXTRAPOLATION_TOL = 1e-6
PSD_INPUT_FLOOR_RTOL = 1e-10
PARALLEL_CROSS_CHECK_RTOL = 1e-8
LOEWNER_ABS_TOL = 1e-9
LOEWNER_REL_TOL = 1e-8


def loewner_floor(scale: float) -> float:
    """Tolerance floor for minimum-eigenvalue comparisons."""
    return -max(LOEWNER_ABS_TOL, LOEWNER_REL_TOL * scale)


def _inverse_nd(a: np.ndarray) -> np.ndarray:
    """Eigendecomposition-based inverse of a Hermitian array."""
    a = (a + a.conj().T) / 2.0
    w, u = np.linalg.eigh(a)
    scale = float(np.abs(w).max()) if w.size else 0.0
    if scale == 0.0 or np.abs(w).min() <= SINGULARITY_RTOL * scale:
        raise SingularMatrixError(
            f"matrix inverse on a numerically singular matrix, min |eig| {np.abs(w).min():.3e}"
        )
    return (u * (1.0 / w)) @ u.conj().T


def _sqrt_nd(a: np.ndarray) -> np.ndarray:
    a = (a + a.conj().T) / 2.0
    w, u = np.linalg.eigh(a)
    return (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T


def _validate_psd_inputs(mats: Sequence[HermitianMatrix]) -> float:
    """Check PSD within the rounding floor; return the common scale (max norm)."""
    if not mats:
        raise DimensionMismatchError("need at least one matrix")
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise DimensionMismatchError(f"dimension mismatch: {sorted(dims)}")
    scale = 0.0
    for m in mats:
        w = eigendecompose(m).eigenvalues
        norm = float(np.abs(w).max())
        if w.min() < -PSD_INPUT_FLOOR_RTOL * max(1.0, norm):
            raise DomainError(f"input is not positive semidefinite, min eigenvalue {w.min():.3e}")
        scale = max(scale, norm)
    return scale


def _epsilon_limit(evaluate, scale: float) -> np.ndarray:
    """Richardson-extrapolated limit of evaluate(eps) over the eps schedule.

    Extrapolates the last two schedule points and cross-checks against the
    extrapolant of the first two; a spread above EXTRAPOLATION_TOL * scale
    means the limit is not resolved (the input is effectively singular for
    this mean) and raises :class:`MeanConvergenceError`.
    """
    eps = [e * scale for e in EPSILON_SCHEDULE]
    h = [evaluate(e) for e in eps]
    r12 = h[1] + (h[1] - h[0]) * eps[1] / (eps[0] - eps[1])
    r23 = h[2] + (h[2] - h[1]) * eps[2] / (eps[1] - eps[2])
    spread = max_abs(r12 - r23)
    if spread > EXTRAPOLATION_TOL * max(1.0, scale):
        raise MeanConvergenceError(
            "epsilon-limit extrapolants disagree; mean not resolved at this schedule",
            residual=spread,
        )
    return r23


def harmonic_mean(xs: Sequence[HermitianMatrix]) -> HermitianMatrix:
    """n-fold harmonic mean n (sum x_i^-1)^-1 of PSD matrices.

    Always evaluated through the epsilon schedule, so singular inputs get
    their norm-limit value; for strictly positive inputs the result matches
    the direct inverse-sum-inverse formula.
    """
    xs = tuple(xs)
    scale = _validate_psd_inputs(xs)
    n = len(xs)
    dim = xs[0].dim
    if scale == 0.0:
        return HermitianMatrix.zero(dim)
    eye = np.eye(dim)

    def evaluate(eps):
        acc = np.zeros((dim, dim), dtype=complex)
        for x in xs:
            acc += _inverse_nd(x.entries + eps * eye)
        return n * _inverse_nd(acc)

    return HermitianMatrix.from_raw(_epsilon_limit(evaluate, scale))


def parallel_sum(x: HermitianMatrix, y: HermitianMatrix) -> HermitianMatrix:
    """Half the two-fold harmonic mean, (x^-1 + y^-1)^-1 in the limit sense.

    Cross-checked against the congruence route x (x+y)^-1 y whenever x + y
    is invertible; disagreement raises :class:`NumericalFailureError`.
    """
    h = harmonic_mean((x, y))
    result = 0.5 * h
    s = x.entries + y.entries
    w = np.linalg.eigvalsh(s)
    scale = float(np.abs(w).max()) if w.size else 0.0
    if scale > 0.0 and np.abs(w).min() > SINGULARITY_RTOL * scale:
        alt = x.entries @ _inverse_nd(s) @ y.entries
        alt = (alt + alt.conj().T) / 2.0
        gap = max_abs(result.entries - alt)
        if gap > PARALLEL_CROSS_CHECK_RTOL * max(1.0, max_abs(alt)):
            raise NumericalFailureError(
                "parallel-sum routes disagree beyond tolerance", residual=gap
            )
    return result


def geometric_mean(x: HermitianMatrix, y: HermitianMatrix) -> HermitianMatrix:
    """Geometric mean x^(1/2) (x^(-1/2) y x^(-1/2))^(1/2) x^(1/2) of PSD matrices.

    Evaluated through the epsilon schedule. For inputs with a genuinely
    singular direction the limit converges like sqrt(eps) and the schedule
    reports non-convergence rather than returning an unresolved value.
    """
    scale = _validate_psd_inputs((x, y))
    dim = x.dim
    if scale == 0.0:
        return HermitianMatrix.zero(dim)
    eye = np.eye(dim)

    def evaluate(eps):
        a = x.entries + eps * eye
        b = y.entries + eps * eye
        w, u = np.linalg.eigh((a + a.conj().T) / 2.0)
        sq = (u * np.sqrt(w)) @ u.conj().T
        isq = (u * (1.0 / np.sqrt(w))) @ u.conj().T
        inner = _sqrt_nd(isq @ b @ isq)
        return sq @ inner @ sq

    return HermitianMatrix.from_raw(_epsilon_limit(evaluate, scale))


class DiscreteMeanMeasure:
    """A probability measure with finitely many atoms on [0, inf].

    Atom positions 0 and inf are allowed and contribute the endpoint limits
    of the mean integrand (w*x and w*y respectively). Weights are positive
    and sum to 1 within 1e-12.
    """

    __slots__ = ("atoms",)

    def __init__(self, atoms):
        atoms = tuple((float(t), float(w)) for t, w in atoms)
        if not atoms:
            raise DomainError("a mean measure needs at least one atom")
        total = 0.0
        seen = set()
        for t, w in atoms:
            if not (t >= 0.0 or np.isinf(t)):
                raise DomainError(f"atom position {t} outside [0, inf]")
            if w <= 0.0:
                raise DomainError("atom weights must be positive")
            if t in seen:
                raise DomainError(f"duplicate atom position {t}")
            seen.add(t)
            total += w
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"atom weights sum to {total!r}, not 1")
        self.atoms = atoms

    @classmethod
    def point_mass(cls, t: float) -> "DiscreteMeanMeasure":
        return cls(((t, 1.0),))


def kubo_ando_mean(
    mu: DiscreteMeanMeasure, x: HermitianMatrix, y: HermitianMatrix
) -> HermitianMatrix:
    """The operator mean generated by mu: half the weighted sum of
    (t x ! y)(1 + 1/t) over the atoms, with endpoint atoms contributing x
    (at t=0) and y (at t=inf)."""
    _validate_psd_inputs((x, y))
    acc = np.zeros((x.dim, x.dim), dtype=complex)
    for t, w in mu.atoms:
        if t == 0.0:
            acc += w * x.entries
        elif np.isinf(t):
            acc += w * y.entries
        else:
            part = harmonic_mean((t * x, y))
            acc += 0.5 * w * (1.0 + 1.0 / t) * part.entries
    return HermitianMatrix.from_raw(acc)


def harmonic_mean_scalar(values: Sequence[float]) -> float:
    """Scalar n-fold harmonic mean with the limit convention at zero."""
    values = [float(v) for v in values]
    if any(v < 0 for v in values):
        raise DomainError("scalar harmonic mean needs nonnegative values")
    if any(v == 0.0 for v in values):
        return 0.0
    return len(values) / sum(1.0 / v for v in values)


def kubo_ando_mean_scalar(mu: DiscreteMeanMeasure, a: float, b: float) -> float:
    """The scalar mean generated by mu, same formula on nonnegative numbers."""
    if a < 0 or b < 0:
        raise DomainError("scalar mean needs nonnegative arguments")
    out = 0.0
    for t, w in mu.atoms:
        if t == 0.0:
            out += w * a
        elif np.isinf(t):
            out += w * b
        else:
            denom = t * a + b
            part = 2.0 * t * a * b / denom if denom > 0.0 else 0.0
            out += 0.5 * w * (1.0 + 1.0 / t) * part
    return out


class BlockMatrix:
    """An n x n grid of cell_dim x cell_dim complex cells, Hermitian overall."""

    __slots__ = ("cells",)

    def __init__(self, cells):
        c = np.asarray(cells, dtype=np.complex128)
        if c.ndim != 4 or c.shape[0] != c.shape[1] or c.shape[2] != c.shape[3]:
            raise DimensionMismatchError("cells must have shape (n, n, c, c)")
        n = c.shape[0]
        for i in range(n):
            for j in range(i, n):
                res = max_abs(c[i, j] - c[j, i].conj().T)
                if res > 1e-12:
                    raise DomainError(
                        f"block matrix is not Hermitian: cells ({i},{j})/({j},{i}) "
                        f"differ by {res:.3e}"
                    )
        self.cells = c

    @property
    def block_dim(self) -> int:
        return self.cells.shape[0]

    @property
    def cell_dim(self) -> int:
        return self.cells.shape[2]

    def to_matrix(self) -> HermitianMatrix:
        n, c = self.block_dim, self.cell_dim
        full = self.cells.transpose(0, 2, 1, 3).reshape(n * c, n * c)
        return HermitianMatrix.from_raw(full)


def build_prop18_blocks(xs: Sequence[HermitianMatrix], y: HermitianMatrix):
    """The block-diagonal matrix of the x_i and the all-cells-y block matrix."""
    xs = tuple(xs)
    if not xs:
        raise DimensionMismatchError("need at least one diagonal block")
    c = y.dim
    if any(x.dim != c for x in xs):
        raise DimensionMismatchError("all cells must share one dimension")
    n = len(xs)
    d_cells = np.zeros((n, n, c, c), dtype=complex)
    e_cells = np.empty((n, n, c, c), dtype=complex)
    for i in range(n):
        d_cells[i, i] = xs[i].entries
        for j in range(n):
            e_cells[i, j] = y.entries
    return BlockMatrix(d_cells), BlockMatrix(e_cells)


@dataclass(frozen=True)
class Prop18Verdict:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool

    @property
    def agree(self) -> bool:
        return self.cond_i == self.cond_ii == self.cond_iii


def _loewner_geq_zero(a: np.ndarray, scale: float) -> bool:
    w = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
    return bool(w.min() >= loewner_floor(max(1.0, scale)))


def prop18_equivalence_check(xs: Sequence[HermitianMatrix], y: HermitianMatrix) -> Prop18Verdict:
    """Evaluate the three equivalent characterizations of y <= (sum x_k^-1)^-1.

    (i) the inverse-sum bound dominates y; (ii) e d^-1 e <= e; (iii) e <= d,
    for d = diag(x_1, ..., x_n) and e the all-cells-y block matrix. Each is
    a minimum-eigenvalue check with floor -1e-8 * scale.
    """
    xs = tuple(xs)
    for m in xs + (y,):
        w = eigendecompose(m).eigenvalues
        scale = float(np.abs(w).max()) if w.size else 0.0
        if scale == 0.0 or w.min() <= SINGULARITY_RTOL * scale:
            raise DomainError("all inputs must be positive definite")

    bound = _inverse_nd(sum(_inverse_nd(x.entries) for x in xs))
    scale_i = max(max_abs(bound), max_abs(y.entries))
    cond_i = _loewner_geq_zero(bound - y.entries, scale_i)

    d, e = build_prop18_blocks(xs, y)
    dm = d.to_matrix().entries
    em = e.to_matrix().entries
    scale_blocks = max(max_abs(dm), max_abs(em))
    cond_ii = _loewner_geq_zero(em - em @ _inverse_nd(dm) @ em, scale_blocks)
    cond_iii = _loewner_geq_zero(dm - em, scale_blocks)
    return Prop18Verdict(cond_i=cond_i, cond_ii=cond_ii, cond_iii=cond_iii)


def subadditivity_gap(
    xs: Sequence[HermitianMatrix], ys: Sequence[HermitianMatrix]
) -> HermitianMatrix:
    """sum y_j x_j^-1 y_j - (sum y_j)(sum x_j)^-1 (sum y_j); PSD for PD x_j."""
    xs, ys = tuple(xs), tuple(ys)
    if len(xs) != len(ys) or not xs:
        raise DimensionMismatchError("need matching nonempty sequences")
    dims = {m.dim for m in xs + ys}
    if len(dims) != 1:
        raise DimensionMismatchError("all matrices must share one dimension")
    for x in xs:
        w = eigendecompose(x).eigenvalues
        if w.min() <= SINGULARITY_RTOL * max(1.0, float(np.abs(w).max())):
            raise DomainError("the x_j must be positive definite")
    acc = np.zeros_like(xs[0].entries)
    for x, y in zip(xs, ys):
        acc = acc + y.entries @ _inverse_nd(x.entries) @ y.entries
    ysum = sum(y.entries for y in ys)
    xsum = sum(x.entries for x in xs)
    acc = acc - ysum @ _inverse_nd(xsum) @ ysum
    return HermitianMatrix.from_raw(acc)


def loewner_leq(a: HermitianMatrix, b: HermitianMatrix, *, scale: float | None = None) -> bool:
    """a <= b in the Loewner order, up to the standard tolerance floor."""
    if scale is None:
        scale = max(1.0, a.norm(), b.norm())
    return psd_check(b - a, loewner_floor(scale))
