"""Seeded, reproducible random matrices, unitaries, and commuting tuples.

All randomness flows through numpy's counter-based Philox generator so the
same seed always reproduces the same bits; suites derive one sub-seed per
trial from (seed, trial index).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .hermitian import CommutingTuple, HermitianMatrix, commuting_tuple_from_rows

GENERATOR_NAME = f"numpy.random.Philox-{np.__version__}"


def rng_from_seed(seed) -> np.random.Generator:
    """A Philox generator from an integer seed; generators pass through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed)))


def trial_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit sub-seed for trial ``index`` of a run seeded by ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, np.uint64)[0])


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-ish random unitary: QR of a complex Gaussian with phase-fixed R."""
    rng = rng_from_seed(seed)
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, interval, seed) -> HermitianMatrix:
    """U diag(lambda) U* with lambda uniform in ``interval`` and U seeded random.

    The spectrum is inside the interval by construction.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo <= hi:
        raise DomainError(f"empty interval ({lo}, {hi})")
    rng = rng_from_seed(seed)
    u = random_unitary(dim, rng)
    lam = rng.uniform(lo, hi, size=dim) if hi > lo else np.full(dim, lo)
    return HermitianMatrix.from_raw((u * lam) @ u.conj().T)


def random_commuting_tuple(dim: int, k: int, intervals: Sequence, seed) -> CommutingTuple:
    """k commuting Hermitians sharing one seeded eigenbasis.

    Member i has spectrum drawn uniformly from intervals[i]; all members are
    U diag(.) U* for the same U, so commutators vanish to machine precision.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if len(intervals) != k:
        raise DimensionMismatchError("need one interval per member")
    rng = rng_from_seed(seed)
    u = random_unitary(dim, rng)
    rows = np.empty((dim, k))
    members = []
    for i, (lo, hi) in enumerate(intervals):
        lam = rng.uniform(float(lo), float(hi), size=dim) if hi > lo else np.full(dim, float(lo))
        rows[:, i] = lam
        members.append(HermitianMatrix.from_raw((u * lam) @ u.conj().T))
    return commuting_tuple_from_rows(members, u, rows)


def tensor_pair_tuple(x: HermitianMatrix, y: HermitianMatrix) -> CommutingTuple:
    """The exactly-commuting pair (x (x) I, I (x) y) on dim(x)*dim(y).

    Realizes two genuinely distinct commuting subalgebras; the joint basis is
    the tensor product of the factor eigenbases.
    """
    from .hermitian import eigendecompose

    dx, dy = x.dim, y.dim
    ex, ey = eigendecompose(x), eigendecompose(y)
    basis = np.kron(ex.basis, ey.basis)
    rows = np.column_stack(
        [np.repeat(ex.eigenvalues, dy), np.tile(ey.eigenvalues, dx)]
    )
    members = (
        HermitianMatrix.from_raw(np.kron(x.entries, np.eye(dy))),
        HermitianMatrix.from_raw(np.kron(np.eye(dx), y.entries)),
    )
    return commuting_tuple_from_rows(members, basis, rows)
