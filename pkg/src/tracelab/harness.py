"""Randomized property suites certifying the library's inequality claims.

Each suite runs seeded trials, measures signed inequality violations
normalized by max(1, |lhs|, |rhs|), and reports pass/fail with the worst
violation and the sub-seed of the worst trial. Two suites are deliberately
adversarial (a convexity window that must break, and a fixed
non-implication witness); they pass when the expected breakage occurs.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .convexfuncs import convex_catalog
from .ellpairs import (
    catalog,
    check_homogeneity,
    check_ratio_convexity,
    pair_bounded_ratio,
    pair_log_log,
)
from .errors import DomainError
from .hermitian import (
    CommutingTuple,
    HermitianMatrix,
    MultivariateFunction,
    commuting_tuple_from_rows,
    eigendecompose,
    matrix_sqrt,
    max_abs,
    mix_commuting,
    psd_check,
)
from .means import (
    BlockMatrix,
    DiscreteMeanMeasure,
    geometric_mean,
    harmonic_mean,
    harmonic_mean_scalar,
    kubo_ando_mean,
    kubo_ando_mean_scalar,
    loewner_floor,
    prop18_equivalence_check,
    subadditivity_gap,
    _inverse_nd,
)
from .randomgen import (
    GENERATOR_NAME,
    random_commuting_tuple,
    random_hermitian,
    random_unitary,
    tensor_pair_tuple,
    trial_seed,
)
from .traces import (
    BasisFrame,
    TraceFunctional,
    diagonal_surrogate,
    kf_determinant,
    schatten_norm,
    schatten_quasi_power,
    surrogate_supremum_probe,
    trace_of_function,
)

PROBE_LAMBDAS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration of one verification run."""

    suite: str
    dims: tuple = (2, 4, 8)
    tuple_arity: int = 2
    trials: int = 500
    seed: int = 42
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    tensor_mode: bool = True
    report_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims or any(d < 1 for d in self.dims):
            raise DomainError("dims must be a nonempty list of positive integers")
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if not 1 <= self.tuple_arity <= 4:
            raise DomainError("tuple arity must be between 1 and 4")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite run; verdict is pass exactly when failures == 0."""

    suite: str
    config: SuiteConfig
    trials: int
    failures: int
    max_violation: float
    worst_case_seed: int
    verdict: str
    elapsed_seconds: float
    generator: str

    def to_json(self) -> str:
        cfg = self.config
        doc = {
            "suite": self.suite,
            "config": {
                "suite": cfg.suite,
                "dims": list(cfg.dims),
                "tupleArity": cfg.tuple_arity,
                "trials": cfg.trials,
                "seed": cfg.seed,
                "absTol": cfg.abs_tol,
                "relTol": cfg.rel_tol,
                "tensorMode": cfg.tensor_mode,
                "reportPath": cfg.report_path,
            },
            "trials": self.trials,
            "failures": self.failures,
            "maxViolation": self.max_violation,
            "worstCaseSeed": self.worst_case_seed,
            "verdict": self.verdict,
            "elapsedSeconds": self.elapsed_seconds,
            "generator": self.generator,
        }
        return _dumps(doc)


def _dumps(obj) -> str:
    """JSON with floats at 17 significant digits and stable key order."""
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(k)}: {_dumps(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return format(obj, ".17g")
    if obj is None:
        return "null"
    return json.dumps(obj)


class Tally:
    """Accumulates normalized signed violations for one trial (or checklist).

    Every check contributes excess/scale where excess <= tolerance passes;
    the reported violation stays <= 0 for comfortable passes.
    """

    def __init__(self, abs_tol: float, rel_tol: float):
        self.abs_tol = abs_tol
        self.rel_tol = rel_tol
        self.failures = 0
        self.worst = -math.inf

    def _record(self, excess: float, scale: float) -> None:
        scale = max(1.0, scale)
        if excess > max(self.abs_tol, self.rel_tol * scale):
            self.failures += 1
        self.worst = max(self.worst, excess / scale)

    def leq(self, lhs: float, rhs: float) -> None:
        """Expect lhs <= rhs up to tolerance."""
        self._record(lhs - rhs, max(abs(lhs), abs(rhs)))

    def close(self, a: float, b: float, *, abs_tol=None, rel_tol=None) -> None:
        """Expect |a - b| within (possibly overridden) tolerance."""
        scale = max(1.0, abs(a), abs(b))
        at = self.abs_tol if abs_tol is None else abs_tol
        rt = self.rel_tol if rel_tol is None else rel_tol
        excess = abs(a - b) - max(at, rt * scale)
        if excess > 0:
            self.failures += 1
        self.worst = max(self.worst, excess / scale)

    def loewner_leq(self, a: HermitianMatrix, b: HermitianMatrix) -> None:
        """Expect a <= b in the Loewner order up to the eigenvalue floor."""
        gap = b - a
        min_eig = float(eigendecompose(gap).eigenvalues.min())
        scale = max(a.norm(), b.norm())
        self._record(-min_eig, scale)

    def matrix_close(self, a: HermitianMatrix, b: HermitianMatrix, *, rel_tol=None) -> None:
        raw = max_abs(a.entries - b.entries)
        scale = max(1.0, max_abs(a.entries), max_abs(b.entries))
        rt = self.rel_tol if rel_tol is None else rel_tol
        excess = raw - max(self.abs_tol, rt * scale)
        if excess > 0:
            self.failures += 1
        self.worst = max(self.worst, excess / scale)

    def expect(self, flag: bool) -> None:
        """A binary check; a failed expectation is a unit violation."""
        self._record(-1.0 if flag else 1.0, 1.0)


def affine_mix(a, b, lam: float):
    """lam * a + (1 - lam) * b for matrices, commuting tuples, sequences, numbers."""
    if isinstance(a, HermitianMatrix):
        return lam * a + (1.0 - lam) * b
    if isinstance(a, CommutingTuple):
        return mix_commuting(a, b, lam)
    if isinstance(a, (tuple, list)):
        return type(a)(affine_mix(x, y, lam) for x, y in zip(a, b))
    return lam * a + (1.0 - lam) * b


def run_convexity_probe(value_map, point_a, point_b, lambdas, *, mix=None) -> float:
    """Worst signed convexity violation of value_map along the segment.

    Returns max over lambda of value(mix) - [lam*value(A) + (1-lam)*value(B)];
    values <= 0 certify convexity along the probed segment. Flip signs of the
    value map for concavity.
    """
    mixer = affine_mix if mix is None else mix
    for lam in lambdas:
        if not 0.0 < lam < 1.0:
            raise DomainError("lambdas must lie strictly inside (0, 1)")
    va = value_map(point_a)
    vb = value_map(point_b)
    worst = -math.inf
    for lam in lambdas:
        vm = value_map(mixer(point_a, point_b, lam))
        worst = max(worst, vm - (lam * va + (1.0 - lam) * vb))
    return worst


def _probe_segment(tally: Tally, value_map, point_a, point_b, *, mix=None) -> None:
    """Record the per-lambda convexity gaps of a segment into the tally."""
    mixer = affine_mix if mix is None else mix
    va = value_map(point_a)
    vb = value_map(point_b)
    for lam in PROBE_LAMBDAS:
        vm = value_map(mixer(point_a, point_b, lam))
        tally.leq(vm, lam * va + (1.0 - lam) * vb)


# ---------------------------------------------------------------------------
# shared drawing helpers


def _dim(cfg: SuiteConfig, t: int, cap: int | None = None) -> int:
    d = cfg.dims[t % len(cfg.dims)]
    return min(d, cap) if cap else d


def _kind(t: int) -> str:
    return "standard" if t % 2 == 0 else "normalized"


def _single_tuple(x: HermitianMatrix) -> CommutingTuple:
    dec = eigendecompose(x)
    return commuting_tuple_from_rows((x,), dec.basis, dec.eigenvalues[:, None])


def _shared_rows_tuple(u: np.ndarray, rows: np.ndarray) -> CommutingTuple:
    members = tuple(
        HermitianMatrix.from_raw((u * rows[:, i]) @ u.conj().T) for i in range(rows.shape[1])
    )
    return commuting_tuple_from_rows(members, u, rows)


def _convex_f(arity: int, index: int) -> MultivariateFunction:
    fs = [f for f in convex_catalog(arity) if f.is_convex]
    return fs[index % len(fs)]


def _random_pd(rng, dim: int, interval=(0.1, 2.0)) -> HermitianMatrix:
    return random_hermitian(dim, interval, rng)


# ---------------------------------------------------------------------------
# suites over the trace/surrogate inequalities


def _trial_jensen(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    k = 1 + t % min(cfg.tuple_arity, 3)
    dim = _dim(cfg, t)
    f = _convex_f(k, t // len(cfg.dims))
    tf = TraceFunctional(_kind(t), dim)
    tup = random_commuting_tuple(dim, k, f.domain, rng)
    total = trace_of_function(tf, f, tup)
    for _ in range(8):
        frame = BasisFrame(random_unitary(dim, rng))
        tally.leq(diagonal_surrogate(tf, f, tup, frame), total)
    at_joint = diagonal_surrogate(tf, f, tup, BasisFrame(tup.joint_basis))
    tally.close(at_joint, total, abs_tol=1e-9, rel_tol=1e-9)


def _trial_surrogate_supremum(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    k = 1 + t % min(cfg.tuple_arity, 3)
    dim = _dim(cfg, t)
    f = _convex_f(k, t // len(cfg.dims))
    tf = TraceFunctional(_kind(t), dim)
    tup = random_commuting_tuple(dim, k, f.domain, rng)
    total = trace_of_function(tf, f, tup)
    sup = surrogate_supremum_probe(tf, f, tup, 8, rng)
    tally.close(sup, total, abs_tol=1e-9, rel_tol=1e-9)


def _trial_theorem2(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    arity = 1 + t % min(cfg.tuple_arity, 3)
    f = _convex_f(arity, t // 3)
    kind = _kind(t)
    if arity == 2 and cfg.tensor_mode:
        dim = _dim(cfg, t)
        tf = TraceFunctional(kind, dim * dim)

        def value(slots):
            return trace_of_function(tf, f, tensor_pair_tuple(*slots))

        point_a = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
        point_b = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
        _probe_segment(tally, value, point_a, point_b)
    else:
        dim = _dim(cfg, t, cap=12)
        tf = TraceFunctional(kind, dim)
        u = random_unitary(dim, rng)
        rows_a = np.column_stack([rng.uniform(lo, hi, dim) for lo, hi in f.domain])
        rows_b = np.column_stack([rng.uniform(lo, hi, dim) for lo, hi in f.domain])

        def value(rows):
            return trace_of_function(tf, f, _shared_rows_tuple(u, rows))

        def mix(a, b, lam):
            return lam * a + (1.0 - lam) * b

        _probe_segment(tally, value, rows_a, rows_b, mix=mix)


# ---------------------------------------------------------------------------
# composed-convexity suites

_P_GRID = (1.5, 2.0, 3.0)
_ALPHA_GRID = (0.5, 1.0, 2.0)


def _e_target_window(pair) -> tuple:
    """A comfortable sub-interval of the pair's e-domain for composed values."""
    base = pair.name.split("(")[0]
    p = dict(pair.params).get("p", 2.0)
    table = {
        "log": (-2.0, 2.0),
        "root": (0.05, 2.0),
        "inverse-power": (-2.0, -0.1),
        "reflected-root": (-2.0, -0.1),
        "negative-exponential": (-2.0, -0.1),
        "log-log": (-3.0, -0.05),
        "root-of-log": (0.02, 0.9 * (1.0 + p) / p ** 2),
        "complement-root": (0.05, 0.95),
        "bounded-ratio": (0.05, 0.8),
    }
    return table[base]


def _bounded_convex_g(rng, arity: int, lo: float, hi: float, style: int) -> MultivariateFunction:
    """A seeded convex g on [-1, 1]^arity with range exactly inside [lo, hi].

    Built from a base shape with an analytically known range, then remapped
    affinely (increasing), which preserves convexity.
    """
    cube = ((-1.0, 1.0),) * arity
    style = style % 3
    if style == 0:
        coeffs = rng.uniform(-1.0, 1.0, size=arity)
        coeffs[np.argmax(np.abs(coeffs))] = max(0.25, abs(coeffs).max())
        gmax = float(np.abs(coeffs).sum())
        gmin, base_name = -gmax, "affine"

        def base(*cs):
            return sum(c * v for c, v in zip(coeffs, np.broadcast_arrays(*cs)))

    elif style == 1:
        shift = float(rng.uniform(-arity, arity))
        gmax = max(abs(-arity - shift), abs(arity - shift)) ** 2
        gmin = 0.0 if -arity <= shift <= arity else (abs(shift) - arity) ** 2
        base_name = "shifted-square"

        def base(*cs):
            return (np.sum(np.broadcast_arrays(*cs), axis=0) - shift) ** 2

    else:
        gmin, gmax, base_name = math.exp(-arity), math.exp(arity), "exp-sum"

        def base(*cs):
            return np.exp(np.sum(np.broadcast_arrays(*cs), axis=0))

    span = (hi - lo) / (gmax - gmin)

    def evaluator(*cs):
        return lo + (base(*cs) - gmin) * span

    return MultivariateFunction(
        arity=arity, domain=cube, evaluator=evaluator, name=f"{base_name}->[{lo:g},{hi:g}]"
    )


def _compose_with_e(pair, g: MultivariateFunction) -> MultivariateFunction:
    def evaluator(*cs):
        return pair.e(np.asarray(g.evaluator(*cs), dtype=float))

    return MultivariateFunction(
        arity=g.arity, domain=g.domain, evaluator=evaluator, name=f"{pair.name} o {g.name}"
    )


def _ell_segment_trial(cfg: SuiteConfig, t: int, rng, tally: Tally, pair, kind: str) -> None:
    """Probe convexity of ell(tau(e(g(.)))) along a random commuting segment."""
    arity = 1 + t % min(cfg.tuple_arity, 2)
    lo, hi = _e_target_window(pair)
    g = _bounded_convex_g(rng, arity, lo, hi, style=t // 9)
    f = _compose_with_e(pair, g)
    if arity == 2 and cfg.tensor_mode:
        dim = _dim(cfg, t)
        tf = TraceFunctional(kind, dim * dim)

        def value(slots):
            return float(pair.ell(trace_of_function(tf, f, tensor_pair_tuple(*slots))))

        point_a = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
        point_b = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
        _probe_segment(tally, value, point_a, point_b)
    elif arity == 1:
        dim = _dim(cfg, t, cap=12)
        tf = TraceFunctional(kind, dim)

        def value(x):
            return float(pair.ell(trace_of_function(tf, f, _single_tuple(x))))

        a = random_hermitian(dim, f.domain[0], rng)
        b = random_hermitian(dim, f.domain[0], rng)
        _probe_segment(tally, value, a, b)
    else:
        dim = _dim(cfg, t, cap=12)
        tf = TraceFunctional(kind, dim)
        u = random_unitary(dim, rng)
        rows_a = np.column_stack([rng.uniform(lo_, hi_, dim) for lo_, hi_ in f.domain])
        rows_b = np.column_stack([rng.uniform(lo_, hi_, dim) for lo_, hi_ in f.domain])

        def value(rows):
            return float(pair.ell(trace_of_function(tf, f, _shared_rows_tuple(u, rows))))

        _probe_segment(tally, value, rows_a, rows_b, mix=lambda a, b, lam: lam * a + (1 - lam) * b)


def _trial_theorem3(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    p = _P_GRID[t % len(_P_GRID)]
    alpha = _ALPHA_GRID[(t // 3) % len(_ALPHA_GRID)]
    pair = catalog(p, alpha)[t % 9]
    homogeneous = pair.homogeneous_gamma is not None
    # non-normalized traces are only covered by the homogeneous pairs
    kind = _kind(t) if homogeneous else "normalized"
    _ell_segment_trial(cfg, t, rng, tally, pair, kind)


def _trial_corollary11(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    p = _P_GRID[t % len(_P_GRID)]
    alpha = _ALPHA_GRID[(t // 3) % len(_ALPHA_GRID)]
    # the three composed forms: p-th root, negative power, reflected power
    pair = catalog(p, alpha)[1 + t % 3]
    _ell_segment_trial(cfg, t, rng, tally, pair, _kind(t))


def _trial_remark12(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    form = t % 4
    kind = _kind(t)
    dim = _dim(cfg, t)
    tf = TraceFunctional(kind, dim * dim)
    cube2 = lambda iv: (iv, iv)

    if form == 0:
        f = MultivariateFunction(2, cube2((-1.0, 1.0)), lambda a, b: np.exp((a + b) ** 2), "exp((x+y)^2)")
        post = math.log
    elif form == 1:
        al, be = ((0.4, 0.5), (0.5, 0.5), (0.3, 0.3))[(t // 4) % 3]
        f = MultivariateFunction(
            2, cube2((0.1, 2.0)), lambda a, b: np.exp(-(a ** al) * (b ** be)), "exp(-x^a y^b)"
        )
        post = math.log
    elif form == 2:
        p, q = ((1.0, 2.0), (2.0, 2.0), (2.0, 3.0), (1.5, 3.0))[(t // 4) % 4]
        f = MultivariateFunction(2, cube2((0.1, 2.0)), lambda a, b: (a + b) ** q, "(x+y)^q")
        post = lambda v: v ** (1.0 / p)
    else:
        p = (1.0, 2.0, 3.0)[(t // 4) % 3]
        al, be = ((0.5, 0.5), (0.3, 0.5))[(t // 8) % 2]
        f = MultivariateFunction(
            2,
            cube2((0.05, 0.95)),
            lambda a, b: (1.0 - (a ** al) * (b ** be)) ** p,
            "(1-x^a y^b)^p",
        )
        post = lambda v: v ** (1.0 / p)

    def value(slots):
        return post(trace_of_function(tf, f, tensor_pair_tuple(*slots)))

    point_a = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
    point_b = tuple(random_hermitian(dim, iv, rng) for iv in f.domain)
    _probe_segment(tally, value, point_a, point_b)


# ---------------------------------------------------------------------------
# Schatten / determinant suites


def _trial_schatten(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t)
    tf = TraceFunctional("standard", dim)
    x = random_hermitian(dim, (0.05, 2.0), rng)
    y = random_hermitian(dim, (0.05, 2.0), rng)
    for p in (1.5, 2.0, 4.0):
        lhs = schatten_quasi_power(tf, x, p) + schatten_quasi_power(tf, y, p)
        tally.leq(lhs, schatten_quasi_power(tf, x + y, p))
    w = random_hermitian(dim, (-2.0, 2.0), rng)
    v = random_hermitian(dim, (-2.0, 2.0), rng)
    for p in (1.0, 2.0, 4.0):
        tally.leq(schatten_norm(tf, w + v, p), schatten_norm(tf, w, p) + schatten_norm(tf, v, p))


def _trial_determinant(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t)
    tf = TraceFunctional("normalized", dim)
    x = _random_pd(rng, dim)
    y = _random_pd(rng, dim)
    dx, dy = kf_determinant(tf, x), kf_determinant(tf, y)
    tally.leq(0.5 * dx + 0.5 * dy, kf_determinant(tf, 0.5 * (x + y)))
    tally.close(kf_determinant(tf, x.entries @ y.entries), dx * dy, rel_tol=1e-8)
    lam = float(rng.uniform(0.5, 2.0))
    tally.close(kf_determinant(tf, lam * x), lam * dx, rel_tol=1e-8)
    # concave transformation before the determinant keeps concavity
    a, b = _random_pd(rng, dim), _random_pd(rng, dim)

    def value(m):
        return kf_determinant(tf, matrix_sqrt(m))

    for lam_ in PROBE_LAMBDAS:
        mid = value(lam_ * a + (1.0 - lam_) * b)
        tally.leq(lam_ * value(a) + (1.0 - lam_) * value(b), mid)


# ---------------------------------------------------------------------------
# operator-mean suites


def _trial_harmonic_concavity(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=8)
    n = 2 + t % min(cfg.tuple_arity + 1, 3)
    xs = [_random_pd(rng, dim) for _ in range(n)]
    ys = [_random_pd(rng, dim) for _ in range(n)]
    mid = harmonic_mean([0.5 * (x + y) for x, y in zip(xs, ys)])
    tally.loewner_leq(0.5 * harmonic_mean(xs) + 0.5 * harmonic_mean(ys), mid)
    # monotonicity under PSD increments
    bumps = [random_hermitian(dim, (0.0, 1.0), rng) for _ in range(n)]
    tally.loewner_leq(harmonic_mean(xs), harmonic_mean([x + b for x, b in zip(xs, bumps)]))


def _trial_harmonic_vs_arithmetic(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=8)
    n = 2 + t % 3
    xs = [_random_pd(rng, dim) for _ in range(n)]
    arithmetic = (1.0 / n) * sum(xs[1:], xs[0])
    tally.loewner_leq(harmonic_mean(xs), arithmetic)
    # the congruence-sum gap is PSD
    ys = [random_hermitian(dim, (-1.0, 1.0), rng) for _ in range(n)]
    gap = subadditivity_gap(xs, ys)
    tally.loewner_leq(HermitianMatrix.zero(dim), gap)


def _trial_prop18(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=4)
    n = 2 + t % 3
    xs = [_random_pd(rng, dim) for _ in range(n)]
    bound = HermitianMatrix.from_raw(_inverse_nd(sum(_inverse_nd(x.entries) for x in xs)))
    case = t % 6
    if case == 0:
        y, expected = 0.5 * bound, True
    elif case == 1:
        y, expected = 0.999 * bound, True
    elif case == 2:
        y, expected = bound, True
    elif case == 3:
        y, expected = 1.001 * bound, False
    elif case == 4:
        y, expected = 1e-6 * HermitianMatrix.identity(dim), True
    else:
        y, expected = _random_pd(rng, dim, (0.01, 0.5)), None
    verdict = prop18_equivalence_check(xs, y)
    tally.expect(verdict.agree)
    if expected is not None:
        tally.expect(verdict.cond_i == expected)


def _trial_corollary19(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=4)
    n = 2 + t % 3
    xs = [_random_pd(rng, dim) for _ in range(n)]
    bound = HermitianMatrix.from_raw(_inverse_nd(sum(_inverse_nd(x.entries) for x in xs)))
    bump = random_hermitian(dim, (0.05, 1.0), rng)
    y = bound + (1e-3 * bound.norm()) * bump
    verdict = prop18_equivalence_check(xs, y)
    tally.expect(not verdict.cond_iii)
    tally.expect(verdict.agree)


def _spectral_trace_power(tf: TraceFunctional, x: HermitianMatrix, fn, alpha: float) -> float:
    w = np.clip(eigendecompose(x).eigenvalues, 0.0, None)
    return float((np.sum(fn(w) ** alpha) * tf.weight) ** (1.0 / alpha))


def _trial_prop21(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=8)
    n = 2 + t % 2
    p = (1.0, 2.0, 3.0)[t % 3]
    alpha = _ALPHA_GRID[(t // 3) % 3]
    fn = (lambda w: w ** (1.0 / p)) if t % 2 == 0 else (lambda w: np.log1p(w ** (1.0 / p)))
    tf = TraceFunctional(_kind(t // 2), dim)
    xs = [_random_pd(rng, dim) for _ in range(n)]
    lhs = _spectral_trace_power(tf, harmonic_mean(xs), fn, alpha)
    rhs = harmonic_mean_scalar([_spectral_trace_power(tf, x, fn, alpha) for x in xs])
    tally.leq(lhs, rhs)


def _random_measure(rng) -> DiscreteMeanMeasure:
    k = int(rng.integers(1, 5))
    ts = list(10.0 ** rng.uniform(-2.0, 2.0, size=k))
    if rng.random() < 0.3:
        ts.append(0.0)
    if rng.random() < 0.3:
        ts.append(math.inf)
    w = rng.uniform(0.2, 1.0, size=len(ts))
    w = w / w.sum()
    return DiscreteMeanMeasure(zip(ts, w))


def _congruence(z: np.ndarray, x: HermitianMatrix) -> HermitianMatrix:
    return HermitianMatrix.from_raw(z.conj().T @ x.entries @ z)


def _trial_kubo_ando(cfg: SuiteConfig, t: int, rng, tally: Tally) -> None:
    dim = _dim(cfg, t, cap=8)
    tf = TraceFunctional(_kind(t), dim)
    x = _random_pd(rng, dim, (0.05, 2.0))
    y = _random_pd(rng, dim, (0.05, 2.0))
    tx, ty = tf.value(x), tf.value(y)
    measures = [_random_measure(rng) for _ in range(20)]
    for mu in measures:
        m = kubo_ando_mean(mu, x, y)
        tally.leq(tf.value(m), kubo_ando_mean_scalar(mu, tx, ty))
    # normalization and congruence-invariance axioms
    mu = measures[0]
    eye = HermitianMatrix.identity(dim)
    tally.matrix_close(kubo_ando_mean(mu, eye, eye), eye, rel_tol=1e-9)
    z = random_unitary(dim, rng) * rng.uniform(0.5, 2.0, size=dim)
    for mean in (
        lambda a, b: kubo_ando_mean(mu, a, b),
        lambda a, b: harmonic_mean((a, b)),
        geometric_mean,
    ):
        lhs = _congruence(z, mean(x, y))
        rhs = mean(_congruence(z, x), _congruence(z, y))
        tally.matrix_close(lhs, rhs, rel_tol=1e-7)


# ---------------------------------------------------------------------------
# checklist suites (deterministic)


def _checklist_ell_criteria(cfg: SuiteConfig, tally: Tally) -> int:
    checks = 0
    for p, alpha in ((2.0, 1.0), (1.5, 0.5), (3.0, 2.0)):
        pairs = catalog(p, alpha)
        known_gamma = (-1.0, -p / (p - 1.0), -1.0 / (1.0 + alpha), 1.0 / (p - 1.0))
        for i, pair in enumerate(pairs):
            verdict = check_ratio_convexity(pair, 801)
            tally.expect(verdict.convex_on_domain)
            checks += 1
            hom = check_homogeneity(pair, 801)
            tally.expect(hom.homogeneous == (i < 4))
            checks += 1
            if i < 4:
                tally.close(hom.gamma, known_gamma[i], abs_tol=1e-6, rel_tol=1e-6)
                checks += 1
    # the bounded-ratio pair degenerates to an affine (convex, inhomogeneous)
    # ratio at p = 1
    special = pair_bounded_ratio(1.0)
    tally.expect(check_ratio_convexity(special, 801).convex_on_domain)
    tally.expect(not check_homogeneity(special, 801).homogeneous)
    ts = np.linspace(0.5, 5.0, 9)
    ratio = special.ell_prime(ts) / special.ell_second(ts)
    tally.close(float(np.abs(ratio + 0.5 * (1.0 + ts)).max()), 0.0, abs_tol=1e-9, rel_tol=1e-9)
    return checks + 3


def _checklist_loglog(cfg: SuiteConfig, tally: Tally) -> int:
    pair = pair_log_log()
    ok = check_ratio_convexity(pair, 801)
    tally.expect(ok.convex_on_domain)
    beyond = check_ratio_convexity(pair, 2001, window=(1.05, 10.0))
    tally.expect(not beyond.convex_on_domain)
    tally.expect(beyond.worst_point > math.e)
    return 3


# found by seeded brute-force search over 2x2 PSD pairs: z sits strictly
# below the square root of y while z^2 is not below y
_WITNESS_Y = ((4.0, 0.0), (0.0, 0.01))
_WITNESS_Z = ((1.5, 0.15), (0.15, 0.05))


def _checklist_remark20(cfg: SuiteConfig, tally: Tally) -> int:
    x = HermitianMatrix.identity(2)
    y = HermitianMatrix(np.array(_WITNESS_Y))
    z = HermitianMatrix(np.array(_WITNESS_Z))
    mean = geometric_mean(x, y)
    tally.matrix_close(mean, matrix_sqrt(y), rel_tol=1e-8)
    tally.expect(psd_check(z, loewner_floor(1.0)))
    tally.expect(psd_check(mean - z, 0.0))
    zsq = HermitianMatrix.from_raw(z.entries @ z.entries)
    tally.expect(not psd_check(y - zsq, loewner_floor(max(1.0, y.norm()))))
    cells = np.array(
        [[x.entries, z.entries], [z.entries, y.entries]], dtype=complex
    )
    block = BlockMatrix(cells).to_matrix()
    tally.expect(not psd_check(block, loewner_floor(max(1.0, y.norm()))))
    return 5


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class SuiteDefinition:
    name: str
    description: str
    run_trial: Callable | None = None
    run_checklist: Callable | None = None


SUITES = {
    s.name: s
    for s in (
        SuiteDefinition(
            "jensen-eq1",
            "basis-diagonal compressions of a convex function never exceed the trace value; equality at the joint eigenbasis",
            run_trial=_trial_jensen,
        ),
        SuiteDefinition(
            "surrogate-supremum",
            "the trace of a convex function equals the supremum of diagonal surrogates over orthonormal frames",
            run_trial=_trial_surrogate_supremum,
        ),
        SuiteDefinition(
            "theorem2-convexity",
            "the trace of a jointly convex function is jointly convex on commuting tuples",
            run_trial=_trial_theorem2,
        ),
        SuiteDefinition(
            "theorem3-ellconvexity",
            "composed convexity ell(trace(e(g(.)))) survives the functional calculus for all nine catalog pairs",
            run_trial=_trial_theorem3,
        ),
        SuiteDefinition(
            "corollary11-forms",
            "root-, negative-power-, and reflected-power-composed trace functions stay convex",
            run_trial=_trial_corollary11,
        ),
        SuiteDefinition(
            "eq33-36-remark12",
            "four composed two-variable trace maps (log-exp-square, log-exp-product, root-power, root-complement) are jointly convex",
            run_trial=_trial_remark12,
        ),
        SuiteDefinition(
            "eq38-schatten",
            "super-additivity of (trace(x^(1/p)))^p and subadditivity of the trace p-norms",
            run_trial=_trial_schatten,
        ),
        SuiteDefinition(
            "prop13-determinant",
            "the normalized-trace determinant exp(tau(log|x|)) is concave, multiplicative, and positively homogeneous",
            run_trial=_trial_determinant,
        ),
        SuiteDefinition(
            "prop16-harmonic-concavity",
            "the n-fold harmonic mean is jointly concave and monotone in the Loewner order",
            run_trial=_trial_harmonic_concavity,
        ),
        SuiteDefinition(
            "eq49-harmonic-vs-arithmetic",
            "the harmonic mean is dominated by the arithmetic mean; the congruence-sum gap is PSD",
            run_trial=_trial_harmonic_vs_arithmetic,
        ),
        SuiteDefinition(
            "prop18-equivalence",
            "three block-matrix characterizations of the harmonic-mean bound agree on every instance",
            run_trial=_trial_prop18,
        ),
        SuiteDefinition(
            "corollary19-maximality",
            "any PSD perturbation above the harmonic-mean bound breaks the block domination",
            run_trial=_trial_corollary19,
        ),
        SuiteDefinition(
            "prop21-harmonic-trace",
            "trace-power functionals of a harmonic mean are dominated by the scalar harmonic mean of the values",
            run_trial=_trial_prop21,
        ),
        SuiteDefinition(
            "prop23-kubo-ando",
            "the trace of an operator mean is dominated by the scalar mean of the trace values",
            run_trial=_trial_kubo_ando,
        ),
        SuiteDefinition(
            "ell-catalog-criteria",
            "ratio convexity holds for all nine catalog pairs; the ratio is proportional to t exactly for the first four",
            run_checklist=_checklist_ell_criteria,
        ),
        SuiteDefinition(
            "loglog-beyond-e",
            "adversarial: the log-log ratio loses convexity somewhere past its validity endpoint",
            run_checklist=_checklist_loglog,
        ),
        SuiteDefinition(
            "remark20-witness",
            "adversarial: z below the geometric mean with the two-by-two block matrix not PSD",
            run_checklist=_checklist_remark20,
        ),
    )
}

SUITE_ORDER = tuple(SUITES)


def list_suites() -> list[str]:
    """One line per suite: name and what it certifies."""
    lines = [f"{name}: {SUITES[name].description}" for name in SUITE_ORDER]
    lines.append("all: every suite above, aggregated")
    return lines


def _write_report(report: SuiteReport) -> None:
    path = report.config.report_path
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run one suite (or 'all') and return its report.

    Deterministic for a fixed config apart from the elapsed time.
    """
    start = time.perf_counter()
    if cfg.suite == "all":
        trials = failures = 0
        worst = -math.inf
        worst_seed = cfg.seed
        for name in SUITE_ORDER:
            sub = run_suite(replace(cfg, suite=name, report_path=None))
            trials += sub.trials
            failures += sub.failures
            if sub.max_violation > worst:
                worst = sub.max_violation
                worst_seed = sub.worst_case_seed
        report = SuiteReport(
            suite="all",
            config=cfg,
            trials=trials,
            failures=failures,
            max_violation=worst,
            worst_case_seed=worst_seed,
            verdict="pass" if failures == 0 else "fail",
            elapsed_seconds=time.perf_counter() - start,
            generator=GENERATOR_NAME,
        )
        _write_report(report)
        return report

    if cfg.suite not in SUITES:
        raise DomainError(
            f"unknown suite {cfg.suite!r}; known suites: {', '.join(SUITE_ORDER)}, all"
        )
    definition = SUITES[cfg.suite]

    if definition.run_checklist is not None:
        tally = Tally(cfg.abs_tol, cfg.rel_tol)
        trials = definition.run_checklist(cfg, tally)
        failures = tally.failures
        worst = tally.worst
        worst_seed = cfg.seed
    else:
        trials = cfg.trials
        failures = 0
        worst = -math.inf
        worst_seed = cfg.seed
        for t in range(cfg.trials):
            sub_seed = trial_seed(cfg.seed, t)
            rng = np.random.Generator(np.random.Philox(key=sub_seed))
            tally = Tally(cfg.abs_tol, cfg.rel_tol)
            definition.run_trial(cfg, t, rng, tally)
            failures += tally.failures
            if tally.worst > worst:
                worst = tally.worst
                worst_seed = sub_seed

    report = SuiteReport(
        suite=cfg.suite,
        config=cfg,
        trials=trials,
        failures=failures,
        max_violation=worst,
        worst_case_seed=worst_seed,
        verdict="pass" if failures == 0 else "fail",
        elapsed_seconds=time.perf_counter() - start,
        generator=GENERATOR_NAME,
    )
    _write_report(report)
    return report
