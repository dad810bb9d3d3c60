"""Inverse pairs (e, ell) of convex/concave rescaling functions.

Each pair holds a strictly increasing convex ``e`` and its concave inverse
``ell`` together with first and second derivatives in closed form (derived
symbolically once, then compiled to numpy). The criteria implemented here
decide whether composing a convex function with ``e`` keeps the composed
trace value convex after applying ``ell``: the ratio ell'/ell'' must be
convex, and must be proportional to t for the property to survive
non-normalized traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp

from .errors import DomainError
from .hermitian import MultivariateFunction

RATIO_TOL_REL = 1e-8
SECOND_DERIV_FLOOR = 1e-12
_JENSEN_KEY = 0x5DEECE66D
_JENSEN_TRIALS = 200


@dataclass(frozen=True)
class EllPair:
    """A concave rescaling ``ell`` and its convex increasing inverse ``e``.

    ``ell_domain`` / ``e_domain`` are the validity intervals (possibly
    unbounded); ``grid_window`` / ``e_grid_window`` are the finite
    sub-intervals used for grid-based checks.
    """

    name: str
    ell_domain: tuple
    e_domain: tuple
    ell: Callable
    ell_prime: Callable
    ell_second: Callable
    e: Callable
    e_prime: Callable
    e_second: Callable
    homogeneous_gamma: float | None
    grid_window: tuple
    e_grid_window: tuple
    params: tuple = ()


@dataclass(frozen=True)
class ConvexityVerdict:
    convex_on_domain: bool
    worst_second_difference: float
    worst_point: float


@dataclass(frozen=True)
class HomogeneityVerdict:
    homogeneous: bool
    gamma: float | None


_T, _S = sp.symbols("t s", real=True)


def _compile(expr, sym) -> Callable:
    fn = sp.lambdify(sym, expr, modules="numpy")

    def wrapped(v, _fn=fn):
        arr = np.asarray(v, dtype=float)
        out = np.asarray(_fn(arr), dtype=float)
        if not np.ndim(v):
            return float(out)
        # constant derivatives lambdify to scalars; keep the input shape
        return np.broadcast_to(out, arr.shape).copy() if out.shape != arr.shape else out

    return wrapped


def _build_pair(
    name: str,
    ell_expr,
    e_expr,
    ell_domain,
    e_domain,
    grid_window,
    homogeneous_gamma,
    params=(),
    e_grid_window=None,
) -> EllPair:
    ell = _compile(ell_expr, _T)
    ell_prime = _compile(sp.diff(ell_expr, _T), _T)
    ell_second = _compile(sp.diff(ell_expr, _T, 2), _T)
    e = _compile(e_expr, _S)
    e_prime = _compile(sp.diff(e_expr, _S), _S)
    e_second = _compile(sp.diff(e_expr, _S, 2), _S)
    if e_grid_window is None:
        lo, hi = ell(grid_window[0]), ell(grid_window[1])
        e_grid_window = (min(lo, hi), max(lo, hi))
    return EllPair(
        name=name,
        ell_domain=tuple(ell_domain),
        e_domain=tuple(e_domain),
        ell=ell,
        ell_prime=ell_prime,
        ell_second=ell_second,
        e=e,
        e_prime=e_prime,
        e_second=e_second,
        homogeneous_gamma=homogeneous_gamma,
        grid_window=tuple(grid_window),
        e_grid_window=tuple(e_grid_window),
        params=tuple(params),
    )


def pair_log() -> EllPair:
    return _build_pair(
        "log", sp.log(_T), sp.exp(_S),
        ell_domain=(0.0, math.inf), e_domain=(-math.inf, math.inf),
        grid_window=(1e-2, 100.0), homogeneous_gamma=-1.0,
    )


def pair_root(p: float = 2.0) -> EllPair:
    if p <= 1:
        raise DomainError("the root pair needs p > 1")
    return _build_pair(
        f"root(p={p:g})", _T ** (1.0 / p), _S ** p,
        ell_domain=(0.0, math.inf), e_domain=(0.0, math.inf),
        grid_window=(1e-3, 100.0), homogeneous_gamma=-p / (p - 1.0),
        params=(("p", p),),
    )


def pair_inverse_power(alpha: float = 1.0) -> EllPair:
    if alpha <= 0:
        raise DomainError("the inverse-power pair needs alpha > 0")
    return _build_pair(
        f"inverse-power(alpha={alpha:g})", -_T ** (-alpha), (-_S) ** (-1.0 / alpha),
        ell_domain=(0.0, math.inf), e_domain=(-math.inf, 0.0),
        grid_window=(1e-2, 100.0), homogeneous_gamma=-1.0 / (1.0 + alpha),
        params=(("alpha", alpha),),
    )


def pair_reflected_root(p: float = 2.0) -> EllPair:
    if p <= 1:
        raise DomainError("the reflected-root pair needs p > 1")
    return _build_pair(
        f"reflected-root(p={p:g})", -((-_T) ** p), -((-_S) ** (1.0 / p)),
        ell_domain=(-math.inf, 0.0), e_domain=(-math.inf, 0.0),
        grid_window=(-100.0, -1e-3), homogeneous_gamma=1.0 / (p - 1.0),
        params=(("p", p),),
    )


def pair_negative_exponential() -> EllPair:
    # the decay-rate parameter cancels inside trace compositions, so it is
    # fixed at 1
    return _build_pair(
        "negative-exponential", -sp.exp(-_T), -sp.log(-_S),
        ell_domain=(-math.inf, math.inf), e_domain=(-math.inf, 0.0),
        grid_window=(-5.0, 5.0), homogeneous_gamma=None,
    )


def pair_log_log() -> EllPair:
    # the ratio ell'/ell'' stops being convex past t = e, which bounds the
    # validity interval
    return _build_pair(
        "log-log", sp.log(sp.log(_T)), sp.exp(sp.exp(_S)),
        ell_domain=(1.0, math.e), e_domain=(-math.inf, 0.0),
        grid_window=(1.05, math.e), homogeneous_gamma=None,
    )


def pair_root_of_log(p: float = 2.0) -> EllPair:
    if p <= 1:
        raise DomainError("the root-of-log pair needs p > 1")
    t_hi = math.exp(1.0 + 1.0 / p)
    s_hi = (1.0 + p) / p ** 2
    return _build_pair(
        f"root-of-log(p={p:g})", sp.log(_T) ** (1.0 / p), sp.exp(_S ** p),
        ell_domain=(1.0, t_hi), e_domain=(0.0, s_hi),
        grid_window=(1.0 + 1e-3, t_hi - 1e-6), homogeneous_gamma=None,
        params=(("p", p),),
        e_grid_window=(1e-3, s_hi - 1e-6),
    )


def pair_complement_root(p: float = 2.0) -> EllPair:
    if p <= 1:
        raise DomainError("the complement-root pair needs p > 1")
    return _build_pair(
        f"complement-root(p={p:g})",
        (1 - (1 - _T) ** p) ** (1.0 / p),
        1 - (1 - _S ** p) ** (1.0 / p),
        ell_domain=(0.0, 1.0), e_domain=(0.0, 1.0),
        grid_window=(1e-3, 1.0 - 1e-3), homogeneous_gamma=None,
        params=(("p", p),),
    )


def pair_bounded_ratio(p: float = 2.0) -> EllPair:
    if p < 1:
        raise DomainError("the bounded-ratio pair needs p >= 1")
    return _build_pair(
        f"bounded-ratio(p={p:g})",
        _T ** (1.0 / p) / (1 + _T ** (1.0 / p)),
        _S ** p * (1 - _S) ** (-p),
        ell_domain=(0.0, math.inf), e_domain=(0.0, 1.0),
        grid_window=(1e-3, 100.0), homogeneous_gamma=None,
        params=(("p", p),),
    )


@lru_cache(maxsize=32)
def catalog(p: float = 2.0, alpha: float = 1.0) -> tuple:
    """The nine catalog pairs, domains restricted to their validity intervals.

    Order: log, root, inverse-power, reflected-root, negative-exponential,
    log-log, root-of-log, complement-root, bounded-ratio. The first four
    have a homogeneous ratio ell'/ell''; the rest do not.
    """
    return (
        pair_log(),
        pair_root(p),
        pair_inverse_power(alpha),
        pair_reflected_root(p),
        pair_negative_exponential(),
        pair_log_log(),
        pair_root_of_log(p),
        pair_complement_root(p),
        pair_bounded_ratio(p),
    )


def grid_points(window, n: int) -> np.ndarray:
    """n interior points, uniformly spaced in the open window."""
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise DomainError(f"degenerate window ({lo}, {hi})")
    return np.linspace(lo, hi, n + 2)[1:-1]


def _ratio_values(pair: EllPair, ts: np.ndarray) -> np.ndarray:
    num = np.asarray(pair.ell_prime(ts), dtype=float)
    den = np.asarray(pair.ell_second(ts), dtype=float)
    bad = np.abs(den) <= SECOND_DERIV_FLOOR
    if np.any(bad):
        where = np.asarray(ts)[bad]
        raise DomainError(f"ell'' vanishes near t={where.flat[0]:.6g}; ratio undefined")
    return num / den


def ratio_phi(pair: EllPair, t: float) -> float:
    """phi(t) = -ell'(t) / ell''(t); positive for increasing concave ell."""
    lo, hi = pair.ell_domain
    if not lo < t < hi:
        raise DomainError(f"t={t:.6g} is not interior to the domain ({lo}, {hi})")
    return float(-_ratio_values(pair, np.asarray([t]))[0])


def check_ratio_convexity(pair: EllPair, grid_size: int, *, window=None) -> ConvexityVerdict:
    """Certify discrete convexity of ell'/ell'' on a grid over the window.

    Uses uniform-grid second differences plus seeded random three-point
    Jensen probes; reports the worst signed margin (negative = violation)
    and where it occurs.
    """
    if grid_size < 5:
        raise DomainError("grid_size must be at least 5")
    window = pair.grid_window if window is None else window
    ts = grid_points(window, grid_size)
    r = _ratio_values(pair, ts)

    second = r[:-2] + r[2:] - 2.0 * r[1:-1]
    scales = np.maximum(1.0, np.maximum.reduce([np.abs(r[:-2]), np.abs(r[1:-1]), np.abs(r[2:])]))
    margins = second / scales
    worst_idx = int(np.argmin(margins))
    worst = float(margins[worst_idx])
    worst_point = float(ts[worst_idx + 1])

    rng = np.random.Generator(np.random.Philox(key=_JENSEN_KEY))
    lo, hi = float(ts[0]), float(ts[-1])
    a = rng.uniform(lo, hi, size=_JENSEN_TRIALS)
    b = rng.uniform(lo, hi, size=_JENSEN_TRIALS)
    lam = rng.uniform(0.1, 0.9, size=_JENSEN_TRIALS)
    mid = lam * a + (1.0 - lam) * b
    ra, rb, rm = (_ratio_values(pair, v) for v in (a, b, mid))
    jm = (lam * ra + (1.0 - lam) * rb - rm) / np.maximum(
        1.0, np.maximum.reduce([np.abs(ra), np.abs(rb), np.abs(rm)])
    )
    j_idx = int(np.argmin(jm))
    if jm[j_idx] < worst:
        worst = float(jm[j_idx])
        worst_point = float(mid[j_idx])

    return ConvexityVerdict(
        convex_on_domain=bool(worst >= -RATIO_TOL_REL),
        worst_second_difference=worst,
        worst_point=worst_point,
    )


def check_homogeneity(pair: EllPair, grid_size: int) -> HomogeneityVerdict:
    """Test ell'(t)/ell''(t) = gamma * t on a grid, gamma fitted by least squares."""
    if grid_size < 5:
        raise DomainError("grid_size must be at least 5")
    ts = grid_points(pair.grid_window, grid_size)
    r = _ratio_values(pair, ts)
    gamma = float(np.sum(r * ts) / np.sum(ts * ts))
    residual = np.abs(r - gamma * ts)
    ok = bool(np.all(residual <= RATIO_TOL_REL * np.maximum(1.0, np.abs(r))))
    return HomogeneityVerdict(homogeneous=ok, gamma=gamma if ok else None)


def _ell_of(pair: EllPair, values: np.ndarray) -> np.ndarray:
    lo, hi = pair.ell_domain
    if values.min() < lo - 1e-9 or values.max() > hi + 1e-9:
        raise DomainError(
            f"function range [{values.min():.6g}, {values.max():.6g}] escapes "
            f"the ell domain ({lo}, {hi})"
        )
    out = np.asarray(pair.ell(np.clip(values, lo, hi)), dtype=float)
    if not np.all(np.isfinite(out)):
        raise DomainError("ell produced non-finite values on the function range")
    return out


def is_ell_convex_scalar(pair: EllPair, f: MultivariateFunction, grid_size: int) -> bool:
    """Numerically certify that ell(f(.)) is midpoint convex on f's cube."""
    if grid_size < 5:
        raise DomainError("grid_size must be at least 5")
    tol = RATIO_TOL_REL

    # axis grids through the cube center
    center = np.array([(lo + hi) / 2.0 for lo, hi in f.domain])
    for axis, (lo, hi) in enumerate(f.domain):
        ts = np.linspace(lo, hi, grid_size)
        pts = np.tile(center, (grid_size, 1))
        pts[:, axis] = ts
        h = _ell_of(pair, f.evaluate_rows(pts))
        second = h[:-2] + h[2:] - 2.0 * h[1:-1]
        scale = np.maximum(1.0, np.maximum.reduce([np.abs(h[:-2]), np.abs(h[1:-1]), np.abs(h[2:])]))
        if np.any(second / scale < -tol):
            return False

    # random segment probes (the only full-cube coverage for arity >= 2,
    # extra coverage for arity 1)
    rng = np.random.Generator(np.random.Philox(key=_JENSEN_KEY + 1))
    lows = np.array([lo for lo, _ in f.domain])
    highs = np.array([hi for _, hi in f.domain])
    for _ in range(_JENSEN_TRIALS):
        a = rng.uniform(lows, highs)
        b = rng.uniform(lows, highs)
        lam = float(rng.uniform(0.1, 0.9))
        pts = np.vstack([a, b, lam * a + (1.0 - lam) * b])
        ha, hb, hm = _ell_of(pair, f.evaluate_rows(pts))
        scale = max(1.0, abs(ha), abs(hb), abs(hm))
        if (lam * ha + (1.0 - lam) * hb - hm) / scale < -tol:
            return False
    return True
