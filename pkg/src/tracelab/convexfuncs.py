"""Catalogs of convex (and deliberately concave) test functions on cubes."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .hermitian import MultivariateFunction

_AFFINE_KEY = 0xA5EED
_SYM_CUBE = (-1.0, 1.0)
_POS_CUBE = (0.1, 2.0)
_UNIT_CUBE = (0.05, 0.95)


def max_of_affines(slopes, intercepts, domain) -> MultivariateFunction:
    """Pointwise maximum of affine maps; the generic piecewise-linear convex function."""
    slopes = np.asarray(slopes, dtype=float)
    intercepts = np.asarray(intercepts, dtype=float)
    if slopes.ndim != 2 or slopes.shape[0] != intercepts.shape[0]:
        raise DomainError("need one intercept per affine piece")
    arity = slopes.shape[1]

    def evaluator(*coords):
        grid = np.broadcast_arrays(*coords)
        stacked = np.stack(grid, axis=-1)
        vals = stacked @ slopes.T + intercepts
        return vals.max(axis=-1)

    return MultivariateFunction(
        arity=arity,
        domain=tuple(domain),
        evaluator=evaluator,
        name=f"max-of-{slopes.shape[0]}-affines",
    )


def _seeded_max_affine(arity: int, pieces: int = 3) -> MultivariateFunction:
    rng = np.random.Generator(np.random.Philox(key=_AFFINE_KEY + arity))
    slopes = rng.uniform(-1.0, 1.0, size=(pieces, arity))
    intercepts = rng.uniform(-0.5, 0.5, size=pieces)
    return max_of_affines(slopes, intercepts, (_SYM_CUBE,) * arity)


def convex_catalog(arity: int) -> tuple:
    """Convex test functions for the given arity, plus concave negatives.

    Entries carry ``is_convex`` metadata; the final two entries of each
    catalog are the concave reversals.
    """
    if arity not in (1, 2, 3):
        raise DomainError("catalogs are provided for arities 1, 2, 3")
    cube = (_SYM_CUBE,) * arity

    def f(name, evaluator, domain=cube, convex=True):
        return MultivariateFunction(
            arity=arity, domain=domain, evaluator=evaluator, name=name, is_convex=convex
        )

    def sum_of(*coords):
        return np.sum(np.broadcast_arrays(*coords), axis=0)

    entries = [
        f("exp-sum", lambda *c: np.exp(sum_of(*c))),
        f("square-sum", lambda *c: sum_of(*c) ** 2),
        f("abs-sum^1.5", lambda *c: np.abs(sum_of(*c)) ** 1.5),
        f("abs-sum^3", lambda *c: np.abs(sum_of(*c)) ** 3),
        _seeded_max_affine(arity),
    ]
    if arity == 2:
        entries.extend(
            [
                f("exp-square-pair", lambda a, b: np.exp((a + b) ** 2)),
                f(
                    "exp-neg-product",
                    lambda a, b: np.exp(-(a ** 0.4) * (b ** 0.5)),
                    domain=(_POS_CUBE, _POS_CUBE),
                ),
                f(
                    "complement-product-sq",
                    lambda a, b: (1.0 - (a ** 0.5) * (b ** 0.5)) ** 2,
                    domain=(_UNIT_CUBE, _UNIT_CUBE),
                ),
            ]
        )
    entries.extend(
        [
            f("neg-exp-sum", lambda *c: -np.exp(sum_of(*c)), convex=False),
            f("neg-square-sum", lambda *c: -(sum_of(*c) ** 2), convex=False),
        ]
    )
    return tuple(entries)
