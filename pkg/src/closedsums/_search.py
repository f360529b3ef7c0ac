"""Derivative-free maximisation helpers shared by the sampled paths and the
brute-force oracles.  Nothing here knows about singular values."""

from __future__ import annotations

import numpy as np


def unit_sphere_samples(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def compass_maximize(fn, x0, step=0.5, min_step=1e-9, max_evals=200_000, project=None):
    """Maximise ``fn`` by compass (pattern) search started at ``x0``.

    Polls +/- each coordinate direction at the current step, moves on any
    improvement, halves the step when none is found.  ``project`` (if given)
    is applied to every accepted point, e.g. to stay on the unit sphere.
    Returns ``(x_best, f_best, n_evals)``.
    """
    x = np.array(x0, dtype=float)
    if project is not None:
        x = project(x)
    fx = fn(x)
    evals = 1
    dim = x.size
    while step > min_step and evals < max_evals:
        improved = False
        for i in range(dim):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[i] += sgn * step
                if project is not None:
                    y = project(y)
                fy = fn(y)
                evals += 1
                if fy > fx:
                    x, fx = y, fy
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, fx, evals


def _to_sphere(x):
    return x / np.linalg.norm(x)


def multistart_sphere_max(fn, dim, rng, n_samples=2000, n_refine=5, min_step=1e-9):
    """Maximise a scale-invariant ``fn`` over directions in R^dim.

    Random sampling followed by compass refinement of the best few samples.
    Ties keep the lowest-index sample.
    """
    if dim == 1:
        x = np.ones(1)
        return x, fn(x)
    starts = unit_sphere_samples(rng, n_samples, dim)
    vals = np.array([fn(s) for s in starts])
    order = np.argsort(-vals, kind="stable")[:n_refine]
    best_x, best_f = None, -np.inf
    for idx in order:
        x, fx, _ = compass_maximize(
            fn, starts[idx], step=0.25, min_step=min_step, project=_to_sphere, max_evals=50_000
        )
        if fx > best_f:
            best_x, best_f = x / np.linalg.norm(x), fx
    return best_x, best_f
