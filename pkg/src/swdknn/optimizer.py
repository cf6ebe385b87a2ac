"""Nelder-Mead simplex minimization (Lagarias, Reeds, Wright & Wright 1998).

The implementation follows the ordered variant of the method: vertices are
kept sorted by objective value, a newly accepted vertex is placed after any
existing vertex with an equal value, and after a shrink the best vertex keeps
its position on ties. All sorting is stable, so a run is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import NonFiniteObjective


@dataclass(frozen=True)
class SimplexConfig:
    """Termination criteria and step coefficients.

    ``max_iter=None`` means ``200 * n`` where ``n`` is the problem dimension.
    """

    tol_x: float = 1e-8
    tol_f: float = 1e-8
    max_iter: Optional[int] = None
    rho: float = 1.0
    chi: float = 2.0
    gamma: float = 0.5
    sigma: float = 0.5

    def __post_init__(self):
        if not (self.tol_x > 0 and self.tol_f > 0):
            raise ValueError("tol_x and tol_f must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if not self.rho > 0:
            raise ValueError("reflection coefficient must be > 0")
        if not self.chi > 1:
            raise ValueError("expansion coefficient must be > 1")
        if not 0 < self.gamma < 1:
            raise ValueError("contraction coefficient must lie in (0, 1)")
        if not 0 < self.sigma < 1:
            raise ValueError("shrink coefficient must lie in (0, 1)")

    def iteration_cap(self, n: int) -> int:
        return self.max_iter if self.max_iter is not None else 200 * n


@dataclass
class MinimizeResult:
    x_min: np.ndarray
    f_min: float
    iterations: int
    converged: bool
    n_evals: int = 0
    # best objective value after initialization and after every iteration
    best_history: list = field(default_factory=list)


def initial_simplex(x0: Sequence[float], nonzero_delta: float = 0.05,
                    zero_delta: float = 0.00025) -> np.ndarray:
    """Axis-aligned starting simplex, one perturbed copy of ``x0`` per axis.

    Coordinate ``i`` of vertex ``i + 1`` is scaled by ``1 + nonzero_delta``,
    or set to ``zero_delta`` when it is exactly zero. Tiny nonzero
    coordinates therefore give a tiny simplex; pass ``simplex=`` to
    ``nelder_mead`` when the start is not on a natural scale.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    n = x0.size
    sim = np.tile(x0, (n + 1, 1))
    for i in range(n):
        if x0[i] != 0:
            sim[i + 1, i] = (1 + nonzero_delta) * x0[i]
        else:
            sim[i + 1, i] = zero_delta
    return sim


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    x0: Sequence[float],
    config: Optional[SimplexConfig] = None,
    *,
    simplex: Optional[np.ndarray] = None,
    callback: Optional[Callable[[int, np.ndarray, np.ndarray], None]] = None,
) -> MinimizeResult:
    """Minimize ``objective`` starting from ``x0``.

    Parameters
    ----------
    objective : callable
        Maps a 1-D float array of length ``n`` to a real number. NaN returned
        after initialization is treated as ``+inf``.
    x0 : sequence of float
        Starting point.
    config : SimplexConfig, optional
        Tolerances, iteration cap and coefficients.
    simplex : ndarray of shape (n + 1, n), optional
        Explicit starting simplex; overrides the default built from ``x0``.
    callback : callable, optional
        Called as ``callback(iteration, vertices, values)`` after every
        iteration with the sorted simplex (copies).

    Returns
    -------
    MinimizeResult
        ``converged`` is true when both the largest vertex-to-best distance
        (max-norm) is below ``tol_x`` and the spread of objective values is
        below ``tol_f``. Hitting the iteration cap is not an error.

    Raises
    ------
    NonFiniteObjective
        If the objective is NaN or infinite at any starting vertex.
    """
    cfg = config or SimplexConfig()
    x0 = np.asarray(x0, dtype=float).ravel()
    n = x0.size
    if n < 1:
        raise ValueError("x0 must have at least one coordinate")
    if simplex is None:
        sim = initial_simplex(x0)
    else:
        sim = np.array(simplex, dtype=float)
        if sim.shape != (n + 1, n):
            raise ValueError(f"simplex must have shape {(n + 1, n)}, got {sim.shape}")
    max_iter = cfg.iteration_cap(n)
    rho, chi, gamma, sigma = cfg.rho, cfg.chi, cfg.gamma, cfg.sigma

    n_evals = 0

    def f(x):
        nonlocal n_evals
        n_evals += 1
        v = float(objective(x))
        return np.inf if np.isnan(v) else v

    fsim = np.empty(n + 1)
    for i in range(n + 1):
        fsim[i] = f(sim[i])
        if not np.isfinite(fsim[i]):
            raise NonFiniteObjective(
                f"objective is not finite at initial vertex {i}: {sim[i].tolist()}"
            )
    order = np.argsort(fsim, kind="stable")
    sim, fsim = sim[order], fsim[order]
    history = [fsim[0]]

    def done():
        return (np.max(np.abs(sim[1:] - sim[0])) < cfg.tol_x
                and fsim[-1] - fsim[0] < cfg.tol_f)

    iterations = 0
    converged = done()
    while not converged and iterations < max_iter:
        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]

        xr = centroid + rho * (centroid - worst)
        fr = f(xr)
        new_x = None
        if fr < fsim[0]:
            xe = centroid + rho * chi * (centroid - worst)
            fe = f(xe)
            new_x, new_f = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fsim[-2]:
            new_x, new_f = xr, fr
        elif fr < fsim[-1]:
            xc = centroid + gamma * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                new_x, new_f = xc, fc
        else:
            xcc = centroid - gamma * (centroid - worst)
            fcc = f(xcc)
            if fcc < fsim[-1]:
                new_x, new_f = xcc, fcc

        if new_x is not None:
            # drop the worst vertex, append the new one so a stable sort
            # puts it after any existing vertex with the same value
            sim = np.vstack([sim[:-1], new_x])
            fsim = np.append(fsim[:-1], new_f)
        else:
            best = sim[0]
            sim = np.vstack([best, best + sigma * (sim[1:] - best)])
            fsim = np.concatenate([[fsim[0]], [f(v) for v in sim[1:]]])

        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
        iterations += 1
        history.append(fsim[0])
        if callback is not None:
            callback(iterations, sim.copy(), fsim.copy())
        converged = done()

    return MinimizeResult(
        x_min=sim[0].copy(),
        f_min=float(fsim[0]),
        iterations=iterations,
        converged=bool(converged),
        n_evals=n_evals,
        best_history=[float(v) for v in history],
    )
