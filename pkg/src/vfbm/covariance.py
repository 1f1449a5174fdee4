"""Closed-form covariance of the p-variate process and its grid assembly.

For a single component (variance sigma^2 at time 1, exponent H):

    E X(s) X(t) = (sigma^2/2) (|s|^2H + |t|^2H - |t-s|^2H).

Across components the cross-covariance keeps the same three-term shape with
sign-dependent coefficients in the general regime (H_i + H_j != 1), and
acquires x*log|x| terms in the critical regime (H_i + H_j = 1).  All
formulas vanish identically at s = 0 or t = 0 and are exactly
self-similar: r(lambda s, lambda t) = lambda^(H_i+H_j) r(s, t).

``cov_matrix`` assembles the joint covariance of the vector process over a
time grid, ordered (time, component) lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IndexOutOfRangeError, RegimeMismatchError
from .kernels import _maybe_scalar, _xlogx
from .model import CovarianceModel, PairCoefficients, PairRegime, TimeGrid

__all__ = [
    "CovMatrix",
    "cov_same",
    "sign_coeff",
    "cov_cross_general",
    "cov_cross_critical",
    "cov_pair",
    "cov_matrix",
    "write_cov_csv",
]


def cov_same(h_i: float, sigma_i: float, s, t):
    """Single-component covariance (sigma^2/2)(|s|^2H + |t|^2H - |t-s|^2H)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    e = 2.0 * h_i
    return _maybe_scalar(
        0.5 * sigma_i**2 * (np.abs(s) ** e + np.abs(t) ** e - np.abs(t - s) ** e)
    )


def sign_coeff(c_ij: float, c_ji: float, t):
    """c_ij for t > 0, c_ji for t < 0; the t = 0 value (c_ij) never contributes."""
    return _maybe_scalar(np.where(np.asarray(t, dtype=float) >= 0.0, c_ij, c_ji))


def cov_cross_general(pc: PairCoefficients, h_i: float, h_j: float, s, t):
    """Cross-covariance E X_i(s) X_j(t) in the general regime.

    (sigma_i sigma_j / 2) { c_ij(s)|s|^a + c_ji(t)|t|^a - c_ji(t-s)|t-s|^a },
    a = H_i + H_j, where c_ij(.) and c_ji(.) switch between c_ij and c_ji
    with the sign of their argument.
    """
    if pc.regime is not PairRegime.GENERAL:
        raise RegimeMismatchError(f"pair ({pc.i},{pc.j}) is critical; use cov_cross_critical")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    a = h_i + h_j
    val = (
        sign_coeff(pc.c_ij, pc.c_ji, s) * np.abs(s) ** a
        + sign_coeff(pc.c_ji, pc.c_ij, t) * np.abs(t) ** a
        - sign_coeff(pc.c_ji, pc.c_ij, t - s) * np.abs(t - s) ** a
    )
    return _maybe_scalar(0.5 * pc.sigma_i * pc.sigma_j * val)


def cov_cross_critical(pc: PairCoefficients, s, t):
    """Cross-covariance E X_i(s) X_j(t) in the critical regime H_i + H_j = 1.

    (sigma_i sigma_j / 2) { d_ij (|s|+|t|-|s-t|)
                            + f_ij (t log|t| - s log|s| - (t-s) log|t-s|) }.
    """
    if pc.regime is not PairRegime.CRITICAL:
        raise RegimeMismatchError(f"pair ({pc.i},{pc.j}) is general; use cov_cross_general")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    spread = np.abs(s) + np.abs(t) - np.abs(s - t)
    logpart = _xlogx(t) - _xlogx(s) - _xlogx(t - s)
    return _maybe_scalar(0.5 * pc.sigma_i * pc.sigma_j * (pc.d_ij * spread + pc.f_ij * logpart))


def cov_pair(model: CovarianceModel, i: int, j: int, s, t):
    """E X_i(s) X_j(t) with regime dispatch (1-based component indices).

    Queries against the transposed orientation (i > j) evaluate the stored
    (j, i) pair at swapped times, which is the exact exchange identity of
    the formulas.
    """
    p = model.p
    if not (1 <= i <= p) or not (1 <= j <= p):
        raise IndexOutOfRangeError(f"component indices ({i},{j}) out of range for p = {p}")
    if i == j:
        pc = model.pair(i, i)
        return cov_same(model.hurst[i - 1], pc.sigma_i, s, t)
    if i > j:
        return cov_pair(model, j, i, t, s)
    pc = model.pair(i, j)
    if pc.regime is PairRegime.GENERAL:
        return cov_cross_general(pc, model.hurst[i - 1], model.hurst[j - 1], s, t)
    return cov_cross_critical(pc, s, t)


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Joint covariance over a grid; row index = time_index * p + (component-1)."""

    entries: np.ndarray
    grid: TimeGrid
    p: int
    lambda_min: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def cov_matrix(model: CovarianceModel, grid: TimeGrid) -> CovMatrix:
    """Assemble the (n p) x (n p) covariance of the process on the grid.

    Entry ((k,i),(l,j)) equals E X_i(t_k) X_j(t_l); the result is symmetric
    by construction and its smallest eigenvalue is reported on the side.
    """
    p = model.p
    times = np.asarray(grid.times)
    s = times[:, None]
    t = times[None, :]
    m = np.empty((grid.n * p, grid.n * p))
    for i in range(1, p + 1):
        for j in range(i, p + 1):
            block = np.asarray(cov_pair(model, i, j, s, t))
            m[i - 1 :: p, j - 1 :: p] = block
            if i != j:
                m[j - 1 :: p, i - 1 :: p] = block.T
    lam_min = float(np.linalg.eigvalsh(m)[0])
    return CovMatrix(entries=m, grid=grid, p=p, lambda_min=lam_min)


def write_cov_csv(cov: CovMatrix, path: str | Path) -> None:
    """Emit all entries as CSV rows `t_k,i,t_l,j,value` in deterministic order."""
    times = cov.grid.times
    p = cov.p
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t_k,i,t_l,j,value\n")
        for k, t_k in enumerate(times):
            for i in range(1, p + 1):
                for l, t_l in enumerate(times):
                    for j in range(1, p + 1):
                        fh.write(
                            f"{t_k:.17g},{i},{t_l:.17g},{j},{cov.entries[k * p + i - 1, l * p + j - 1]:.17g}\n"
                        )
