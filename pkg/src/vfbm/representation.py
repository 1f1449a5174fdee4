"""From mixing matrices to covariance coefficients, and back (causal case).

A pair of real p x p matrices (A_plus, A_minus) weights the causal and
anti-causal kernels of the moving-average construction.  Only the Gram-type
products

    app = A+ A+*,  amm = A- A-*,  apm = A+ A-*,  amp = A- A+*

enter the second-order law.  ``coeffs_from_mixing`` produces the full
coefficient model (variances, (c_ij, c_ji) or (d_ij, f_ij) per pair);
``assemble_via_kernels`` computes the same covariances directly as the
alpha-weighted sum of elementary kernel covariances and serves as the
independent oracle for that mapping.

``tilde_c`` builds the amplitude matrix

    C~ = cos(H pi) A+A+* + A-A-* cos(H pi)
         - sin(H pi) A+A-* cos(H pi) - cos(H pi) A+A-* sin(H pi)

(diagonal sine/cosine matrices), linked to the general-regime coefficients
by c_ij = 2 c~_ij phi_ij / (sigma_i sigma_j).  For causal models (A- = 0)
the factorization C~ = cos(H pi) A+A+* is recoverable iff
cos(H pi)^(-1) C~ is symmetric positive definite; ``causal_factorize``
performs it by Cholesky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateComponentError,
    InfeasibleFactorizationError,
    SingularCosineError,
)
from .kernels import KernelKind, kernel_cov
from .model import (
    CovarianceModel,
    HurstVector,
    MixingMatrices,
    PairCoefficients,
    PairRegime,
    build_model,
    classify_pair,
)
from .special import beta, phi

__all__ = [
    "AlphaProducts",
    "TildeC",
    "alpha_products",
    "sigma_from_mixing",
    "coeffs_from_mixing",
    "tilde_c",
    "causal_factorize",
    "assemble_via_kernels",
]

# sigma_i^2 at or below this is treated as a degenerate (zero) component.
_DEGENERATE_TOL = 1e-14

# Factorization feasibility thresholds on M = cos(H pi)^(-1) C~.
_SYMMETRY_TOL = 1e-10
_FACTOR_PD_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AlphaProducts:
    """The four Gram-type products of the mixing matrices."""

    app: np.ndarray
    amm: np.ndarray
    apm: np.ndarray
    amp: np.ndarray


@dataclass(frozen=True, eq=False)
class TildeC:
    """Cross-covariance amplitude matrix of the mixing representation."""

    c_tilde: np.ndarray


def alpha_products(m: MixingMatrices) -> AlphaProducts:
    ap, am = m.a_plus, m.a_minus
    return AlphaProducts(app=ap @ ap.T, amm=am @ am.T, apm=ap @ am.T, amp=am @ ap.T)


def _sigma_sq(h: float, app_ii: float, amm_ii: float, apm_ii: float) -> float:
    sin_h = math.sin(math.pi * h)
    return beta(h + 0.5, h + 0.5) / sin_h * (app_ii + amm_ii - 2.0 * sin_h * apm_ii)


def sigma_from_mixing(m: MixingMatrices, i: int) -> float:
    """Standard deviation of X_i(1) implied by the mixing matrices (1-based i).

    Raises DegenerateComponentError when the implied variance is not
    strictly positive.
    """
    a = alpha_products(m)
    k = i - 1
    var = _sigma_sq(m.hurst[k], a.app[k, k], a.amm[k, k], a.apm[k, k])
    if var <= _DEGENERATE_TOL:
        raise DegenerateComponentError(i, var)
    return math.sqrt(var)


def coeffs_from_mixing(m: MixingMatrices) -> CovarianceModel:
    """Covariance coefficients of the process built from the mixing matrices.

    General pairs get (c_ij, c_ji), the reverse coefficient coming from the
    index-swapped formula (H_i <-> H_j, transposed alpha products); critical
    pairs get (d_ij, f_ij).
    """
    p = m.p
    h = m.hurst
    a = alpha_products(m)
    sigma = [sigma_from_mixing(m, i) for i in range(1, p + 1)]

    pairs = []
    for i in range(1, p + 1):
        pairs.append(
            PairCoefficients(
                i=i, j=i, sigma_i=sigma[i - 1], sigma_j=sigma[i - 1],
                regime=PairRegime.GENERAL, c_ij=1.0, c_ji=1.0,
            )
        )
    for i in range(1, p + 1):
        hi = h[i - 1]
        ci = math.cos(math.pi * hi)
        for j in range(i + 1, p + 1):
            hj = h[j - 1]
            cj = math.cos(math.pi * hj)
            ss = sigma[i - 1] * sigma[j - 1]
            regime = classify_pair(hi, hj)
            if regime is PairRegime.GENERAL:
                psi = phi(hi, hj)
                sin_sum = math.sin(math.pi * (hi + hj))
                c_ij = 2.0 * psi * (a.app[i - 1, j - 1] * ci + a.amm[i - 1, j - 1] * cj - a.apm[i - 1, j - 1] * sin_sum) / ss
                c_ji = 2.0 * psi * (a.app[j - 1, i - 1] * cj + a.amm[j - 1, i - 1] * ci - a.apm[j - 1, i - 1] * sin_sum) / ss
                pairs.append(
                    PairCoefficients(
                        i=i, j=j, sigma_i=sigma[i - 1], sigma_j=sigma[j - 1],
                        regime=regime, c_ij=c_ij, c_ji=c_ji,
                    )
                )
            else:
                b = beta(hi + 0.5, hj + 0.5)
                d_ij = (
                    b
                    * (
                        0.5 * (math.sin(math.pi * hi) + math.sin(math.pi * hj))
                        * (a.app[i - 1, j - 1] + a.amm[i - 1, j - 1])
                        - a.apm[i - 1, j - 1]
                        - a.amp[i - 1, j - 1]
                    )
                    / ss
                )
                f_ij = (hj - hi) * (a.app[i - 1, j - 1] - a.amm[i - 1, j - 1]) / ss
                pairs.append(
                    PairCoefficients(
                        i=i, j=j, sigma_i=sigma[i - 1], sigma_j=sigma[j - 1],
                        regime=regime, d_ij=d_ij, f_ij=f_ij,
                    )
                )
    return build_model(h, pairs)


def tilde_c(m: MixingMatrices) -> TildeC:
    """Amplitude matrix of the displayed quadratic form in (A+, A-)."""
    a = alpha_products(m)
    cos_h = np.diag(np.cos(np.pi * np.asarray(m.hurst.h)))
    sin_h = np.diag(np.sin(np.pi * np.asarray(m.hurst.h)))
    c = cos_h @ a.app + a.amm @ cos_h - sin_h @ a.apm @ cos_h - cos_h @ a.apm @ sin_h
    return TildeC(c_tilde=c)


def causal_factorize(c_tilde: TildeC, h: HurstVector) -> MixingMatrices:
    """Recover a causal representation (A- = 0) from the amplitude matrix.

    Computes M = cos(H pi)^(-1) C~ and returns A+ = chol(M) (lower
    triangular; any rotation of it is equally valid, so tests should compare
    C~, never A+ entries).

    Raises SingularCosineError when some H_i = 1/2 makes cos(H pi) singular,
    and InfeasibleFactorizationError("NotSymmetric" | "NotPD") when M fails
    the feasibility conditions.
    """
    cos_vals = np.cos(np.pi * np.asarray(h.h))
    for idx, c in enumerate(cos_vals, start=1):
        if abs(c) < 1e-12:
            raise SingularCosineError(idx)
    m = c_tilde.c_tilde / cos_vals[:, None]
    norm = float(np.max(np.abs(m)))
    if norm == 0.0:
        raise InfeasibleFactorizationError("NotPD", "amplitude matrix is zero")
    if float(np.max(np.abs(m - m.T))) > _SYMMETRY_TOL * norm:
        raise InfeasibleFactorizationError("NotSymmetric", f"asymmetry {float(np.max(np.abs(m - m.T))):.3e}")
    sym = 0.5 * (m + m.T)
    eigs = np.linalg.eigvalsh(sym)
    if eigs[0] <= _FACTOR_PD_TOL * max(1.0, float(eigs[-1])):
        raise InfeasibleFactorizationError("NotPD", f"lambda_min = {float(eigs[0]):.3e}")
    a_plus = np.linalg.cholesky(sym)
    return MixingMatrices(a_plus=a_plus, a_minus=np.zeros_like(a_plus), hurst=h)


def assemble_via_kernels(m: MixingMatrices, i: int, j: int, s, t):
    """E X_i(s) X_j(t) as the alpha-weighted sum of elementary kernel covariances.

    This is the independent route used to cross-validate the coefficient
    mapping and the closed-form covariances.
    """
    a = alpha_products(m)
    hi, hj = m.hurst[i - 1], m.hurst[j - 1]
    k = (i - 1, j - 1)
    return (
        a.app[k] * kernel_cov(KernelKind.PP, hi, hj, s, t)
        + a.apm[k] * kernel_cov(KernelKind.PM, hi, hj, s, t)
        + a.amp[k] * kernel_cov(KernelKind.MP, hi, hj, s, t)
        + a.amm[k] * kernel_cov(KernelKind.MM, hi, hj, s, t)
    )
