"""Domain types and validation for vector-fBm parameterizations.

A model is fully specified by the Hurst exponents H_1..H_p, the
per-component scales sigma_i = std X_i(1), and one coefficient pair per
component pair (i, j):

* general regime, H_i + H_j != 1: reals (c_ij, c_ji);
* critical regime, H_i + H_j  = 1: reals (d_ij, f_ij), where f_ij weights
  the logarithmic part of the cross-covariance.

Positive definiteness of the normalized matrix R -- the correlation
matrix of (X_1(1)/sigma_1, ..., X_p(1)/sigma_p), with off-diagonal
entries (c_ij + c_ji)/2 or d_ij -- is a necessary condition for such a
process to exist; ``validate_model`` checks it with a floating-point-safe
tolerance.

Model files are JSON with 1-based component indices; either explicit
coefficients or mixing matrices are accepted (the latter are converted on
load).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    IndexOutOfRangeError,
    NearSingularPairError,
    NotPositiveDefiniteError,
    OutOfRangeError,
)
from .special import CRITICAL_TOL

__all__ = [
    "HurstVector",
    "PairRegime",
    "PairCoefficients",
    "CovarianceModel",
    "MixingMatrices",
    "TimeGrid",
    "ValidationReport",
    "validate_hurst",
    "classify_pair",
    "validate_model",
    "ensure_valid",
    "build_model",
    "load_model",
    "parse_model",
    "model_to_dict",
    "mixing_to_dict",
    "save_json",
]

# Sums with |H_i+H_j-1| in this open band are rejected: not exactly critical,
# but close enough that the general-regime coefficients are pure noise.
NEAR_SINGULAR_BAND = 1e-8

# lambda_min > -PD_TOL * max(1, lambda_max) counts as positive (semi)definite.
PD_TOL = 1e-10


class PairRegime(Enum):
    GENERAL = "general"
    CRITICAL = "critical"


@dataclass(frozen=True)
class HurstVector:
    """Component self-similarity exponents, each strictly inside (0, 1)."""

    h: tuple[float, ...]

    @property
    def p(self) -> int:
        return len(self.h)

    def __getitem__(self, i: int) -> float:
        return self.h[i]

    def __len__(self) -> int:
        return len(self.h)


def validate_hurst(h: Sequence[float]) -> HurstVector:
    """Validate exponents and reject near-singular (but not critical) pairs.

    Raises OutOfRangeError (1-based index) when some h_i is outside (0,1),
    and NearSingularPairError when 0 < |h_i+h_j-1| < 1e-8 beyond the exact
    critical tolerance for some i != j.
    """
    vals = [float(x) for x in h]
    if len(vals) < 1:
        raise OutOfRangeError(0, float("nan"))
    for idx, value in enumerate(vals, start=1):
        if not (math.isfinite(value) and 0.0 < value < 1.0):
            raise OutOfRangeError(idx, value)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            gap = abs(vals[i] + vals[j] - 1.0)
            if CRITICAL_TOL < gap < NEAR_SINGULAR_BAND:
                raise NearSingularPairError(i + 1, j + 1, vals[i] + vals[j])
    return HurstVector(tuple(vals))


def classify_pair(h_i: float, h_j: float) -> PairRegime:
    """Critical iff H_i + H_j = 1 within the exact-equality tolerance."""
    if abs(h_i + h_j - 1.0) <= CRITICAL_TOL:
        return PairRegime.CRITICAL
    return PairRegime.GENERAL


@dataclass(frozen=True)
class PairCoefficients:
    """Cross-covariance parameters of one component pair (i <= j, 1-based).

    Exactly one coefficient style is populated: (c_ij, c_ji) in the general
    regime, (d_ij, f_ij) in the critical one.  The diagonal i == j is always
    general with c_ii = c'_ii = 1, reducing to the scalar fBm covariance.
    """

    i: int
    j: int
    sigma_i: float
    sigma_j: float
    regime: PairRegime
    c_ij: float | None = None
    c_ji: float | None = None
    d_ij: float | None = None
    f_ij: float | None = None

    def __post_init__(self):
        if self.i < 1 or self.j < self.i:
            raise IndexOutOfRangeError(f"pair indices must satisfy 1 <= i <= j, got ({self.i},{self.j})")
        if self.sigma_i <= 0.0 or self.sigma_j <= 0.0:
            raise ValueError(f"sigma must be positive, got ({self.sigma_i},{self.sigma_j})")
        general = self.c_ij is not None and self.c_ji is not None
        critical = self.d_ij is not None and self.f_ij is not None
        if self.regime is PairRegime.GENERAL:
            if not general or critical:
                raise ValueError(f"pair ({self.i},{self.j}): general regime needs exactly (c_ij, c_ji)")
        else:
            if not critical or general:
                raise ValueError(f"pair ({self.i},{self.j}): critical regime needs exactly (d_ij, f_ij)")
        if self.i == self.j:
            if self.regime is not PairRegime.GENERAL or self.c_ij != 1.0 or self.c_ji != 1.0:
                raise ValueError(f"diagonal pair ({self.i},{self.i}) must be general with c = c' = 1")

    @property
    def r_entry(self) -> float:
        """Entry of the normalized matrix R: the correlation of X_i(1), X_j(1).

        Equals (c_ij + c_ji)/2 in the general regime and d_ij in the
        critical one, both being E X_i(1) X_j(1) / (sigma_i sigma_j).
        """
        if self.regime is PairRegime.GENERAL:
            return 0.5 * (self.c_ij + self.c_ji) if self.i != self.j else 1.0
        return self.d_ij


@dataclass(frozen=True, eq=False)
class CovarianceModel:
    """A fully specified vfBm law: exponents, pair coefficients, matrix R."""

    hurst: HurstVector
    pairs: Mapping[tuple[int, int], PairCoefficients]
    r: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.hurst.p

    @property
    def sigma(self) -> tuple[float, ...]:
        return tuple(self.pairs[(i, i)].sigma_i for i in range(1, self.p + 1))

    def pair(self, i: int, j: int) -> PairCoefficients:
        """The stored coefficients for (min(i,j), max(i,j))."""
        key = (i, j) if i <= j else (j, i)
        if key not in self.pairs:
            raise IndexOutOfRangeError(f"no pair {key} in model with p = {self.p}")
        return self.pairs[key]


def build_model(hurst: HurstVector, pairs: Iterable[PairCoefficients]) -> CovarianceModel:
    """Assemble a CovarianceModel, filling R from the pair coefficients.

    Missing off-diagonal pairs default to independent components (zero
    coefficients); missing diagonals default to sigma = 1.
    """
    p = hurst.p
    table: dict[tuple[int, int], PairCoefficients] = {}
    for pc in pairs:
        if pc.j > p:
            raise IndexOutOfRangeError(f"pair ({pc.i},{pc.j}) out of range for p = {p}")
        table[(pc.i, pc.j)] = pc
    for i in range(1, p + 1):
        if (i, i) not in table:
            table[(i, i)] = PairCoefficients(
                i=i, j=i, sigma_i=1.0, sigma_j=1.0, regime=PairRegime.GENERAL, c_ij=1.0, c_ji=1.0
            )
    sigma = [table[(i, i)].sigma_i for i in range(1, p + 1)]
    for i in range(1, p + 1):
        for j in range(i + 1, p + 1):
            if (i, j) not in table:
                regime = classify_pair(hurst[i - 1], hurst[j - 1])
                zero = dict(c_ij=0.0, c_ji=0.0) if regime is PairRegime.GENERAL else dict(d_ij=0.0, f_ij=0.0)
                table[(i, j)] = PairCoefficients(
                    i=i, j=j, sigma_i=sigma[i - 1], sigma_j=sigma[j - 1], regime=regime, **zero
                )
    r = np.eye(p)
    for (i, j), pc in table.items():
        if i != j:
            r[i - 1, j - 1] = r[j - 1, i - 1] = pc.r_entry
    return CovarianceModel(hurst=hurst, pairs=table, r=r)


@dataclass(frozen=True, eq=False)
class MixingMatrices:
    """Real p x p weights (A_plus, A_minus) of the two-sided integral representation."""

    a_plus: np.ndarray
    a_minus: np.ndarray
    hurst: HurstVector

    def __post_init__(self):
        p = self.hurst.p
        ap = np.asarray(self.a_plus, dtype=float)
        am = np.asarray(self.a_minus, dtype=float)
        if ap.shape != (p, p) or am.shape != (p, p):
            raise ValueError(f"mixing matrices must be {p}x{p}, got {ap.shape} and {am.shape}")
        object.__setattr__(self, "a_plus", ap)
        object.__setattr__(self, "a_minus", am)

    @property
    def p(self) -> int:
        return self.hurst.p


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing finite evaluation times (0 and negatives allowed)."""

    times: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(t) for t in self.times)
        if len(vals) == 0:
            raise ValueError("time grid must contain at least one time")
        if any(not math.isfinite(t) for t in vals):
            raise ValueError("time grid must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", vals)

    @property
    def n(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    lambda_min: float
    lambda_max: float
    positive_definite: bool
    regime_consistent: bool
    regime_issues: tuple[str, ...]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "positive_definite": self.positive_definite,
            "regime_consistent": self.regime_consistent,
            "regime_issues": list(self.regime_issues),
            "passed": self.passed,
        }


def validate_model(m: CovarianceModel) -> ValidationReport:
    """Check the necessary existence condition (R positive definite) and
    regime consistency of every stored pair.

    A pass means "no contradiction found", not "model realizable": the
    converse direction (admissible coefficients always come from some
    process) is not available, so this is a necessary-condition gate only.
    """
    r = m.r
    symmetric = bool(np.max(np.abs(r - r.T)) <= 1e-12 * max(1.0, float(np.max(np.abs(r)))))
    eigs = np.linalg.eigvalsh(0.5 * (r + r.T))
    lambda_min = float(eigs[0])
    lambda_max = float(eigs[-1])
    pd_ok = lambda_min > -PD_TOL * max(1.0, lambda_max)

    issues = []
    for (i, j), pc in sorted(m.pairs.items()):
        if i == j:
            continue
        expected = classify_pair(m.hurst[i - 1], m.hurst[j - 1])
        if pc.regime is not expected:
            issues.append(f"pair ({i},{j}) stored as {pc.regime.value} but exponents imply {expected.value}")
    regime_ok = not issues
    return ValidationReport(
        symmetric=symmetric,
        lambda_min=lambda_min,
        lambda_max=lambda_max,
        positive_definite=pd_ok,
        regime_consistent=regime_ok,
        regime_issues=tuple(issues),
        passed=symmetric and pd_ok and regime_ok,
    )


def ensure_valid(m: CovarianceModel) -> CovarianceModel:
    """Raise NotPositiveDefiniteError unless validate_model passes."""
    report = validate_model(m)
    if not report.passed:
        raise NotPositiveDefiniteError(report.lambda_min)
    return m


# ---------------------------------------------------------------------------
# JSON model files (1-based indices, matching user-facing notation)
# ---------------------------------------------------------------------------

def parse_model(obj: Mapping) -> CovarianceModel | MixingMatrices:
    """Parse a model dict into whichever form the file carries."""
    hurst = validate_hurst(obj["hurst"])
    if "a_plus" in obj or "a_minus" in obj:
        return MixingMatrices(
            a_plus=np.asarray(obj["a_plus"], dtype=float),
            a_minus=np.asarray(obj.get("a_minus", np.zeros((hurst.p, hurst.p))), dtype=float),
            hurst=hurst,
        )
    coeffs = obj.get("coefficients", {})
    sigma = [float(s) for s in coeffs.get("sigma", [1.0] * hurst.p)]
    if len(sigma) != hurst.p:
        raise ValueError(f"sigma has {len(sigma)} entries but p = {hurst.p}")
    pairs = []
    for i in range(1, hurst.p + 1):
        pairs.append(
            PairCoefficients(
                i=i, j=i, sigma_i=sigma[i - 1], sigma_j=sigma[i - 1],
                regime=PairRegime.GENERAL, c_ij=1.0, c_ji=1.0,
            )
        )
    for entry in coeffs.get("pairs", []):
        i, j = int(entry["i"]), int(entry["j"])
        if i > j:
            i, j = j, i
        regime = classify_pair(hurst[i - 1], hurst[j - 1])
        if "d_ij" in entry or "f_ij" in entry:
            if regime is not PairRegime.CRITICAL:
                raise ValueError(f"pair ({i},{j}) gives (d,f) but H_i+H_j != 1")
            pairs.append(
                PairCoefficients(
                    i=i, j=j, sigma_i=sigma[i - 1], sigma_j=sigma[j - 1], regime=regime,
                    d_ij=float(entry["d_ij"]), f_ij=float(entry.get("f_ij", 0.0)),
                )
            )
        else:
            if regime is not PairRegime.GENERAL:
                raise ValueError(f"pair ({i},{j}) gives (c_ij,c_ji) but H_i+H_j = 1")
            pairs.append(
                PairCoefficients(
                    i=i, j=j, sigma_i=sigma[i - 1], sigma_j=sigma[j - 1], regime=regime,
                    c_ij=float(entry["c_ij"]), c_ji=float(entry.get("c_ji", 0.0)),
                )
            )
    return build_model(hurst, pairs)


def load_model(path: str | Path) -> CovarianceModel:
    """Load a model file, converting mixing matrices to coefficients if needed."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    parsed = parse_model(obj)
    if isinstance(parsed, MixingMatrices):
        from .representation import coeffs_from_mixing  # deferred: avoids import cycle

        return coeffs_from_mixing(parsed)
    return parsed


def model_to_dict(m: CovarianceModel) -> dict:
    """Canonical JSON-ready form of a CovarianceModel (deterministic key order)."""
    pairs = []
    for (i, j) in sorted(m.pairs):
        if i == j:
            continue
        pc = m.pairs[(i, j)]
        if pc.regime is PairRegime.GENERAL:
            pairs.append({"i": i, "j": j, "c_ij": pc.c_ij, "c_ji": pc.c_ji})
        else:
            pairs.append({"i": i, "j": j, "d_ij": pc.d_ij, "f_ij": pc.f_ij})
    return {
        "hurst": list(m.hurst.h),
        "coefficients": {"sigma": list(m.sigma), "pairs": pairs},
    }


def mixing_to_dict(m: MixingMatrices) -> dict:
    return {
        "hurst": list(m.hurst.h),
        "a_plus": m.a_plus.tolist(),
        "a_minus": m.a_minus.tolist(),
    }


def save_json(obj: Mapping, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
