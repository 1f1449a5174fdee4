"""Self-check suites wiring the closed forms against their independent oracles.

Each suite returns a list of records {check, statistic, tolerance, pass}
suitable for JSON emission; the CLI ``verify`` subcommand is a thin wrapper.
The same random-model helpers are reused by the test suite.
"""

from __future__ import annotations

import numpy as np

from .covariance import cov_pair
from .errors import InfeasibleFactorizationError
from .kernels import KernelKind, kernel_cov, quadrature_kernel_oracle
from .model import HurstVector, MixingMatrices, validate_hurst
from .representation import (
    assemble_via_kernels,
    causal_factorize,
    coeffs_from_mixing,
    sigma_from_mixing,
    tilde_c,
)
from .special import phi

__all__ = ["random_hurst", "random_mixing", "run_suite", "SUITES"]

# Keep random exponents away from the rejected near-singular band (and from
# numerically awkward extremes) unless a pair is made critical on purpose.
_H_LO, _H_HI = 0.08, 0.92
_PAIR_SUM_MARGIN = 1e-3


def random_hurst(rng: np.random.Generator, p: int, critical_pair: bool = False) -> HurstVector:
    """Exponents with all pair sums clear of 1; optionally pair (1,2) exactly critical."""
    while True:
        h = rng.uniform(_H_LO, _H_HI, size=p)
        if critical_pair:
            h[1] = 1.0 - h[0]
        ok = True
        for i in range(p):
            for j in range(i + 1, p):
                if critical_pair and (i, j) == (0, 1):
                    continue
                if abs(h[i] + h[j] - 1.0) < _PAIR_SUM_MARGIN:
                    ok = False
        if ok:
            return validate_hurst(h.tolist())


def random_mixing(
    rng: np.random.Generator,
    p: int,
    critical_pair: bool = False,
    a_minus_scale: float = 1.0,
    hurst: HurstVector | None = None,
) -> MixingMatrices:
    """A random representation with non-degenerate components."""
    h = hurst if hurst is not None else random_hurst(rng, p, critical_pair)
    while True:
        m = MixingMatrices(
            a_plus=rng.normal(size=(p, p)),
            a_minus=a_minus_scale * rng.normal(size=(p, p)),
            hurst=h,
        )
        try:
            for i in range(1, p + 1):
                sigma_from_mixing(m, i)
        except Exception:
            continue
        return m


def _record(check: str, statistic: float, tolerance: float) -> dict:
    return {
        "check": check,
        "statistic": float(statistic),
        "tolerance": float(tolerance),
        "pass": bool(statistic <= tolerance),
    }


def suite_theorem1(seed: int, n_draws: int = 400) -> list[dict]:
    """Self-similarity, stationary increments, symmetrization, zero boundary."""
    rng = np.random.default_rng(seed)
    worst = {"scaling": 0.0, "stationary_increments": 0.0, "symmetrization": 0.0, "zero_boundary": 0.0}
    for k in range(n_draws):
        p = int(rng.integers(2, 4))
        m = random_mixing(rng, p, critical_pair=(k % 3 == 0), a_minus_scale=float(rng.uniform(0, 1.2)))
        model = coeffs_from_mixing(m)
        i, j = (int(v) for v in rng.choice(np.arange(1, p + 1), size=2, replace=True))
        s, t, big_t = (float(v) for v in rng.uniform(-3, 3, size=3))
        lam = float(rng.uniform(0.2, 5.0))
        h_sum = model.hurst[i - 1] + model.hurst[j - 1]

        base = cov_pair(model, i, j, s, t)
        scaled = cov_pair(model, i, j, lam * s, lam * t)
        scale_ref = max(1.0, abs(scaled), abs(base) * lam**h_sum)
        worst["scaling"] = max(worst["scaling"], abs(scaled - lam**h_sum * base) / scale_ref)

        inc = (
            cov_pair(model, i, j, s + big_t, t + big_t)
            - cov_pair(model, i, j, s + big_t, big_t)
            - cov_pair(model, i, j, big_t, t + big_t)
            + cov_pair(model, i, j, big_t, big_t)
        )
        worst["stationary_increments"] = max(
            worst["stationary_increments"], abs(inc - base) / max(1.0, abs(base))
        )

        pc = model.pair(i, j)
        kappa2 = pc.sigma_i * pc.sigma_j * (pc.r_entry if i != j else 1.0)
        sym_ref = 0.5 * kappa2 * (abs(s) ** h_sum + abs(t) ** h_sum - abs(s - t) ** h_sum)
        lhs = cov_pair(model, i, j, s, t) + cov_pair(model, j, i, s, t)
        worst["symmetrization"] = max(worst["symmetrization"], abs(lhs - 2.0 * sym_ref) / max(1.0, abs(lhs)))

        worst["zero_boundary"] = max(
            worst["zero_boundary"], abs(cov_pair(model, i, j, 0.0, t)), abs(cov_pair(model, i, j, s, 0.0))
        )
    return [_record(f"theorem1/{name}", stat, 1e-10) for name, stat in worst.items()]


def suite_prop31(seed: int, n_models: int = 12, n_times: int = 6) -> list[dict]:
    """Closed-form covariance vs direct kernel assembly, plus variance consistency."""
    rng = np.random.default_rng(seed)
    worst_pair = 0.0
    worst_var = 0.0
    for k in range(n_models):
        p = 2 + k % 2
        m = random_mixing(rng, p, critical_pair=(k % 2 == 0), a_minus_scale=float(rng.uniform(0, 1.5)))
        model = coeffs_from_mixing(m)
        for i in range(1, p + 1):
            var = sigma_from_mixing(m, i) ** 2
            ref = assemble_via_kernels(m, i, i, 1.0, 1.0)
            worst_var = max(worst_var, abs(var - ref) / abs(ref))
            for j in range(1, p + 1):
                for s, t in rng.uniform(-3, 3, size=(n_times, 2)):
                    direct = cov_pair(model, i, j, float(s), float(t))
                    via = assemble_via_kernels(m, i, j, float(s), float(t))
                    worst_pair = max(worst_pair, abs(direct - via) / max(1.0, abs(via)))
    return [
        _record("prop31/closed_form_vs_kernel_assembly", worst_pair, 1e-10),
        _record("prop31/variance_vs_kernel_assembly", worst_var, 1e-12),
    ]


def suite_tildec(seed: int, n_models: int = 20) -> list[dict]:
    """Amplitude identity c~_ij * 2 phi_ij = sigma_i sigma_j c_ij (general pairs)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        p = int(rng.integers(2, 4))
        m = random_mixing(rng, p, a_minus_scale=float(rng.uniform(0, 1.5)))
        model = coeffs_from_mixing(m)
        ct = tilde_c(m).c_tilde
        for i in range(1, p + 1):
            for j in range(1, p + 1):
                if i == j:
                    continue
                lo, hi = min(i, j), max(i, j)
                pc = model.pair(lo, hi)
                c_ij = pc.c_ij if (i, j) == (lo, hi) else pc.c_ji
                lhs = ct[i - 1, j - 1] * 2.0 * phi(model.hurst[i - 1], model.hurst[j - 1])
                rhs = pc.sigma_i * pc.sigma_j * c_ij
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return [_record("tildec/amplitude_identity", worst, 1e-10)]


def suite_factorization(seed: int, n_models: int = 20) -> list[dict]:
    """Roundtrip through causal_factorize and rejection of infeasible inputs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        p = int(rng.integers(2, 4))
        h = random_hurst(rng, p)
        a_plus = rng.normal(size=(p, p)) + p * np.eye(p)  # keep it invertible
        m0 = MixingMatrices(a_plus=a_plus, a_minus=np.zeros((p, p)), hurst=h)
        ct = tilde_c(m0)
        recovered = causal_factorize(ct, h)
        ct2 = tilde_c(recovered)
        worst = max(
            worst,
            float(np.max(np.abs(ct.c_tilde - ct2.c_tilde))) / max(1.0, float(np.max(np.abs(ct.c_tilde)))),
        )
    from .representation import TildeC

    rejected = 0.0
    h = random_hurst(np.random.default_rng(seed + 1), 2)
    cos_h = np.cos(np.pi * np.asarray(h.h))
    try:  # asymmetric M
        causal_factorize(TildeC(c_tilde=cos_h[:, None] * np.array([[1.0, 0.9], [0.2, 1.0]])), h)
        rejected = 1.0
    except InfeasibleFactorizationError as exc:
        if exc.reason != "NotSymmetric":
            rejected = 1.0
    try:  # negative eigenvalue
        causal_factorize(TildeC(c_tilde=cos_h[:, None] * np.array([[1.0, 2.0], [2.0, 1.0]])), h)
        rejected = 1.0
    except InfeasibleFactorizationError as exc:
        if exc.reason != "NotPD":
            rejected = 1.0
    return [
        _record("factorization/roundtrip", worst, 1e-10),
        _record("factorization/rejects_infeasible", rejected, 0.5),
    ]


def suite_quadrature(seed: int, tol: float = 1e-6) -> list[dict]:
    """Closed-form kernels vs the deterministic quadrature oracle."""
    configs = [
        (KernelKind.PP, 0.3, 0.6, 1.0, 2.0),
        (KernelKind.PP, 0.3, 0.7, 1.0, 2.0),
        (KernelKind.MM, 0.4, 0.4, 1.0, 1.0),
        (KernelKind.PM, 0.3, 0.6, 1.0, 2.0),
        (KernelKind.MP, 0.25, 0.55, -0.7, 1.3),
        (KernelKind.PP, 0.45, 0.25, -1.2, -0.4),
        (KernelKind.MM, 0.3, 0.7, -0.5, 2.0),
        (KernelKind.PM, 0.5, 0.5, 0.8, -0.9),
    ]
    worst = 0.0
    for kind, hi, hj, s, t in configs:
        gap = abs(
            kernel_cov(kind, hi, hj, s, t)
            - quadrature_kernel_oracle(kind, hi, hj, s, t, tol=tol / 5.0)
        )
        worst = max(worst, gap)
    return [_record("quadrature/kernel_agreement", worst, tol)]


def suite_mc(seed: int, n_reps: int = 20_000) -> list[dict]:
    """Small end-to-end Monte Carlo check of the discretized construction."""
    from .model import TimeGrid
    from .simulate import McConfig, mc_integral_oracle

    h = validate_hurst([0.3, 0.6])
    m = MixingMatrices(
        a_plus=np.array([[1.0, 0.5], [0.0, 1.0]]), a_minus=np.zeros((2, 2)), hurst=h
    )
    model = coeffs_from_mixing(m)
    grid = TimeGrid((0.5, 1.0, 2.0))
    table = mc_integral_oracle(m, grid, McConfig(n_reps=n_reps, grid_step=0.1, trunc=120.0, seed=seed))
    analytic = np.empty_like(table.cov)
    for k, s in enumerate(grid.times):
        for i in range(1, 3):
            for l, t in enumerate(grid.times):
                for j in range(1, 3):
                    analytic[k * 2 + i - 1, l * 2 + j - 1] = cov_pair(model, i, j, s, t)
    allowance = np.maximum(4.0 * table.se, 0.02 * np.max(np.abs(analytic)))
    ratio = float(np.max(np.abs(table.cov - analytic) / allowance))
    return [_record("mc/empirical_vs_analytic(ratio_to_allowance)", ratio, 1.0)]


SUITES = {
    "theorem1": suite_theorem1,
    "prop31": suite_prop31,
    "tildec": suite_tildec,
    "factorization": suite_factorization,
    "quadrature": suite_quadrature,
    "mc": suite_mc,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one suite (or 'all' for everything except the slow MC check)."""
    if name == "all":
        results = []
        for key in ("theorem1", "prop31", "tildec", "factorization", "quadrature"):
            results.extend(SUITES[key](seed))
    elif name in SUITES:
        results = SUITES[name](seed)
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return {
        "suite": name,
        "seed": seed,
        "results": results,
        "passed": all(r["pass"] for r in results),
    }
