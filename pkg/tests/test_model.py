"""Parameter validation, regime classification, and model-file round trips."""

import json

import numpy as np
import pytest

import vfbm
from vfbm import PairCoefficients, PairRegime, TimeGrid, classify_pair, validate_hurst, validate_model
from vfbm.errors import IndexOutOfRangeError, NearSingularPairError, NotPositiveDefiniteError, OutOfRangeError
from vfbm.verify import random_mixing


def test_validate_hurst_accepts_scalar_case():
    hv = validate_hurst([0.5])
    assert hv.p == 1 and hv[0] == 0.5


def test_validate_hurst_accepts_exact_critical_pair():
    hv = validate_hurst([0.3, 0.7])
    assert classify_pair(hv[0], hv[1]) is PairRegime.CRITICAL


def test_validate_hurst_rejects_out_of_range():
    with pytest.raises(OutOfRangeError) as exc:
        validate_hurst([0.2, 1.1])
    assert exc.value.index == 2
    with pytest.raises(OutOfRangeError):
        validate_hurst([0.0, 0.4])
    with pytest.raises(OutOfRangeError):
        validate_hurst([])


def test_validate_hurst_rejects_near_singular_band():
    with pytest.raises(NearSingularPairError) as exc:
        validate_hurst([0.3, 0.7 + 1e-10])
    assert (exc.value.i, exc.value.j) == (1, 2)
    # just outside the band: legal, classified general
    hv = validate_hurst([0.3, 0.7 + 1e-7])
    assert classify_pair(hv[0], hv[1]) is PairRegime.GENERAL


@pytest.mark.parametrize(
    "pair,regime",
    [((0.3, 0.6), PairRegime.GENERAL), ((0.3, 0.7), PairRegime.CRITICAL), ((0.5, 0.5), PairRegime.CRITICAL)],
)
def test_classify_pair(pair, regime):
    assert classify_pair(*pair) is regime
    assert classify_pair(pair[1], pair[0]) is regime  # symmetric


def test_pair_coefficients_enforce_single_style():
    with pytest.raises(ValueError):
        PairCoefficients(i=1, j=2, sigma_i=1, sigma_j=1, regime=PairRegime.GENERAL, d_ij=0.1, f_ij=0.0)
    with pytest.raises(ValueError):
        PairCoefficients(
            i=1, j=2, sigma_i=1, sigma_j=1, regime=PairRegime.CRITICAL, c_ij=0.1, c_ji=0.2
        )
    with pytest.raises(ValueError):  # diagonal must have c = c' = 1
        PairCoefficients(i=1, j=1, sigma_i=1, sigma_j=1, regime=PairRegime.GENERAL, c_ij=2.0, c_ji=1.0)
    with pytest.raises(ValueError):
        PairCoefficients(i=1, j=2, sigma_i=-1, sigma_j=1, regime=PairRegime.GENERAL, c_ij=0.0, c_ji=0.0)


def test_validate_model_identity_r_passes():
    hv = validate_hurst([0.3, 0.6])
    model = vfbm.build_model(hv, [])  # missing pairs default to independence
    report = validate_model(model)
    assert report.passed and report.positive_definite
    assert np.array_equal(model.r, np.eye(2))


def test_validate_model_rejects_large_coefficient_sum():
    hv = validate_hurst([0.3, 0.6])
    model = vfbm.build_model(
        hv,
        [PairCoefficients(i=1, j=2, sigma_i=1, sigma_j=1, regime=PairRegime.GENERAL, c_ij=1.5, c_ji=1.0)],
    )
    report = validate_model(model)
    assert not report.passed
    # R_12 = (c_12 + c_21)/2 = 1.25, so lambda_min = 1 - 1.25 < 0
    assert report.lambda_min == pytest.approx(1.0 - 1.25, rel=1e-12)
    with pytest.raises(NotPositiveDefiniteError):
        vfbm.ensure_valid(model)


def test_models_from_random_mixing_always_validate():
    # construction guarantee: coefficients from a genuine representation give PD R
    rng = np.random.default_rng(2024)
    for k in range(100):
        p = 2 + k % 2
        m = random_mixing(rng, p, critical_pair=(k % 4 == 0), a_minus_scale=float(rng.uniform(0, 1.5)))
        model = vfbm.coeffs_from_mixing(m)
        report = validate_model(model)
        assert report.passed, f"draw {k}: lambda_min={report.lambda_min}"
        off = model.r[~np.eye(p, dtype=bool)]
        assert np.all(np.abs(off) <= 1.0 + 1e-9)  # PD 2x2 minors bound |R_ij|


def test_validate_model_flags_regime_mismatch():
    hv = validate_hurst([0.3, 0.6])
    pc = PairCoefficients(i=1, j=2, sigma_i=1, sigma_j=1, regime=PairRegime.CRITICAL, d_ij=0.1, f_ij=0.0)
    model = vfbm.build_model(hv, [pc])
    report = validate_model(model)
    assert not report.regime_consistent and not report.passed
    assert "pair (1,2)" in report.regime_issues[0]


def test_time_grid_invariants():
    g = TimeGrid((-1.0, 0.0, 2.5))
    assert g.n == 3
    with pytest.raises(ValueError):
        TimeGrid((1.0, 1.0))
    with pytest.raises(ValueError):
        TimeGrid((2.0, 1.0))
    with pytest.raises(ValueError):
        TimeGrid((float("inf"),))
    with pytest.raises(ValueError):
        TimeGrid(())


def test_model_pair_lookup_bounds():
    model = vfbm.build_model(validate_hurst([0.3, 0.6]), [])
    with pytest.raises(IndexOutOfRangeError):
        model.pair(1, 3)


def test_model_json_roundtrip(tmp_path):
    hv = validate_hurst([0.3, 0.7, 0.55])
    pairs = [
        PairCoefficients(i=1, j=1, sigma_i=2.0, sigma_j=2.0, regime=PairRegime.GENERAL, c_ij=1.0, c_ji=1.0),
        PairCoefficients(i=1, j=2, sigma_i=2.0, sigma_j=1.0, regime=PairRegime.CRITICAL, d_ij=0.3, f_ij=-0.1),
        PairCoefficients(i=1, j=3, sigma_i=2.0, sigma_j=1.0, regime=PairRegime.GENERAL, c_ij=0.2, c_ji=0.1),
    ]
    model = vfbm.build_model(hv, pairs)
    path = tmp_path / "model.json"
    vfbm.save_json(vfbm.model_to_dict(model), path)
    back = vfbm.load_model(path)
    assert back.hurst.h == model.hurst.h
    assert back.sigma == model.sigma
    assert back.pair(1, 2).d_ij == 0.3 and back.pair(1, 2).f_ij == -0.1
    assert back.pair(1, 3).c_ij == 0.2
    assert np.allclose(back.r, model.r)


def test_load_model_converts_mixing_files(tmp_path):
    path = tmp_path / "mix.json"
    path.write_text(
        json.dumps({"hurst": [0.3, 0.6], "a_plus": [[1.0, 0.5], [0.0, 1.0]], "a_minus": [[0.0, 0.0], [0.0, 0.0]]})
    )
    model = vfbm.load_model(path)
    m = vfbm.MixingMatrices(
        a_plus=np.array([[1.0, 0.5], [0.0, 1.0]]), a_minus=np.zeros((2, 2)), hurst=validate_hurst([0.3, 0.6])
    )
    ref = vfbm.coeffs_from_mixing(m)
    assert model.pair(1, 2).c_ij == pytest.approx(ref.pair(1, 2).c_ij, rel=1e-15)


def test_parse_model_rejects_wrong_coefficient_style():
    with pytest.raises(ValueError):
        vfbm.parse_model(
            {"hurst": [0.3, 0.7], "coefficients": {"sigma": [1, 1], "pairs": [{"i": 1, "j": 2, "c_ij": 0.1, "c_ji": 0.0}]}}
        )
    with pytest.raises(ValueError):
        vfbm.parse_model(
            {"hurst": [0.3, 0.6], "coefficients": {"sigma": [1, 1], "pairs": [{"i": 1, "j": 2, "d_ij": 0.1, "f_ij": 0.0}]}}
        )
