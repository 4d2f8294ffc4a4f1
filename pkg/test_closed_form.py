# -*- coding: utf-8 -*-
"""
測試解析靈敏度公式
"""

import math

import numpy as np
import pytest

from closed_form_sensitivity import (
    Detection,
    exact_optimal_beta,
    heisenberg_limit,
    homodyne_noise,
    homodyne_sensitivity,
    homodyne_slope,
    intensity_sensitivity,
    intensity_slope,
    loss_extra_term,
    lossy_homodyne_sensitivity,
    optimal_beta,
    optimal_point_sensitivity,
    optimal_ratio_to_hl,
    sql_limit,
    total_photon_number,
)
from su11_analyzer import numeric_sensitivity
from su11_config import FwmStage, InputState, InterferometerConfig, input_state_for_optimum
from su11_errors import (
    BalancedConfigurationError,
    BlindPhasePointError,
    NoPhotonsError,
    ParameterError,
    ZeroSignalSlopeError,
)


def test_squeezed_noise_below_vacuum():
    """Θ=0、φ=0 時雜訊為 e^{−2r}/2"""
    for r in np.arange(0.0, 3.01, 0.5):
        noise = homodyne_noise(InterferometerConfig.balanced(1.0), input_state_for_optimum(10.0, r))
        assert abs(noise - math.exp(-2 * r) / 2) <= 1e-12


def test_optimal_point_matches_homodyne_report():
    for g, r, beta in ((1.0, 2.0, 10.0), (0.5, 0.0, 1.0), (1.5, 3.0, 20.0)):
        report = homodyne_sensitivity(InterferometerConfig.balanced(g), input_state_for_optimum(beta, r))
        expected = math.exp(-r) / (beta * math.sinh(2 * g))
        assert report.delta_phi == pytest.approx(expected, rel=1e-12)
        assert optimal_point_sensitivity(g, r, beta) == pytest.approx(expected, rel=1e-15)
        assert report.backend is Detection.HOMODYNE


def test_known_values():
    assert optimal_point_sensitivity(1.0, 2.0, 10.0) == pytest.approx(3.732e-3, rel=1e-3)
    assert optimal_point_sensitivity(0.5, 0.0, 1.0) == pytest.approx(1 / math.sinh(1.0), rel=1e-12)
    assert 1 / math.sinh(1.0) == pytest.approx(0.8509, abs=1e-4)


def test_error_propagation_identity():
    """Δφ²·slope² = noise"""
    rng = np.random.default_rng(21)
    for _ in range(100):
        config = InterferometerConfig.balanced(rng.uniform(0.1, 2), rng.uniform(-1, 1), rng.uniform(-1, 1))
        state = InputState(rng.uniform(0.5, 20), rng.uniform(-math.pi, math.pi),
                           rng.uniform(0, 3), rng.uniform(-math.pi, math.pi))
        try:
            report = homodyne_sensitivity(config, state)
        except BlindPhasePointError:
            continue
        assert report.identity_defect() < 1e-10
        assert report.slope == pytest.approx(homodyne_slope(config, state), rel=1e-12)


def test_zero_gain_and_zero_beta():
    with pytest.raises(ZeroSignalSlopeError) as info:
        homodyne_sensitivity(InterferometerConfig.balanced(0.0), input_state_for_optimum(5.0, 1.0))
    assert "zero signal slope" in str(info.value)
    with pytest.raises(ZeroSignalSlopeError):
        homodyne_sensitivity(InterferometerConfig.balanced(1.0), input_state_for_optimum(0.0, 1.0))
    with pytest.raises(ZeroSignalSlopeError):
        optimal_point_sensitivity(0.0, 1.0, 5.0)


def test_blind_point():
    """Φ = π/2 時 cos Φ = 0"""
    state = InputState(10.0, 0.0, 1.0, 0.0)
    with pytest.raises(BlindPhasePointError) as info:
        homodyne_sensitivity(InterferometerConfig.balanced(1.0), state)
    assert "blind phase point" in str(info.value)


def test_unbalanced_rejected():
    config = InterferometerConfig(stage1=FwmStage(1.0, 0.0), stage2=FwmStage(1.2, math.pi))
    with pytest.raises(BalancedConfigurationError) as info:
        homodyne_sensitivity(config, input_state_for_optimum(5.0, 1.0))
    assert "formula requires balanced configuration" in str(info.value)
    with pytest.raises(BalancedConfigurationError):
        intensity_sensitivity(config.with_phi(0.3), input_state_for_optimum(5.0, 1.0))


def test_heisenberg_limit_reduces_to_mzi():
    for beta in (1.0, 5.0, 20.0):
        for r in (0.0, 1.0, 2.5):
            assert heisenberg_limit(0.0, r, beta) == 1.0 / (beta ** 2 + math.sinh(r) ** 2)


def test_heisenberg_below_sql_when_photons_exceed_one():
    n_total = total_photon_number(1.0, 1.0, 3.0)
    assert n_total > 1
    assert heisenberg_limit(1.0, 1.0, 3.0) < sql_limit(n_total)


def test_no_photons():
    with pytest.raises(NoPhotonsError):
        heisenberg_limit(0.0, 0.0, 0.0)
    with pytest.raises(NoPhotonsError):
        sql_limit(0.0)


def test_optimal_beta_condition():
    assert optimal_beta(2.0, 3.0) == pytest.approx(math.exp(3) * math.tanh(4) / 2)
    assert optimal_beta(2.0, 3.0) == pytest.approx(10.03, abs=0.01)
    assert optimal_beta(5.0, 0.0) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(ParameterError):
        optimal_beta(0.0, 1.0)
    with pytest.raises(ParameterError):
        exact_optimal_beta(-1.0, 1.0)


def test_negative_squeezing_rejected():
    with pytest.raises(ParameterError, match="squeeze_r"):
        optimal_beta(1.0, -1.0)
    with pytest.raises(ParameterError, match="squeeze_r"):
        exact_optimal_beta(1.0, -1.0)
    with pytest.raises(ParameterError, match="squeeze_r"):
        optimal_point_sensitivity(1.0, -0.5, 10.0)
    with pytest.raises(ParameterError):
        optimal_ratio_to_hl(1.0, float("nan"), 10.0)


def test_exact_optimal_beta_is_minimizer():
    """精確極小點兩側比值都較大，大 r 時接近近似式"""
    for g, r in ((2.0, 3.0), (1.0, 2.0), (0.5, 4.0), (5.0, 0.0)):
        beta = exact_optimal_beta(g, r)
        ratio = optimal_ratio_to_hl(g, r, beta)
        assert optimal_ratio_to_hl(g, r, beta * 1.01) > ratio
        assert optimal_ratio_to_hl(g, r, beta * 0.99) > ratio
    assert exact_optimal_beta(2.0, 3.0) / optimal_beta(2.0, 3.0) == pytest.approx(1.0, abs=0.01)


def test_lossless_limit_of_lossy_formula():
    config = InterferometerConfig.balanced(0.5, phi=0.2)
    state = InputState(10.0, math.pi / 2, 2.0, 0.0)
    lossless = homodyne_sensitivity(config, state)
    lossy = lossy_homodyne_sensitivity(config, state, 0.0, 0.0)
    assert lossy.delta_phi == pytest.approx(lossless.delta_phi, rel=1e-14)
    assert loss_extra_term(0.5, 10.0, 1.0, 0.0, 0.0) == 0.0


def test_lossy_report_identity_and_config_losses():
    config = InterferometerConfig.balanced(0.5, phi=0.2, loss_internal=0.2, loss_external=0.1)
    state = InputState(10.0, math.pi / 2, 2.0, 0.0)
    from_config = lossy_homodyne_sensitivity(config, state)
    explicit = lossy_homodyne_sensitivity(config.with_losses(0.0, 0.0), state, 0.2, 0.1)
    assert from_config.delta_phi == pytest.approx(explicit.delta_phi, rel=1e-14)
    assert from_config.identity_defect() < 1e-12
    with pytest.raises(ParameterError):
        lossy_homodyne_sensitivity(config, state, 1.0, 0.0)


def test_lossy_formula_matches_engine():
    """L1 兩臂、L2 僅在 a2：解析式與引擎一致"""
    state = InputState(10.0, math.pi / 2, 2.0, 0.0)
    for l1, l2 in ((0.2, 0.0), (0.0, 0.2), (0.1, 0.3)):
        for phi in (-0.4, 0.0, 0.25):
            config = InterferometerConfig.balanced(0.5, phi=phi, loss_internal=l1, loss_external=l2)
            closed = lossy_homodyne_sensitivity(config, state)
            engine = numeric_sensitivity(config, state)
            assert engine.delta_phi == pytest.approx(closed.delta_phi, rel=1e-6)
            assert engine.noise == pytest.approx(closed.noise, rel=1e-10)


def test_internal_loss_hurts_more_than_external():
    state = InputState(10.0, math.pi / 2, 2.0, 0.0)
    for phi in np.linspace(-0.6, 0.6, 13):
        config = InterferometerConfig.balanced(0.5, phi=float(phi))
        internal = lossy_homodyne_sensitivity(config, state, 0.2, 0.0).delta_phi
        external = lossy_homodyne_sensitivity(config, state, 0.0, 0.2).delta_phi
        lossless = homodyne_sensitivity(config, state).delta_phi
        assert internal > external > lossless


def test_lossy_sensitivity_increases_with_each_loss():
    """Δφ_L 對 L1、L2 各自嚴格遞增（隨機平衡點）"""
    rng = np.random.default_rng(21)
    losses = np.linspace(0.0, 0.9, 19)
    for _ in range(50):
        config = InterferometerConfig.balanced(rng.uniform(0.1, 1.5), phi=rng.uniform(-0.6, 0.6))
        state = InputState(rng.uniform(1, 20), math.pi / 2, rng.uniform(0, 2), 0.0)
        fixed = rng.uniform(0, 0.5)
        by_internal = [lossy_homodyne_sensitivity(config, state, float(l1), fixed).delta_phi for l1 in losses]
        by_external = [lossy_homodyne_sensitivity(config, state, fixed, float(l2)).delta_phi for l2 in losses]
        assert np.all(np.diff(by_internal) > 0)
        assert np.all(np.diff(by_external) > 0)


def test_intensity_blind_at_zero_phase():
    with pytest.raises(BlindPhasePointError):
        intensity_sensitivity(InterferometerConfig.balanced(1.0), InputState(10.0, math.pi / 2, 2.0, 0.0))


def test_intensity_coherent_input_matches_engine():
    """r=0 時強度偵測解析式與引擎完全一致"""
    state = InputState(3.0, 0.7, 0.0, 0.0)
    for g, phi in ((1.0, 0.3), (0.5, -0.8), (1.5, 1.2)):
        config = InterferometerConfig.balanced(g, phi=phi)
        closed = intensity_sensitivity(config, state)
        engine = numeric_sensitivity(config, state, observable="intensity")
        assert closed.backend is Detection.INTENSITY
        assert engine.delta_phi == pytest.approx(closed.delta_phi, rel=1e-6)
        assert engine.slope == pytest.approx(intensity_slope(config, state), rel=1e-6)
        assert closed.identity_defect() < 1e-12


def test_intensity_slope_matches_engine_with_squeezing():
    state = InputState(10.0, math.pi / 2, 2.0, 0.0)
    for phi in (-0.5, 0.2, 0.9):
        config = InterferometerConfig.balanced(1.0, phi=phi)
        engine = numeric_sensitivity(config, state, observable="intensity")
        assert engine.slope == pytest.approx(intensity_slope(config, state), rel=1e-6)
