# -*- coding: utf-8 -*-
"""
測試分析層：數值誤差傳遞、掃描、最佳 β 搜尋、各圖資料集與 CSV 輸出
"""

import math

import numpy as np
import pandas as pd
import pytest

from closed_form_sensitivity import (
    exact_optimal_beta,
    homodyne_sensitivity,
    homodyne_slope,
    optimal_beta,
    optimal_point_sensitivity,
    optimal_ratio_to_hl,
)
from oracle_validation import ValidationPoint, format_report, run_validation
from su11_analyzer import (
    NonMonotonicityReport,
    Su11Analyzer,
    SweepSpec,
    evaluate_row,
    figure_3a,
    figure_3b,
    figure_4,
    figure_5,
    find_optimal_beta,
    golden_section_minimize,
    intensity_deviation_report,
    nonmonotonicity_report,
    numeric_sensitivity,
    optimum_summary,
    relative_deviation,
    richardson_derivative,
    rows_to_frame,
    sweep,
    write_csv,
)
from su11_config import FwmStage, InputState, InterferometerConfig, Su11ToolConfig, input_state_for_optimum
from su11_errors import NoBracketError, ParameterError, ZeroSignalSlopeError
from su11_interferometer import derived_angles


def test_relative_deviation():
    assert relative_deviation(1.0, 1.0) == 0.0
    assert relative_deviation(2.0, 1.0) == pytest.approx(0.5)
    assert relative_deviation(1e-12, 0.0, floor=1.0) == pytest.approx(1e-12)
    assert relative_deviation(0.0, 0.0) == 0.0


def test_richardson_derivative():
    assert richardson_derivative(math.sin, 0.3, 1e-3) == pytest.approx(math.cos(0.3), rel=1e-12)
    assert richardson_derivative(lambda x: x ** 3, 2.0, 1e-2) == pytest.approx(12.0, rel=1e-12)


def test_golden_section_quadratic():
    x = golden_section_minimize(lambda v: (v - 1.7) ** 2, 0.0, 5.0, 1e-9)
    assert x == pytest.approx(1.7, abs=1e-8)


def test_numeric_matches_closed_form_grid():
    """φ=0 最佳點：引擎數值微分與解析式相對誤差 ≤ 1e−6"""
    for g in (0.25, 0.5, 1.0, 1.5):
        for r in (0.0, 1.0, 2.0, 3.0):
            for beta in (1.0, 5.0, 10.0, 20.0):
                config = InterferometerConfig.balanced(g)
                input_state = input_state_for_optimum(beta, r)
                numeric = numeric_sensitivity(config, input_state)
                closed = optimal_point_sensitivity(g, r, beta)
                assert relative_deviation(numeric.delta_phi, closed) <= 1e-6
                assert numeric.method == "gaussian_engine"


def test_numeric_zero_gain():
    with pytest.raises(ZeroSignalSlopeError):
        numeric_sensitivity(InterferometerConfig.balanced(0.0), input_state_for_optimum(5.0, 1.0))
    with pytest.raises(ParameterError):
        numeric_sensitivity(InterferometerConfig.balanced(1.0), input_state_for_optimum(5.0, 1.0),
                            observable="parity")


def test_numeric_slope_random_points():
    """任意平衡點：數值斜率與 |β| sinh(2g)|cos Φ|/√2 一致"""
    rng = np.random.default_rng(5)
    accepted = 0
    while accepted < 100:
        config = InterferometerConfig.balanced(rng.uniform(0.3, 1.2), rng.uniform(-math.pi, math.pi),
                                               rng.uniform(-math.pi, math.pi))
        input_state = InputState(rng.uniform(1, 5), rng.uniform(-math.pi, math.pi),
                                 rng.uniform(0, 1.5), rng.uniform(-math.pi, math.pi))
        if abs(math.cos(derived_angles(config, input_state).phi_big)) <= 0.3:
            continue
        accepted += 1
        numeric = numeric_sensitivity(config, input_state)
        assert relative_deviation(numeric.slope, homodyne_slope(config, input_state)) <= 1e-7
        assert relative_deviation(numeric.delta_phi, homodyne_sensitivity(config, input_state).delta_phi) <= 1e-6


def test_unbalanced_engine_limits():
    """非平衡配置走高斯引擎，HL 取第一級之後的 N_Tot"""
    config = InterferometerConfig(stage1=FwmStage(0.8, 0.0), stage2=FwmStage(1.2, math.pi), phi=0.05)
    report = numeric_sensitivity(config, input_state_for_optimum(5.0, 1.0))
    assert report.delta_phi > 0
    assert report.hl == pytest.approx(1.0 / report.n_total)


def test_fock_numeric_matches_gaussian():
    point = ValidationPoint()
    config = InterferometerConfig.balanced(point.g, phi=0.1)
    gaussian = numeric_sensitivity(config, point.input_state)
    fock = numeric_sensitivity(config, point.input_state, simulator="fock", cutoff=30)
    assert fock.method == "fock_oracle"
    assert relative_deviation(gaussian.delta_phi, fock.delta_phi) <= 1e-6


def test_sweep_endpoints_match_direct_calls():
    spec = SweepSpec(variable="phi", start=-0.3, stop=0.3, points=2,
                     config=InterferometerConfig.balanced(1.0),
                     input_state=input_state_for_optimum(10.0, 2.0))
    rows = sweep(spec)
    assert [row.value for row in rows] == [-0.3, 0.3]
    for row in rows:
        direct = homodyne_sensitivity(InterferometerConfig.balanced(1.0, phi=row.value),
                                      input_state_for_optimum(10.0, 2.0))
        assert row.delta_phi_homodyne == direct.delta_phi
        assert row.ratio_to_hl == pytest.approx(direct.ratio_to_hl)
        assert row.flags == []


def test_sweep_spec_validation():
    with pytest.raises(ParameterError):
        SweepSpec(variable="theta", start=0, stop=1, points=5)
    with pytest.raises(ParameterError):
        SweepSpec(variable="phi", start=1, stop=0, points=5)
    with pytest.raises(ParameterError):
        SweepSpec(variable="phi", start=0, stop=1, points=1)
    with pytest.raises(ParameterError):
        SweepSpec(variable="phi", start=0, stop=1, points=5, backend="fock")


def test_gain_sweep_requires_equal_gains():
    """g 掃描不可把非平衡配置改寫成平衡配置"""
    unbalanced = InterferometerConfig(stage1=FwmStage(0.8, 0.0), stage2=FwmStage(1.2, math.pi))
    with pytest.raises(ParameterError, match="g1 = g2"):
        SweepSpec(variable="g", start=0.5, stop=1.5, points=3, config=unbalanced)
    spec = SweepSpec(variable="phi", start=0.1, stop=0.2, points=2, config=unbalanced, backend="gaussian_engine")
    assert spec.point(0.1)[0].stage2.gain == 1.2
    # 增益相等但相位非平衡時仍可掃 g，相位保持不變
    detuned = InterferometerConfig(stage1=FwmStage(1.0, 0.0), stage2=FwmStage(1.0, 2.0))
    config, _ = SweepSpec(variable="g", start=0.5, stop=1.5, points=3, config=detuned).point(0.5)
    assert (config.stage1.gain, config.stage2.gain, config.stage2.phase) == (0.5, 0.5, 2.0)


def test_sweep_dual_backend_with_losses():
    spec = SweepSpec(variable="phi", start=-0.5, stop=0.5, points=11,
                     config=InterferometerConfig.balanced(0.5, loss_internal=0.2, loss_external=0.1),
                     input_state=InputState(10.0, math.pi / 2, 2.0, 0.0), backend="both")
    frame = rows_to_frame(sweep(spec), "phi")
    assert not frame["flags"].str.contains("backend_mismatch").any()
    assert frame["dphi_engine"].notna().all()
    deviation = (frame["dphi_engine"] - frame["dphi_homodyne"]).abs() / frame["dphi_homodyne"]
    assert deviation.max() <= 1e-6


def test_sweep_flags_blind_point():
    """θ_β=0 時 Φ = π/2 − φ，φ=0 為盲點：保留列並標記"""
    spec = SweepSpec(variable="phi", start=-0.5, stop=0.5, points=11,
                     config=InterferometerConfig.balanced(1.0),
                     input_state=InputState(10.0, 0.0, 2.0, 0.0))
    frame = rows_to_frame(sweep(spec), "phi")
    assert len(frame) == 11
    blind = frame[frame["flags"] == "blind_point"]
    assert list(blind["phi"]) == [0.0]
    assert blind["dphi_homodyne"].isna().all()
    assert frame.loc[frame["flags"] == "", "dphi_homodyne"].notna().all()


def test_sweep_over_gain_and_beta():
    state = input_state_for_optimum(10.0, 2.0)
    spec = SweepSpec(variable="g", start=0.5, stop=1.5, points=3,
                     config=InterferometerConfig.balanced(1.0), input_state=state)
    for row in sweep(spec):
        assert row.delta_phi_homodyne == pytest.approx(optimal_point_sensitivity(row.value, 2.0, 10.0))
    row = evaluate_row(SweepSpec(variable="beta", start=0.0, stop=1.0, points=2,
                                 config=InterferometerConfig.balanced(1.0), input_state=state), 0.0)
    assert row.flags == ["zero_slope"]


def test_sweep_intensity_column():
    spec = SweepSpec(variable="phi", start=0.0, stop=0.4, points=3,
                     config=InterferometerConfig.balanced(1.0),
                     input_state=input_state_for_optimum(10.0, 2.0), include_intensity=True)
    frame = rows_to_frame(sweep(spec), "phi")
    assert math.isnan(frame["dphi_intensity"].iloc[0])
    assert frame["flags"].iloc[0] == "intensity_blind_point"
    assert frame["dphi_intensity"].iloc[1:].notna().all()


def test_find_optimal_beta():
    beta_star, ratio = find_optimal_beta(2.0, 3.0)
    approx = optimal_beta(2.0, 3.0)
    assert abs(beta_star - approx) / approx <= 0.15
    assert 0.9 <= ratio <= 1.1
    assert beta_star == pytest.approx(exact_optimal_beta(2.0, 3.0), rel=1e-5)


def test_ratio_is_not_monotone_in_beta():
    beta_star, ratio = find_optimal_beta(2.0, 3.0)
    assert optimal_ratio_to_hl(2.0, 3.0, beta_star / 2) > ratio
    assert optimal_ratio_to_hl(2.0, 3.0, beta_star * 2) > ratio


def test_find_optimal_beta_without_squeezing():
    """r=0、g=5：近似式給 1/2，精確極小點約為 1"""
    beta_star, _ = find_optimal_beta(5.0, 0.0)
    assert optimal_beta(5.0, 0.0) == pytest.approx(0.5, abs=1e-4)
    assert beta_star == pytest.approx(exact_optimal_beta(5.0, 0.0), rel=1e-5)
    assert beta_star == pytest.approx(1.0, abs=1e-3)


def test_find_optimal_beta_no_bracket():
    with pytest.raises(NoBracketError):
        find_optimal_beta(2.0, 3.0, (20.0, 100.0))
    with pytest.raises(ParameterError):
        find_optimal_beta(2.0, 3.0, (5.0, 1.0))


def test_optimum_summary_keys():
    summary = optimum_summary(2.0, 3.0)
    assert set(summary) == {"eq12_beta", "beta_star", "exact_beta", "ratio_at_min", "dphi_at_min"}
    assert summary["eq12_beta"] == pytest.approx(10.03, abs=0.01)


def test_nonmonotonicity_in_squeezing():
    """|β|=20、g=1：r=4 最佳，r=2 與 r=6 都較差"""
    report = nonmonotonicity_report(20.0, 1.0, (2, 4, 6))
    assert report.ratios[0] == pytest.approx(2.905, abs=0.01)
    assert report.ratios[1] == pytest.approx(1.088, abs=0.01)
    assert report.ratios[2] == pytest.approx(5.28, abs=0.05)
    assert not report.is_monotonic
    assert report.best_r == 4.0


def test_nonmonotonicity_edge_cases():
    single = nonmonotonicity_report(20.0, 1.0, (2,))
    assert single.is_monotonic
    assert isinstance(single, NonMonotonicityReport)
    fine = nonmonotonicity_report(20.0, 1.0, np.arange(1.0, 6.01, 0.25))
    best = fine.r_values.index(fine.best_r)
    assert 0 < best < len(fine.r_values) - 1
    assert fine.best_r == pytest.approx(3.69, abs=0.25)


def test_intensity_deviation_report_coherent_input():
    config = InterferometerConfig.balanced(1.0)
    report = intensity_deviation_report(config, InputState(3.0, 0.7, 0.0, 0.0), (-0.6, 0.2, 0.9))
    assert list(report.columns) == ["phi", "dphi_closed_form", "dphi_engine", "relative_deviation",
                                    "within_tolerance", "flags"]
    assert report["within_tolerance"].all()


def test_intensity_deviation_report_flags_blind():
    report = intensity_deviation_report(InterferometerConfig.balanced(1.0),
                                        input_state_for_optimum(10.0, 2.0), (0.0, 0.3))
    assert report["flags"].iloc[0] == "blind_point"
    assert not report["within_tolerance"].iloc[0]


def test_figure_3a_columns():
    frame, params = figure_3a()
    assert len(frame) == 60
    expected = ["g"]
    for r in range(1, 7):
        expected += [f"dphi_r{r}", f"hl_r{r}", f"sql_r{r}", f"ratio_r{r}"]
    assert list(frame.columns) == expected
    assert params["beta"] == 20.0
    assert (frame["hl_r2"] < frame["sql_r2"]).all()


def test_figure_3b_columns():
    frame, _ = figure_3b(points=5)
    assert "ratio_beta40" in frame.columns
    assert frame["dphi_beta40"].iloc[0] < frame["dphi_beta1"].iloc[0]


def test_figure_4_loss_ordering():
    """內部損耗的影響大於外部損耗"""
    frame, params = figure_4()
    assert len(frame) == 101
    assert (frame["dphi_L1only"] > frame["dphi_L2only"]).all()
    assert (frame["dphi_L2only"] > frame["dphi_lossless"]).all()
    assert (frame["flags"] == "").all()
    assert params["loss"] == 0.2


def test_figure_5_homodyne_better():
    frame, _ = figure_5()
    assert frame["dphi_homodyne"].min() < frame["dphi_intensity"].min()
    center = frame[frame["phi"] == 0.0]
    assert len(center) == 1
    assert center["flags"].iloc[0] == "intensity_blind_point"
    assert center["dphi_homodyne"].iloc[0] == pytest.approx(math.exp(-2) / (10 * math.sinh(2)))


def test_write_csv_is_deterministic(tmp_path):
    frame, params = figure_4(points=11)
    first = tmp_path / "first.csv"
    second = tmp_path / "nested" / "second.csv"
    write_csv(frame, str(first), params)
    write_csv(frame, str(second), params)
    data = first.read_bytes()
    assert data == second.read_bytes()
    assert b"\r" not in data
    lines = data.decode("utf-8").split("\n")
    assert lines[0] == "# tool = su11-phase-sensitivity"
    assert lines[1].startswith("# version = ")
    assert "# g = 5.00000000000e-01" in lines
    header = next(line for line in lines if not line.startswith("#"))
    assert header == "phi,dphi_lossless,dphi_L1only,dphi_L2only,flags"


def test_csv_blank_fields_for_flagged_rows(tmp_path):
    spec = SweepSpec(variable="phi", start=-0.5, stop=0.5, points=11,
                     config=InterferometerConfig.balanced(1.0),
                     input_state=InputState(10.0, 0.0, 2.0, 0.0))
    path = tmp_path / "blind.csv"
    write_csv(rows_to_frame(sweep(spec), "phi"), str(path), {"variable": "phi"})
    frame = pd.read_csv(path, comment="#")
    row = frame[frame["flags"] == "blind_point"]
    assert len(row) == 1
    assert row["dphi_homodyne"].isna().all()
    assert row["dphi_hl"].notna().all()


def test_txt_report(tmp_path):
    analyzer = Su11Analyzer(Su11ToolConfig(output_dir=str(tmp_path), generate_txt_report=True))
    frame, params = analyzer.build_figure("5", points=5)
    paths = analyzer.generate_reports(frame, params, str(tmp_path / "figure_5.csv"))
    assert [p[-4:] for p in paths] == [".csv", ".txt"]
    text = (tmp_path / "figure_5.txt").read_text(encoding="utf-8")
    assert "圖 5 相位靈敏度資料摘要" in text
    assert "intensity_blind_point" in text
    with pytest.raises(ParameterError):
        analyzer.build_figure("6")


def test_validation_default_passes():
    result = run_validation()
    assert result.passed
    assert result.max_deviation < 1e-6
    assert format_report(result).endswith("result=PASS")


def test_validation_small_cutoff_fails():
    result = run_validation(cutoff=4)
    assert not result.passed
    assert any("truncation tail" in check.detail for check in result.checks)
    assert format_report(result).endswith("result=FAIL")
