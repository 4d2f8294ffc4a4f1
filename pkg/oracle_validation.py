# -*- coding: utf-8 -*-
"""
三方一致性驗證
小參數區間內比較 Fock 暴力模擬、高斯引擎與解析式的
⟨X̂⟩、Var(X̂)、⟨N̂⟩、Var(N̂) 與 Δφ
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import fock_oracle
import gaussian_engine
from closed_form_sensitivity import homodyne_noise, homodyne_sensitivity, intensity_mean, intensity_sensitivity
from su11_analyzer import numeric_sensitivity, relative_deviation
from su11_config import DEFAULTS, InputState, InterferometerConfig
from su11_errors import FockTruncationError, Su11Error
from su11_interferometer import transfer_coefficients

logger = logging.getLogger(__name__)


@dataclass
class ValidationCheck:
    name: str
    phi: float
    reference: Optional[float] = None
    candidate: Optional[float] = None
    deviation: Optional[float] = None
    passed: bool = False
    detail: str = ""


@dataclass
class ValidationResult:
    cutoff: int
    tolerance: float
    checks: List[ValidationCheck] = field(default_factory=list)
    informational: List[ValidationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def max_deviation(self) -> float:
        values = [c.deviation for c in self.checks if c.deviation is not None]
        return max(values) if values else math.nan


@dataclass(frozen=True)
class ValidationPoint:
    """驗證用的小參數組"""
    beta_mag: float = 0.6
    beta_phase: float = math.pi / 2
    squeeze_r: float = 0.3
    squeeze_eta: float = 0.0
    g: float = 0.25
    phis: Sequence[float] = (0.0, 0.1, 0.2)

    @property
    def input_state(self) -> InputState:
        return InputState(self.beta_mag, self.beta_phase, self.squeeze_r, self.squeeze_eta)


def _compare(result: ValidationResult, name: str, phi: float, reference: float, candidate: float,
             floor: float = 1e-300) -> None:
    deviation = relative_deviation(reference, candidate, floor)
    result.checks.append(ValidationCheck(
        name=name, phi=phi, reference=reference, candidate=candidate,
        deviation=deviation, passed=deviation <= result.tolerance,
    ))


def _fail(result: ValidationResult, name: str, phi: float, exc: Exception) -> None:
    logger.info("驗證項目 %s 在 φ=%g 失敗：%s", name, phi, exc)
    result.checks.append(ValidationCheck(name=name, phi=phi, passed=False, detail=str(exc)))


def _validate_phi(result: ValidationResult, point: ValidationPoint, phi: float) -> None:
    config = InterferometerConfig.balanced(point.g, phi=phi)
    input_state = point.input_state

    # 高斯引擎
    state = gaussian_engine.run_interferometer(config, input_state)
    mean_x, var_x = gaussian_engine.quadrature_stats(state, "a", 0.0)
    _, _, n_total, var_n = gaussian_engine.photon_stats(state)

    # 解析式
    coeffs = transfer_coefficients(config)
    closed_mean_x = math.sqrt(2.0) * (-coeffs.v * input_state.beta.conjugate()).real
    _compare(result, "mean_X closed vs engine", phi, mean_x, closed_mean_x, floor=1.0)
    _compare(result, "var_X closed vs engine", phi, var_x, homodyne_noise(config, input_state))
    _compare(result, "n_total closed vs engine", phi, n_total, intensity_mean(config, input_state))

    engine_dphi = numeric_sensitivity(config, input_state).delta_phi
    _compare(result, "dphi closed vs engine", phi, engine_dphi,
             homodyne_sensitivity(config, input_state).delta_phi)

    # Fock 暴力模擬
    try:
        fock_state = fock_oracle.run_interferometer(config, input_state, result.cutoff)
        obs = fock_oracle.observables(fock_state)
    except FockTruncationError as exc:
        _fail(result, "fock truncation", phi, exc)
        return
    _compare(result, "mean_X fock vs engine", phi, mean_x, obs.mean_x_a, floor=1.0)
    _compare(result, "var_X fock vs engine", phi, var_x, obs.var_x_a)
    _compare(result, "n_total fock vs engine", phi, n_total, obs.mean_n_total)
    _compare(result, "var_N fock vs engine", phi, var_n, obs.var_n_total)

    try:
        fock_dphi = numeric_sensitivity(config, input_state, simulator="fock", cutoff=result.cutoff).delta_phi
        _compare(result, "dphi fock vs engine", phi, engine_dphi, fock_dphi)
    except Su11Error as exc:
        _fail(result, "dphi fock vs engine", phi, exc)

    if abs(math.sin(phi)) < DEFAULTS.blind_threshold:
        return
    try:
        engine_n = numeric_sensitivity(config, input_state, observable="intensity").delta_phi
        fock_n = numeric_sensitivity(config, input_state, observable="intensity",
                                     simulator="fock", cutoff=result.cutoff).delta_phi
        _compare(result, "dphi_N fock vs engine", phi, engine_n, fock_n)
        closed_n = intensity_sensitivity(config, input_state).delta_phi
        result.informational.append(ValidationCheck(
            name="dphi_N closed vs engine", phi=phi, reference=engine_n, candidate=closed_n,
            deviation=relative_deviation(engine_n, closed_n), passed=True,
        ))
    except Su11Error as exc:
        _fail(result, "dphi_N fock vs engine", phi, exc)


def run_validation(cutoff: Optional[int] = None, tolerance: Optional[float] = None,
                   point: ValidationPoint = ValidationPoint()) -> ValidationResult:
    """執行三方驗證；Fock 截斷不足算作失敗項目"""
    cutoff = DEFAULTS.fock_default_cutoff if cutoff is None else cutoff
    tolerance = DEFAULTS.backend_agreement if tolerance is None else tolerance
    fock_oracle.check_cutoff(cutoff)
    result = ValidationResult(cutoff=cutoff, tolerance=tolerance)
    for phi in point.phis:
        logger.info("驗證 φ=%g（cutoff=%d）", phi, cutoff)
        _validate_phi(result, point, float(phi))
    return result


def format_report(result: ValidationResult) -> str:
    lines = []
    lines.append("=" * 80)
    lines.append("三方一致性驗證（Fock 截斷 / 高斯引擎 / 解析式）")
    lines.append("=" * 80)
    lines.append(f"截斷維度: {result.cutoff}")
    lines.append(f"相對誤差門檻: {result.tolerance:.1e}")
    lines.append("")
    for check in result.checks:
        mark = "✅" if check.passed else "❌"
        if check.deviation is None:
            lines.append(f"{mark} φ={check.phi:<5g} {check.name}: {check.detail}")
        else:
            lines.append(f"{mark} φ={check.phi:<5g} {check.name}: 相對偏差 {check.deviation:.3e}")
    if result.informational:
        lines.append("")
        lines.append("📋 僅供參考（不列入判定）")
        for check in result.informational:
            lines.append(f"   φ={check.phi:<5g} {check.name}: 相對偏差 {check.deviation:.3e}")
    lines.append("")
    lines.append(f"max_deviation={result.max_deviation:.11e}")
    lines.append(f"result={'PASS' if result.passed else 'FAIL'}")
    return "\n".join(lines)
