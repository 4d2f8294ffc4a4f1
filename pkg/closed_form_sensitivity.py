# -*- coding: utf-8 -*-
"""
解析靈敏度公式
平衡配置下的零差雜訊與相位靈敏度、最佳點靈敏度、HL/SQL、最佳 β 條件、
含損耗靈敏度，以及強度偵測公式

所有 Δφ 皆以弧度標準差回報（即 (Δφ)² 開根號）
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from su11_config import DEFAULTS, InputState, InterferometerConfig
from su11_errors import (
    BalancedConfigurationError,
    BlindPhasePointError,
    NoPhotonsError,
    ParameterError,
    SensitivityError,
    ZeroSignalSlopeError,
)
from su11_interferometer import TransferCoefficients, derived_angles, transfer_coefficients


class Detection(str, Enum):
    HOMODYNE = "homodyne"
    INTENSITY = "intensity"


@dataclass(frozen=True)
class SensitivityReport:
    delta_phi: float                           # Δφ（rad）
    noise: float                               # ⟨(ΔX̂)²⟩ 或 ⟨(ΔN̂)²⟩
    slope: float                               # |∂⟨·⟩/∂φ|
    backend: Detection
    hl: float                                  # Δφ_HL = 1/N_Tot
    sql: float                                 # Δφ_SQL = 1/√N_Tot
    n_total: float
    method: str = "closed_form"                # closed_form / gaussian_engine / fock_oracle

    @property
    def ratio_to_hl(self) -> float:
        return self.delta_phi / self.hl

    def identity_defect(self) -> float:
        """|Δφ²·slope² − noise| / noise，誤差傳遞恆等式的相對偏差"""
        return abs(self.delta_phi ** 2 * self.slope ** 2 - self.noise) / self.noise


# =======================
# ====== 共用檢查 ======
# =======================

def _require_balanced(config: InterferometerConfig) -> float:
    if not config.is_balanced():
        raise BalancedConfigurationError(
            f"g1={config.stage1.gain}, g2={config.stage2.gain}, θ2−θ1={config.stage2.phase - config.stage1.phase}"
        )
    return config.balanced_gain


def _require_signal(g: float, beta_mag: float) -> None:
    if g == 0.0 or beta_mag == 0.0:
        raise ZeroSignalSlopeError(f"g={g}, |β|={beta_mag}")


def _require_squeeze(r: float) -> None:
    if not math.isfinite(r) or r < 0:
        raise ParameterError(f"squeeze_r 必須 ≥ 0，收到 {r}")


def _check_loss(name: str, value: float) -> None:
    if not (0.0 <= value < 1.0):
        raise ParameterError(f"{name} 必須落在 [0, 1)，收到 {value}")


def reference_limits(g: float, r: float, beta_mag: float) -> Tuple[float, float, float]:
    """返回 (N_Tot, Δφ_HL, Δφ_SQL)"""
    n_total = total_photon_number(g, r, beta_mag)
    return n_total, heisenberg_limit(g, r, beta_mag), sql_limit(n_total)


# =======================
# ==== HL / SQL / β ====
# =======================

def total_photon_number(g: float, r: float, beta_mag: float) -> float:
    """干涉儀內部總光子數 N_Tot = cosh(2g)(|β|²+sinh²r) + 2 sinh²g"""
    return math.cosh(2 * g) * (beta_mag ** 2 + math.sinh(r) ** 2) + 2 * math.sinh(g) ** 2


def heisenberg_limit(g: float, r: float, beta_mag: float) -> float:
    n_total = total_photon_number(g, r, beta_mag)
    if n_total <= 0.0:
        raise NoPhotonsError(f"g={g}, r={r}, |β|={beta_mag}")
    return 1.0 / n_total


def sql_limit(n_total: float) -> float:
    if n_total <= 0.0:
        raise NoPhotonsError(f"N_Tot={n_total}")
    return 1.0 / math.sqrt(n_total)


def optimal_point_sensitivity(g: float, r: float, beta_mag: float) -> float:
    """最佳點 φ=0、Φ=0、Θ=0 的 Δφ′ = e^{−r} / (|β| sinh 2g)"""
    _require_squeeze(r)
    _require_signal(g, beta_mag)
    return math.exp(-r) / (beta_mag * math.sinh(2 * g))


def optimal_ratio_to_hl(g: float, r: float, beta_mag: float) -> float:
    """相對相位靈敏度 Δφ′/Δφ_HL"""
    return optimal_point_sensitivity(g, r, beta_mag) / heisenberg_limit(g, r, beta_mag)


def optimal_beta(g: float, r: float) -> float:
    """達到 HL 的近似條件 |β| ≃ e^r·tanh(2g)/2"""
    if g <= 0.0:
        raise ParameterError(f"最佳 β 條件需要 g > 0，收到 g={g}")
    _require_squeeze(r)
    return math.exp(r) * math.tanh(2 * g) / 2.0


def exact_optimal_beta(g: float, r: float) -> float:
    """
    Δφ′/Δφ_HL 對 |β| 的精確極小點

    比值正比於 (cosh2g·|β|² + C)/|β|，C = cosh2g·sinh²r + 2sinh²g，
    極小點 |β|² = C / cosh 2g；r 與 g 都大時才與 e^r·tanh(2g)/2 接近
    """
    if g <= 0.0:
        raise ParameterError(f"最佳 β 條件需要 g > 0，收到 g={g}")
    _require_squeeze(r)
    return math.sqrt(math.sinh(r) ** 2 + 2 * math.sinh(g) ** 2 / math.cosh(2 * g))


# =======================
# ===== 零差偵測 =====
# =======================

def homodyne_noise(config: InterferometerConfig, input_state: InputState,
                   coeffs: Optional[TransferCoefficients] = None) -> float:
    """⟨(ΔX̂)²⟩ = (|V|² + |U|²[cosh 2r − sinh 2r·cos Θ]) / 2"""
    _require_balanced(config)
    coeffs = transfer_coefficients(config) if coeffs is None else coeffs
    angles = derived_angles(config, input_state, coeffs)
    r = input_state.squeeze_r
    squeezed = math.cosh(2 * r) - math.sinh(2 * r) * math.cos(angles.theta_big)
    return (coeffs.v_abs2 + coeffs.u_abs2 * squeezed) / 2.0


def homodyne_slope(config: InterferometerConfig, input_state: InputState) -> float:
    """|∂⟨X̂⟩/∂φ| = |β| sinh(2g) |cos Φ| / √2"""
    g = _require_balanced(config)
    angles = derived_angles(config, input_state)
    return input_state.beta_mag * math.sinh(2 * g) * abs(math.cos(angles.phi_big)) / math.sqrt(2.0)


def _homodyne_parts(config: InterferometerConfig, input_state: InputState):
    g = _require_balanced(config)
    _require_signal(g, input_state.beta_mag)
    coeffs = transfer_coefficients(config)
    angles = derived_angles(config, input_state, coeffs)
    cos_phi_big = math.cos(angles.phi_big)
    if abs(cos_phi_big) < DEFAULTS.blind_threshold:
        raise BlindPhasePointError(f"|cos Φ|={abs(cos_phi_big):.2e}, Φ={angles.phi_big:.6f}")
    noise = homodyne_noise(config, input_state, coeffs)
    signal = input_state.beta_mag ** 2 * math.sinh(2 * g) ** 2 * cos_phi_big ** 2
    return g, noise, signal


def homodyne_sensitivity(config: InterferometerConfig, input_state: InputState) -> SensitivityReport:
    """(Δφ)² = 2⟨(ΔX̂)²⟩ / [|β|² sinh²(2g) cos²Φ]（無損耗）"""
    g, noise, signal = _homodyne_parts(config, input_state)
    n_total, hl, sql = reference_limits(g, input_state.squeeze_r, input_state.beta_mag)
    return SensitivityReport(
        delta_phi=math.sqrt(2.0 * noise / signal),
        noise=noise,
        slope=math.sqrt(signal / 2.0),
        backend=Detection.HOMODYNE,
        hl=hl,
        sql=sql,
        n_total=n_total,
    )


def loss_extra_term(g: float, beta_mag: float, cos_phi_big: float,
                    loss_internal: float, loss_external: float) -> float:
    """損耗帶來的額外雜訊項 [cosh(2g)L1(1−L2)+L2] / [(1−L1)(1−L2)|β|² sinh²(2g) cos²Φ]"""
    numerator = math.cosh(2 * g) * loss_internal * (1 - loss_external) + loss_external
    denominator = ((1 - loss_internal) * (1 - loss_external)
                   * beta_mag ** 2 * math.sinh(2 * g) ** 2 * cos_phi_big ** 2)
    return numerator / denominator


def lossy_homodyne_sensitivity(config: InterferometerConfig, input_state: InputState,
                               loss_internal: Optional[float] = None,
                               loss_external: Optional[float] = None) -> SensitivityReport:
    """含內部損耗 L1 與外部損耗 L2 的零差靈敏度；未指定時取 config 內的損耗"""
    l1 = config.loss_internal if loss_internal is None else loss_internal
    l2 = config.loss_external if loss_external is None else loss_external
    _check_loss("L1", l1)
    _check_loss("L2", l2)

    g, noise, signal = _homodyne_parts(config, input_state)
    cos_phi_big = math.cos(derived_angles(config, input_state).phi_big)
    lossless = 2.0 * noise / signal
    extra = loss_extra_term(g, input_state.beta_mag, cos_phi_big, l1, l2)

    transmission = (1 - l1) * (1 - l2)
    noise_lossy = transmission * noise + (1 - l2) * l1 * math.cosh(2 * g) / 2.0 + l2 / 2.0
    n_total, hl, sql = reference_limits(g, input_state.squeeze_r, input_state.beta_mag)
    return SensitivityReport(
        delta_phi=math.sqrt(lossless + extra),
        noise=noise_lossy,
        slope=math.sqrt(transmission * signal / 2.0),
        backend=Detection.HOMODYNE,
        hl=hl,
        sql=sql,
        n_total=n_total,
    )


# =======================
# ===== 強度偵測 =====
# =======================

def intensity_mean(config: InterferometerConfig, input_state: InputState) -> float:
    """⟨N̂⟩ = (1 + 2|V|²)(|β|² + sinh²r) + 2|V|²"""
    _require_balanced(config)
    coeffs = transfer_coefficients(config)
    return (1 + 2 * coeffs.v_abs2) * input_state.mean_photons + 2 * coeffs.v_abs2


def intensity_slope(config: InterferometerConfig, input_state: InputState) -> float:
    """|∂⟨N̂⟩/∂φ| = 4(|β|² + sinh²r + 1) sinh²g cosh²g |sin φ|"""
    g = _require_balanced(config)
    return (4 * (input_state.mean_photons + 1) * math.sinh(g) ** 2 * math.cosh(g) ** 2
            * abs(math.sin(config.phi)))


def coherent_vacuum_intensity_variance(coeffs: TransferCoefficients, beta_mag: float) -> float:
    """同調⊗真空輸入時 ⟨(ΔN̂)²⟩ = |β|²(|U|²+|V|²)² + 4|U|²|V|²(|β|²+1)"""
    nb = beta_mag ** 2
    return nb * (coeffs.u_abs2 + coeffs.v_abs2) ** 2 + 4 * coeffs.u_abs2 * coeffs.v_abs2 * (nb + 1)


def intensity_lambda(coeffs: TransferCoefficients, input_state: InputState) -> float:
    """壓縮真空帶來的 Λ 項（含 c.c.）"""
    r = input_state.squeeze_r
    nb = input_state.beta_mag ** 2
    sr2 = math.sinh(r) ** 2
    k2 = (coeffs.u_abs2 + coeffs.v_abs2) ** 2
    phase_term = (4 * coeffs.u ** 2 * coeffs.v.conjugate() ** 2 * input_state.beta ** 2
                  * math.cosh(r) * math.sinh(r) * complex(math.cos(input_state.squeeze_eta),
                                                          math.sin(input_state.squeeze_eta)))
    return (k2 * (1 + math.cosh(r) ** 2) * sr2
            + 4 * coeffs.u_abs2 * coeffs.v_abs2 * (1 + 2 * nb) * sr2
            + 2 * phase_term.real)


def intensity_sensitivity(config: InterferometerConfig, input_state: InputState) -> SensitivityReport:
    """
    強度偵測 N̂ = n̂_a2 + n̂_b2 的相位靈敏度

    (Δφ_s^N)² = (|β|²+1)²/(|β|²+1+sinh²r)² · (Δφ_c^N)² + A，A 與 Λ 依原式逐項實作，
    其正確性由高斯引擎交叉比對（見 su11_analyzer.intensity_deviation_report）
    """
    g = _require_balanced(config)
    sin_phi = math.sin(config.phi)
    if abs(sin_phi) < DEFAULTS.blind_threshold:
        raise BlindPhasePointError("intensity detection blind at φ=0")
    if g == 0.0:
        raise ZeroSignalSlopeError(f"g={g}")

    coeffs = transfer_coefficients(config)
    nb = input_state.beta_mag ** 2
    n_in = input_state.mean_photons
    s2, c2 = math.sinh(g) ** 2, math.cosh(g) ** 2

    dphi_c2 = (coherent_vacuum_intensity_variance(coeffs, input_state.beta_mag)
               / (16 * (nb + 1) ** 2 * sin_phi ** 2 * s2 ** 2 * c2 ** 2))
    a_term = (intensity_lambda(coeffs, input_state)
              / (16 * (n_in + 1) ** 2 * sin_phi ** 2 * s2 * c2))
    dphi_s2 = (nb + 1) ** 2 / (n_in + 1) ** 2 * dphi_c2 + a_term
    if dphi_s2 <= 0.0:
        raise SensitivityError(f"強度偵測公式給出非正的 (Δφ)²={dphi_s2:.3e}")

    slope = intensity_slope(config, input_state)
    n_total, hl, sql = reference_limits(g, input_state.squeeze_r, input_state.beta_mag)
    return SensitivityReport(
        delta_phi=math.sqrt(dphi_s2),
        noise=dphi_s2 * slope ** 2,
        slope=slope,
        backend=Detection.INTENSITY,
        hl=hl,
        sql=sql,
        n_total=n_total,
    )
