# -*- coding: utf-8 -*-
"""
SU(1,1) 干涉儀核心
計算兩級 FWM 合成後的傳遞係數 U、V，以及所有公式共用的角度 Θ、Φ

輸出模式：
    a2 = U a0 − V b0†
    b2 = e^{iφ} (U b0 − V a0†)
單級慣例：a_out = cosh g·a − e^{iθ} sinh g·b†，b_out = cosh g·b − e^{iθ} sinh g·a†
相位 φ 作用在 b 臂：b → e^{iφ} b
"""

import cmath
import math
from dataclasses import dataclass

from su11_config import InputState, InterferometerConfig, wrap_angle

__all__ = [
    "TransferCoefficients",
    "DerivedAngles",
    "transfer_coefficients",
    "derived_angles",
    "wrap_angle",
]


@dataclass(frozen=True)
class TransferCoefficients:
    u: complex
    v: complex
    theta_u: float

    @property
    def u_abs2(self) -> float:
        return abs(self.u) ** 2

    @property
    def v_abs2(self) -> float:
        return abs(self.v) ** 2

    def hyperbolic_defect(self) -> float:
        """|U|² − |V|² − 1 的相對偏差，理論上為 0"""
        return abs(self.u_abs2 - self.v_abs2 - 1.0) / max(1.0, self.u_abs2)


@dataclass(frozen=True)
class DerivedAngles:
    theta_big: float                           # Θ = η + 2θ_U
    phi_big: float                             # Φ = θ2 − θ_β − φ − π/2


def transfer_coefficients(config: InterferometerConfig) -> TransferCoefficients:
    """計算合成 SU(1,1) 變換的 U、V"""
    g1, theta1 = config.stage1.gain, config.stage1.phase
    g2, theta2 = config.stage2.gain, config.stage2.phase
    c1, s1 = math.cosh(g1), math.sinh(g1)
    c2, s2 = math.cosh(g2), math.sinh(g2)

    shift = cmath.exp(-1j * config.phi)
    u = c1 * c2 + shift * cmath.exp(1j * (theta2 - theta1)) * s1 * s2
    v = cmath.exp(1j * theta1) * s1 * c2 + shift * cmath.exp(1j * theta2) * c1 * s2
    return TransferCoefficients(u=complex(u), v=complex(v), theta_u=cmath.phase(u))


def derived_angles(config: InterferometerConfig, input_state: InputState,
                   coeffs: TransferCoefficients = None) -> DerivedAngles:
    """計算 Θ 與 Φ，皆約化到 (−π, π]"""
    if coeffs is None:
        coeffs = transfer_coefficients(config)
    theta_big = wrap_angle(input_state.squeeze_eta + 2.0 * coeffs.theta_u)
    phi_big = wrap_angle(config.stage2.phase - input_state.beta_phase - config.phi - math.pi / 2)
    return DerivedAngles(theta_big=theta_big, phi_big=phi_big)
