# -*- coding: utf-8 -*-
"""
雙模高斯態引擎
=================================================
以一階矩（平均向量）與二階矩（協方差矩陣）精確描述 (a, b) 兩模高斯態，
提供與解析式完全獨立的一條計算路徑：
1) 輸入態製備（a0 壓縮真空、b0 同調態）
2) 兩模壓縮（FWM 級）、相移、光子損耗通道
3) 零差量測統計與光子數統計（Var(N̂) 由 Isserlis 展開計算）
4) 完整干涉儀流程：製備 → 第一級 → 內部損耗 → 相移 → 第二級 → 外部損耗

慣例：
- 正交分量排序 (x_a, p_a, x_b, p_b)
- X = (a + a†)/√2，P = (a − a†)/(i√2)，真空方差 1/2
- 狀態以 Heisenberg 表象演化：mean → S·mean + d，cov → S·cov·Sᵀ
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from su11_config import InputState, InterferometerConfig
from su11_errors import ParameterError
from su11_interferometer import TransferCoefficients

logger = logging.getLogger(__name__)

MODES = ("a", "b")
N_MODES = 2

# 標準辛形式 Ω = ⊕ [[0, 1], [−1, 0]]
OMEGA = np.kron(np.eye(N_MODES), np.array([[0.0, 1.0], [-1.0, 0.0]]))
VACUUM_COV = 0.5 * np.eye(2 * N_MODES)


def _mode_index(mode: str) -> int:
    if mode not in MODES:
        raise ParameterError(f"模式必須為 'a' 或 'b'，收到 {mode!r}")
    return MODES.index(mode)


def _mode_slice(mode: str) -> slice:
    k = _mode_index(mode)
    return slice(2 * k, 2 * k + 2)


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(2 * N_MODES)
        cov = np.asarray(self.cov, dtype=float).reshape(2 * N_MODES, 2 * N_MODES)
        # 對稱化以抑制浮點誤差累積
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @classmethod
    def vacuum(cls) -> "GaussianState":
        return cls(np.zeros(2 * N_MODES), VACUUM_COV.copy())

    def mode_mean(self, mode: str) -> np.ndarray:
        return self.mean[_mode_slice(mode)]

    def mode_cov(self, mode: str) -> np.ndarray:
        sl = _mode_slice(mode)
        return self.cov[sl, sl]

    def uncertainty_eigenvalues(self) -> np.ndarray:
        """cov + (i/2)Ω 的特徵值，物理態應全部 ≥ 0"""
        return np.linalg.eigvalsh(self.cov + 0.5j * OMEGA)

    def is_physical(self, tol: float = 1e-10) -> bool:
        symmetric = np.allclose(self.cov, self.cov.T, atol=1e-12, rtol=0.0)
        return bool(symmetric and self.uncertainty_eigenvalues().min() >= -tol)

    def purity_indicator(self) -> float:
        """det(2·cov)，純態為 1"""
        return float(np.linalg.det(2.0 * self.cov))

    def allclose(self, other: "GaussianState", atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.mean, other.mean, atol=atol, rtol=0.0)
                    and np.allclose(self.cov, other.cov, atol=atol, rtol=0.0))


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    matrix: np.ndarray
    displacement: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=float))
        if self.displacement is None:
            object.__setattr__(self, "displacement", np.zeros(2 * N_MODES))
        else:
            object.__setattr__(self, "displacement", np.asarray(self.displacement, dtype=float))

    def symplectic_defect(self) -> float:
        """max |SᵀΩS − Ω|"""
        s = self.matrix
        return float(np.max(np.abs(s.T @ OMEGA @ s - OMEGA)))

    def is_symplectic(self, tol: float = 1e-10) -> bool:
        return self.symplectic_defect() <= tol

    def apply(self, state: GaussianState) -> GaussianState:
        s = self.matrix
        return GaussianState(s @ state.mean + self.displacement, s @ state.cov @ s.T)

    def then(self, other: "SymplecticOp") -> "SymplecticOp":
        """先做 self 再做 other"""
        return SymplecticOp(other.matrix @ self.matrix,
                            other.matrix @ self.displacement + other.displacement)


def bogoliubov_to_symplectic(a_mat: np.ndarray, b_mat: np.ndarray) -> np.ndarray:
    """
    將 Bogoliubov 變換 a_out_j = Σ_k A_jk a_k + B_jk a_k† 轉成正交分量的實辛矩陣

    每個 (j, k) 區塊為 [[Re(A+B), −Im(A−B)], [Im(A+B), Re(A−B)]]
    """
    a_mat = np.asarray(a_mat, dtype=complex)
    b_mat = np.asarray(b_mat, dtype=complex)
    n = a_mat.shape[0]
    s = np.zeros((2 * n, 2 * n))
    plus = a_mat + b_mat
    minus = a_mat - b_mat
    for j in range(n):
        for k in range(n):
            s[2 * j, 2 * k] = plus[j, k].real
            s[2 * j, 2 * k + 1] = -minus[j, k].imag
            s[2 * j + 1, 2 * k] = plus[j, k].imag
            s[2 * j + 1, 2 * k + 1] = minus[j, k].real
    return s


def single_mode_squeezer_op(r: float, eta: float, mode: str = "a") -> SymplecticOp:
    """單模壓縮 S†aS = cosh r·a − e^{iη} sinh r·a†"""
    k = _mode_index(mode)
    a_mat = np.eye(N_MODES, dtype=complex)
    b_mat = np.zeros((N_MODES, N_MODES), dtype=complex)
    a_mat[k, k] = np.cosh(r)
    b_mat[k, k] = -np.exp(1j * eta) * np.sinh(r)
    return SymplecticOp(bogoliubov_to_symplectic(a_mat, b_mat))


def displacement_op(alpha: complex, mode: str) -> SymplecticOp:
    d = np.zeros(2 * N_MODES)
    sl = _mode_slice(mode)
    d[sl] = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return SymplecticOp(np.eye(2 * N_MODES), d)


def two_mode_squeezer_op(g: float, theta: float, sign_convention: str = "minus") -> SymplecticOp:
    """
    單級 FWM 的辛矩陣

    sign_convention="minus"：a_out = cosh g·a − e^{iθ} sinh g·b†（與干涉儀核心一致）
    sign_convention="plus" ：a_out = cosh g·a + e^{iθ} sinh g·b†
    """
    if g < 0:
        raise ParameterError(f"FWM 增益必須 ≥ 0，收到 g={g}")
    if sign_convention not in ("minus", "plus"):
        raise ParameterError(f"未知的符號慣例 {sign_convention!r}")
    sign = -1.0 if sign_convention == "minus" else 1.0
    a_mat = np.cosh(g) * np.eye(N_MODES, dtype=complex)
    b_mat = sign * np.exp(1j * theta) * np.sinh(g) * np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return SymplecticOp(bogoliubov_to_symplectic(a_mat, b_mat))


def phase_shift_op(phi: float, mode: str = "b") -> SymplecticOp:
    """相移 b → e^{iφ} b，正交分量逆時針旋轉 φ"""
    k = _mode_index(mode)
    a_mat = np.eye(N_MODES, dtype=complex)
    a_mat[k, k] = np.exp(1j * phi)
    return SymplecticOp(bogoliubov_to_symplectic(a_mat, np.zeros((N_MODES, N_MODES))))


def prepare_input(input_state: InputState) -> GaussianState:
    """a0 = 壓縮真空 (r, η)，b0 = 同調態 β"""
    state = single_mode_squeezer_op(input_state.squeeze_r, input_state.squeeze_eta, "a").apply(GaussianState.vacuum())
    return displacement_op(input_state.beta, "b").apply(state)


def apply_phase_shift(state: GaussianState, phi: float, mode: str = "b") -> GaussianState:
    return phase_shift_op(phi, mode).apply(state)


def apply_loss(state: GaussianState, loss: float, mode: str) -> GaussianState:
    """
    純損耗通道（分束器與真空混合）

    mean → √(1−L)·mean；該模區塊 → (1−L)·cov + L·I/2；交叉協方差乘上 √(1−L)
    """
    if not (0.0 <= loss < 1.0):
        raise ParameterError(f"損耗必須落在 [0, 1)，收到 L={loss}")
    sl = _mode_slice(mode)
    scale = np.ones(2 * N_MODES)
    scale[sl] = np.sqrt(1.0 - loss)
    mean = scale * state.mean
    cov = np.outer(scale, scale) * state.cov
    cov[sl, sl] += 0.5 * loss * np.eye(2)
    return GaussianState(mean, cov)


def quadrature_stats(state: GaussianState, mode: str = "a", angle: float = 0.0) -> Tuple[float, float]:
    """cos(angle)·x + sin(angle)·p 的平均值與方差"""
    direction = np.array([np.cos(angle), np.sin(angle)])
    mean = float(direction @ state.mode_mean(mode))
    variance = float(direction @ state.mode_cov(mode) @ direction)
    return mean, variance


def quadratic_form_variance(state: GaussianState, q_mat: np.ndarray) -> float:
    """
    二次型 r̂ᵀ Q r̂ 的方差（Q 實對稱）

    Isserlis 展開給出 2·Tr(QσQσ) + 4·dᵀQσQd，
    正交分量不對易的修正項為 ½·Tr(QΩQΩ)
    """
    q_mat = np.asarray(q_mat, dtype=float)
    sigma, d = state.cov, state.mean
    isserlis = 2.0 * np.trace(q_mat @ sigma @ q_mat @ sigma) + 4.0 * d @ q_mat @ sigma @ q_mat @ d
    commutator = 0.5 * np.trace(q_mat @ OMEGA @ q_mat @ OMEGA)
    return float(isserlis + commutator)


def mode_photon_number(state: GaussianState, mode: str) -> float:
    """⟨n⟩ = (Var x + Var p + ⟨x⟩² + ⟨p⟩² − 1)/2"""
    m = state.mode_mean(mode)
    c = state.mode_cov(mode)
    return float(0.5 * (np.trace(c) + m @ m - 1.0))


def photon_stats(state: GaussianState) -> Tuple[float, float, float, float]:
    """返回 (n_a, n_b, n_total, Var(N̂))，N̂ = n̂_a + n̂_b = ½ r̂ᵀr̂ − 1"""
    n_a = mode_photon_number(state, "a")
    n_b = mode_photon_number(state, "b")
    var_n_total = quadratic_form_variance(state, 0.5 * np.eye(2 * N_MODES))
    return n_a, n_b, n_a + n_b, var_n_total


def composed_symplectic(config: InterferometerConfig) -> SymplecticOp:
    """逐級相乘：第一級 → b 臂相移 φ → 第二級（無損耗）"""
    stage1 = two_mode_squeezer_op(config.stage1.gain, config.stage1.phase)
    stage2 = two_mode_squeezer_op(config.stage2.gain, config.stage2.phase)
    return stage1.then(phase_shift_op(config.phi, "b")).then(stage2)


def transfer_symplectic(coeffs: TransferCoefficients, phi: float) -> SymplecticOp:
    """a2 = U a0 − V b0†，b2 = e^{iφ}(U b0 − V a0†) 的正交分量表示"""
    rot = np.exp(1j * phi)
    a_mat = np.array([[coeffs.u, 0.0], [0.0, rot * coeffs.u]], dtype=complex)
    b_mat = np.array([[0.0, -coeffs.v], [-rot * coeffs.v, 0.0]], dtype=complex)
    return SymplecticOp(bogoliubov_to_symplectic(a_mat, b_mat))


def interior_state(config: InterferometerConfig, input_state: InputState) -> GaussianState:
    """第一級 FWM 之後（干涉儀內部）的狀態，N_Tot 在此定義"""
    state = prepare_input(input_state)
    return two_mode_squeezer_op(config.stage1.gain, config.stage1.phase).apply(state)


def run_interferometer(config: InterferometerConfig, input_state: InputState,
                       external_loss_on_both: bool = False) -> GaussianState:
    """
    完整流程：製備 → 第一級 → 內部損耗 L1（兩臂）→ 相移 φ → 第二級 → 外部損耗 L2

    external_loss_on_both=False 時 L2 只作用在被零差偵測的 a2
    """
    state = interior_state(config, input_state)
    if config.loss_internal > 0.0:
        state = apply_loss(state, config.loss_internal, "a")
        state = apply_loss(state, config.loss_internal, "b")
    state = apply_phase_shift(state, config.phi, "b")
    state = two_mode_squeezer_op(config.stage2.gain, config.stage2.phase).apply(state)
    if config.loss_external > 0.0:
        state = apply_loss(state, config.loss_external, "a")
        if external_loss_on_both:
            state = apply_loss(state, config.loss_external, "b")
    logger.debug("高斯引擎輸出 φ=%.6f mean=%s", config.phi, state.mean)
    return state
