# -*- coding: utf-8 -*-
"""
截斷 Fock 空間暴力模擬器（無損耗）
以 (cutoff × cutoff) 複數張量表示兩模 (a, b) 的純態，
生成元的指數以分段 Taylor 級數計算，作為高斯引擎與解析式的獨立驗證
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from su11_config import DEFAULTS, InputState, InterferometerConfig
from su11_errors import ConvergenceError, CutoffError, ParameterError, TailMassError

logger = logging.getLogger(__name__)


def lowering_operator(cutoff: int) -> np.ndarray:
    """截斷湮滅算符：上對角線為 √1, √2, ..., √(cutoff−1)"""
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)


@dataclass(frozen=True)
class FockState:
    amplitudes: np.ndarray                     # shape (cutoff, cutoff)，軸 0 = a，軸 1 = b

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise ParameterError(f"Fock 振幅必須是方陣，收到 shape={amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def vacuum(cls, cutoff: int) -> "FockState":
        check_cutoff(cutoff)
        amps = np.zeros((cutoff, cutoff), dtype=complex)
        amps[0, 0] = 1.0
        return cls(amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def norm_error(self) -> float:
        """|1 − Σ|c|²|"""
        return abs(1.0 - float(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class FockObservables:
    mean_x_a: float
    var_x_a: float
    n_a: float
    n_b: float
    mean_n_total: float
    var_n_total: float
    tail_mass: float


def check_cutoff(cutoff: int) -> None:
    if not isinstance(cutoff, (int, np.integer)) or cutoff < 1:
        raise ParameterError(f"截斷維度必須是正整數，收到 {cutoff}")
    if cutoff > DEFAULTS.fock_max_cutoff:
        raise ParameterError(
            f"截斷維度 {cutoff} 超過上限 {DEFAULTS.fock_max_cutoff}；"
            f"大參數區請改用高斯引擎（兩者在高斯態上等價）"
        )


def _occupancy_guard(mean_n: float, spread: float, cutoff: int, what: str) -> None:
    required = mean_n + 6.0 * spread
    if required >= cutoff:
        raise CutoffError(math.floor(required) + 1, cutoff, what)


# =======================
# ===== 算符作用 =====
# =======================

def _on_mode(op: np.ndarray, amps: np.ndarray, mode: str) -> np.ndarray:
    if mode == "a":
        return op @ amps
    if mode == "b":
        return amps @ op.T
    raise ParameterError(f"未知的模式 {mode!r}，僅支援 'a' 或 'b'")


def _exp_apply(generator: Callable[[np.ndarray], np.ndarray], amps: np.ndarray,
               norm_bound: float) -> np.ndarray:
    """
    計算 exp(G)ψ，G 反厄米

    分成 m = ceil(‖G‖) 個子步，每步 ‖G/m‖ ≤ 1，Taylor 級數在殘差 < 容忍度時停止
    """
    steps = max(1, math.ceil(norm_bound))
    tol = DEFAULTS.fock_series_tolerance
    result = amps
    for _ in range(steps):
        term = result
        total = result.copy()
        for k in range(1, DEFAULTS.fock_max_terms + 1):
            term = generator(term) / (steps * k)
            total = total + term
            if np.linalg.norm(term) < tol * max(1.0, np.linalg.norm(total)):
                break
        else:
            raise ConvergenceError(
                f"Taylor 級數在 {DEFAULTS.fock_max_terms} 項內未收斂（‖G‖≤{norm_bound:.3g}）"
            )
        result = total
    return result


def displace(state: FockState, beta: complex, mode: str) -> FockState:
    """D(β) = exp(β a† − β* a)"""
    beta = complex(beta)
    if beta == 0:
        return state
    c = state.cutoff
    n = abs(beta) ** 2
    _occupancy_guard(n, math.sqrt(n), c, f"位移 |β|={abs(beta):.4g}")

    low = lowering_operator(c)
    raise_ = low.conj().T

    def generator(amps):
        return beta * _on_mode(raise_, amps, mode) - beta.conjugate() * _on_mode(low, amps, mode)

    return FockState(_exp_apply(generator, state.amplitudes, 2 * abs(beta) * math.sqrt(c - 1)))


def squeeze_single(state: FockState, r: float, eta: float, mode: str) -> FockState:
    """S(ξ) = exp(½(ξ* a² − ξ a†²))，ξ = r e^{iη}；S† a S = cosh r·a − e^{iη} sinh r·a†"""
    if r == 0.0:
        return state
    c = state.cutoff
    _occupancy_guard(math.sinh(r) ** 2, math.sinh(r) * math.cosh(r), c, f"單模壓縮 r={r:.4g}")

    xi = r * complex(math.cos(eta), math.sin(eta))
    low = lowering_operator(c)
    low2 = low @ low
    raise2 = low2.conj().T

    def generator(amps):
        return 0.5 * (xi.conjugate() * _on_mode(low2, amps, mode) - xi * _on_mode(raise2, amps, mode))

    return FockState(_exp_apply(generator, state.amplitudes, r * (c - 1)))


def squeeze_two_mode(state: FockState, g: float, theta: float) -> FockState:
    """T = exp(g(e^{−iθ} ab − e^{iθ} a†b†))；T† a T = cosh g·a − e^{iθ} sinh g·b†"""
    if g == 0.0:
        return state
    c = state.cutoff
    _occupancy_guard(math.sinh(g) ** 2, math.sinh(g) * math.cosh(g), c, f"雙模壓縮 g={g:.4g}")

    rot = complex(math.cos(theta), math.sin(theta))
    low = lowering_operator(c)
    raise_ = low.conj().T

    def generator(amps):
        pair_down = low @ amps @ low.T
        pair_up = raise_ @ amps @ raise_.T
        return g * (rot.conjugate() * pair_down - rot * pair_up)

    return FockState(_exp_apply(generator, state.amplitudes, 2 * g * (c - 1)))


def phase_shift(state: FockState, phi: float, mode: str = "b") -> FockState:
    """能階 n 的振幅乘上 e^{inφ}"""
    levels = np.arange(state.cutoff)
    factors = np.exp(1j * phi * levels)
    if mode == "a":
        return FockState(factors[:, None] * state.amplitudes)
    if mode == "b":
        return FockState(state.amplitudes * factors[None, :])
    raise ParameterError(f"未知的模式 {mode!r}，僅支援 'a' 或 'b'")


# =======================
# ===== 可觀測量 =====
# =======================

def tail_mass(state: FockState, levels: int = None) -> float:
    """任一模落在最高 levels 個能階的機率"""
    levels = DEFAULTS.fock_tail_levels if levels is None else levels
    probs = state.probabilities()
    levels = min(levels, state.cutoff)
    top_a = probs[-levels:, :].sum()
    top_b = probs[:, -levels:].sum()
    both = probs[-levels:, -levels:].sum()
    return float(top_a + top_b - both)


def photon_distribution(state: FockState, mode: str) -> np.ndarray:
    """單模光子數邊際分佈"""
    probs = state.probabilities()
    if mode == "a":
        return probs.sum(axis=1)
    if mode == "b":
        return probs.sum(axis=0)
    raise ParameterError(f"未知的模式 {mode!r}，僅支援 'a' 或 'b'")


def fidelity(first: FockState, second: FockState) -> float:
    """純態保真度 |⟨ψ|χ⟩|²"""
    if first.cutoff != second.cutoff:
        raise ParameterError(f"截斷維度不同：{first.cutoff} vs {second.cutoff}")
    return float(abs(np.vdot(first.amplitudes, second.amplitudes)) ** 2)


def observables(state: FockState, tail_tolerance: float = None) -> FockObservables:
    """截斷空間中的精確矩陣元期望值；尾端機率超標時拒絕回報"""
    tail_tolerance = DEFAULTS.fock_tail_tolerance if tail_tolerance is None else tail_tolerance
    tail = tail_mass(state)
    if tail > tail_tolerance:
        raise TailMassError(tail, tail_tolerance)

    amps = state.amplitudes
    low = lowering_operator(state.cutoff)
    x_op = (low + low.conj().T) / math.sqrt(2.0)
    x_amps = x_op @ amps
    mean_x = float(np.vdot(amps, x_amps).real)
    var_x = float(np.vdot(x_amps, x_amps).real) - mean_x ** 2

    probs = state.probabilities()
    levels = np.arange(state.cutoff, dtype=float)
    n_a = float(levels @ probs.sum(axis=1))
    n_b = float(levels @ probs.sum(axis=0))
    total = levels[:, None] + levels[None, :]
    mean_n = float(np.sum(total * probs))
    var_n = float(np.sum(total ** 2 * probs)) - mean_n ** 2

    return FockObservables(
        mean_x_a=mean_x,
        var_x_a=var_x,
        n_a=n_a,
        n_b=n_b,
        mean_n_total=mean_n,
        var_n_total=var_n,
        tail_mass=tail,
    )


# =======================
# ===== 干涉儀流程 =====
# =======================

def prepare_input(input_state: InputState, cutoff: int) -> FockState:
    """a0 = 壓縮真空，b0 = 同調態"""
    state = FockState.vacuum(cutoff)
    state = squeeze_single(state, input_state.squeeze_r, input_state.squeeze_eta, "a")
    return displace(state, input_state.beta, "b")


def run_interferometer(config: InterferometerConfig, input_state: InputState,
                       cutoff: int = None) -> FockState:
    """製備 → 第一級 → b 臂相移 φ → 第二級（僅無損耗）"""
    if not config.is_lossless:
        raise ParameterError("Fock 模擬器僅支援無損耗配置，含損耗請改用高斯引擎")
    cutoff = DEFAULTS.fock_default_cutoff if cutoff is None else cutoff
    state = prepare_input(input_state, cutoff)
    state = squeeze_two_mode(state, config.stage1.gain, config.stage1.phase)
    state = phase_shift(state, config.phi, "b")
    state = squeeze_two_mode(state, config.stage2.gain, config.stage2.phase)
    logger.debug("Fock 模擬 cutoff=%d φ=%.6f 範數誤差=%.2e 尾端=%.2e",
                 cutoff, config.phi, state.norm_error, tail_mass(state))
    return state
