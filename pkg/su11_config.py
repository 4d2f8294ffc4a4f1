# -*- coding: utf-8 -*-
"""
SU(1,1) 干涉儀相位靈敏度工具 配置類別
包含數值容忍度設定，以及干涉儀與輸入態的參數化
"""

import math
from dataclasses import dataclass, replace
from typing import Dict

from su11_errors import ParameterError

__version__ = "1.0.0"
TOOL_NAME = "su11-phase-sensitivity"


@dataclass
class Su11ToolConfig:
    # 基本設定
    tool_name: str = TOOL_NAME                 # 工具名稱（寫入 CSV 標頭）
    version: str = __version__                 # 工具版本
    output_dir: str = "./data"                 # 輸出目錄

    # 公式守門設定
    balanced_tolerance: float = 1e-12          # 平衡配置判定容忍度（g1=g2, θ2−θ1=π）
    blind_threshold: float = 1e-12             # 盲點判定：|cos Φ| 或 |sin φ| 低於此值
    slope_threshold: float = 1e-14             # 數值斜率視為零的門檻

    # 數值誤差傳遞設定
    fd_step: float = 1e-5                      # 中央差分步長（rad）
    backend_agreement: float = 1e-6            # 解析式與引擎的相對一致門檻

    # Fock 截斷模擬設定
    fock_series_tolerance: float = 1e-14       # Taylor 級數殘差停止條件
    fock_max_terms: int = 200                  # 每個子步的最大級數項數
    fock_tail_tolerance: float = 1e-10         # 截斷尾端機率上限
    fock_tail_levels: int = 2                  # 尾端機率計算的最高能階數
    fock_max_cutoff: int = 64                  # 每模最大截斷維度
    fock_default_cutoff: int = 30              # 驗證預設截斷維度

    # 最佳 β 搜尋設定
    golden_tolerance: float = 1e-8             # 黃金分割搜尋 |Δβ| 停止條件

    # 報告格式設定
    csv_float_format: str = "%.11e"            # 科學記號，12 位有效數字
    generate_txt_report: bool = False          # 是否額外輸出 TXT 摘要報告

    # 各圖預設檔名
    figure_files: Dict[str, str] = None

    def __post_init__(self):
        if self.figure_files is None:
            self.figure_files = {
                "3a": "figure_3a.csv",
                "3b": "figure_3b.csv",
                "4": "figure_4.csv",
                "5": "figure_5.csv",
            }

    def figure_path(self, figure_id: str) -> str:
        """根據圖號返回預設輸出路徑"""
        return f"{self.output_dir}/{self.figure_files[figure_id]}"


DEFAULTS = Su11ToolConfig()


def wrap_angle(angle: float) -> float:
    """將角度約化到 (−π, π]"""
    remainder = (math.pi - angle) % (2 * math.pi)
    return math.pi - remainder


# =======================
# ==== 干涉儀參數化 ====
# =======================

@dataclass(frozen=True)
class FwmStage:
    """四波混頻（FWM）級：增益 g 與相位 θ，相位不做正規化"""
    gain: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.gain) or self.gain < 0:
            raise ParameterError(f"FWM 增益必須 ≥ 0，收到 g={self.gain}")
        if not math.isfinite(self.phase):
            raise ParameterError(f"FWM 相位必須為有限值，收到 θ={self.phase}")


@dataclass(frozen=True)
class InterferometerConfig:
    stage1: FwmStage = FwmStage()
    stage2: FwmStage = FwmStage(0.0, math.pi)
    phi: float = 0.0                           # 待測相位 φ
    loss_internal: float = 0.0                 # 內部損耗 L1（兩臂相同）
    loss_external: float = 0.0                 # 外部損耗 L2（偵測前）

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ParameterError(f"相位 φ 必須為有限值，收到 {self.phi}")
        for name, value in (("loss_internal", self.loss_internal), ("loss_external", self.loss_external)):
            if not (0.0 <= value < 1.0):
                raise ParameterError(f"{name} 必須落在 [0, 1)，收到 {value}")

    @classmethod
    def balanced(cls, g: float, theta1: float = 0.0, phi: float = 0.0,
                 loss_internal: float = 0.0, loss_external: float = 0.0) -> "InterferometerConfig":
        """平衡配置：g1=g2=g 且 θ2=θ1+π"""
        return cls(
            stage1=FwmStage(g, theta1),
            stage2=FwmStage(g, theta1 + math.pi),
            phi=phi,
            loss_internal=loss_internal,
            loss_external=loss_external,
        )

    def is_balanced(self, tol: float = None) -> bool:
        """檢查是否為平衡配置"""
        tol = DEFAULTS.balanced_tolerance if tol is None else tol
        same_gain = abs(self.stage1.gain - self.stage2.gain) <= tol
        offset = wrap_angle(self.stage2.phase - self.stage1.phase - math.pi)
        return same_gain and abs(offset) <= tol

    @property
    def balanced_gain(self) -> float:
        return self.stage1.gain

    @property
    def is_lossless(self) -> bool:
        return self.loss_internal == 0.0 and self.loss_external == 0.0

    def with_phi(self, phi: float) -> "InterferometerConfig":
        return replace(self, phi=phi)

    def with_losses(self, loss_internal: float, loss_external: float) -> "InterferometerConfig":
        return replace(self, loss_internal=loss_internal, loss_external=loss_external)


@dataclass(frozen=True)
class InputState:
    """輸入態：b0 埠為同調態 |β⟩，a0 埠為壓縮真空 |0,ξ⟩（ξ = r e^{iη}）"""
    beta_mag: float = 0.0                      # |β|
    beta_phase: float = 0.0                    # θ_β
    squeeze_r: float = 0.0                     # r
    squeeze_eta: float = 0.0                   # η

    def __post_init__(self):
        for name, value in (("beta_mag", self.beta_mag), ("squeeze_r", self.squeeze_r)):
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"{name} 必須 ≥ 0，收到 {value}")
        for name, value in (("beta_phase", self.beta_phase), ("squeeze_eta", self.squeeze_eta)):
            if not math.isfinite(value):
                raise ParameterError(f"{name} 必須為有限值，收到 {value}")

    @property
    def beta(self) -> complex:
        return self.beta_mag * complex(math.cos(self.beta_phase), math.sin(self.beta_phase))

    @property
    def mean_photons(self) -> float:
        """輸入總光子數 |β|² + sinh²r"""
        return self.beta_mag ** 2 + math.sinh(self.squeeze_r) ** 2


def input_state_for_optimum(beta_mag: float, squeeze_r: float, theta1: float = 0.0) -> InputState:
    """建立在 φ=0 時使 Φ=0、Θ=0 的輸入態（θ_β = θ1 + π/2, η = 0）"""
    return InputState(beta_mag=beta_mag, beta_phase=theta1 + math.pi / 2,
                      squeeze_r=squeeze_r, squeeze_eta=0.0)
