# -*- coding: utf-8 -*-
"""
錯誤類別
全部繼承自 ValueError，呼叫端可以沿用 except ValueError 的寫法
"""


class Su11Error(ValueError):
    """所有工具錯誤的基底類別"""


class ParameterError(Su11Error):
    """參數超出定義域"""


class BalancedConfigurationError(Su11Error):
    def __init__(self, detail: str = ""):
        message = "formula requires balanced configuration：解析式僅適用 g1=g2、θ2−θ1=π，一般配置請改用高斯引擎"
        if detail:
            message = f"{message}（{detail}）"
        super().__init__(message)


class SensitivityError(Su11Error):
    """靈敏度無法定義"""


class ZeroSignalSlopeError(SensitivityError):
    def __init__(self, detail: str = ""):
        message = "zero signal slope：干涉訊號對 φ 的斜率為零（g=0 或 |β|=0）"
        if detail:
            message = f"{message}（{detail}）"
        super().__init__(message)


class BlindPhasePointError(SensitivityError):
    def __init__(self, detail: str = ""):
        message = "blind phase point：此相位點斜率為零，靈敏度發散"
        if detail:
            message = f"{message}（{detail}）"
        super().__init__(message)


class NoPhotonsError(SensitivityError):
    def __init__(self, detail: str = ""):
        message = "no photons：干涉儀內部總光子數為零，HL/SQL 無定義"
        if detail:
            message = f"{message}（{detail}）"
        super().__init__(message)


class FockTruncationError(Su11Error):
    """Fock 截斷不足"""


class CutoffError(FockTruncationError):
    def __init__(self, required: int, cutoff: int, what: str):
        self.required = required
        self.cutoff = cutoff
        super().__init__(
            f"cutoff too small：{what} 需要截斷維度至少 {required}，目前為 {cutoff}"
        )


class TailMassError(FockTruncationError):
    def __init__(self, tail_mass: float, tolerance: float):
        self.tail_mass = tail_mass
        self.tolerance = tolerance
        super().__init__(
            f"truncation tail too large：尾端機率 {tail_mass:.3e} 超過容忍度 {tolerance:.1e}，請加大截斷維度"
        )


class ConvergenceError(Su11Error):
    """級數在迭代預算內未收斂"""


class NoBracketError(Su11Error):
    """搜尋區間未包夾極小值"""
