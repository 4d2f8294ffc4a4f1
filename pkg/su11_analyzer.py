# -*- coding: utf-8 -*-
"""
SU(1,1) 干涉儀相位靈敏度分析器
參數掃描、數值誤差傳遞、最佳 β 搜尋、HL 比值，以及各圖資料集的產生與輸出
"""

import logging
import math
import os
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import fock_oracle
import gaussian_engine
from closed_form_sensitivity import (
    Detection,
    SensitivityReport,
    exact_optimal_beta,
    heisenberg_limit,
    homodyne_sensitivity,
    intensity_sensitivity,
    lossy_homodyne_sensitivity,
    optimal_beta,
    optimal_point_sensitivity,
    optimal_ratio_to_hl,
    reference_limits,
    sql_limit,
)
from su11_config import (
    DEFAULTS,
    FwmStage,
    InputState,
    InterferometerConfig,
    Su11ToolConfig,
)
from su11_errors import (
    BalancedConfigurationError,
    BlindPhasePointError,
    NoBracketError,
    NoPhotonsError,
    ParameterError,
    SensitivityError,
    ZeroSignalSlopeError,
)

logger = logging.getLogger(__name__)

SWEEP_VARIABLES = ("phi", "g", "r", "beta", "L1", "L2")
SWEEP_BACKENDS = ("closed_form", "gaussian_engine", "both")
OBSERVABLES = ("homodyne", "intensity")
SIMULATORS = ("gaussian", "fock")

INV_PHI = (math.sqrt(5) - 1) / 2               # 1/φ
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2        # 1/φ²


def relative_deviation(a: float, b: float, floor: float = 1e-300) -> float:
    """|a − b| / max(|a|, |b|, floor)；暗埠上趨近零的平均值請用 floor=1"""
    return abs(a - b) / max(abs(a), abs(b), floor)


def flag_for(exc: Exception) -> str:
    """把靈敏度錯誤轉為 CSV flags 欄位的名稱"""
    if isinstance(exc, ZeroSignalSlopeError):
        return "zero_slope"
    if isinstance(exc, BlindPhasePointError):
        return "blind_point"
    if isinstance(exc, NoPhotonsError):
        return "no_photons"
    if isinstance(exc, BalancedConfigurationError):
        return "unbalanced"
    return "invalid_variance"


# =======================
# ==== 數值誤差傳遞 ====
# =======================

def richardson_derivative(func: Callable[[float], float], x: float, step: float) -> float:
    """中央差分 D(h) 加一次 Richardson 外插：(4·D(h/2) − D(h)) / 3"""
    def central(h):
        return (func(x + h) - func(x - h)) / (2.0 * h)

    return (4.0 * central(step / 2.0) - central(step)) / 3.0


def _observable_at(config: InterferometerConfig, input_state: InputState, observable: str,
                   simulator: str, cutoff: Optional[int]) -> Tuple[float, float]:
    """返回 (平均值, 方差)"""
    if simulator == "gaussian":
        state = gaussian_engine.run_interferometer(config, input_state)
        if observable == "homodyne":
            return gaussian_engine.quadrature_stats(state, "a", 0.0)
        _, _, n_total, var_n = gaussian_engine.photon_stats(state)
        return n_total, var_n

    state = fock_oracle.run_interferometer(config, input_state, cutoff)
    obs = fock_oracle.observables(state)
    if observable == "homodyne":
        return obs.mean_x_a, obs.var_x_a
    return obs.mean_n_total, obs.var_n_total


def interior_photon_number(config: InterferometerConfig, input_state: InputState) -> float:
    """第一級之後的總光子數 N_Tot（一般配置）"""
    _, _, n_total, _ = gaussian_engine.photon_stats(gaussian_engine.interior_state(config, input_state))
    return n_total


def numeric_sensitivity(config: InterferometerConfig, input_state: InputState,
                        observable: str = "homodyne", simulator: str = "gaussian",
                        cutoff: Optional[int] = None, step: Optional[float] = None) -> SensitivityReport:
    """
    (Δφ)² = ⟨(ΔO)²⟩ / |∂⟨O⟩/∂φ|²，斜率以數值微分取得，方差取自模擬器

    observable: homodyne（X̂ of a2）或 intensity（N̂ = n̂_a2 + n̂_b2）
    simulator: gaussian（任意配置含損耗）或 fock（無損耗、小參數）
    """
    if observable not in OBSERVABLES:
        raise ParameterError(f"未知的觀測量 {observable!r}，可用：{', '.join(OBSERVABLES)}")
    if simulator not in SIMULATORS:
        raise ParameterError(f"未知的模擬器 {simulator!r}，可用：{', '.join(SIMULATORS)}")
    step = DEFAULTS.fd_step if step is None else step

    no_gain = config.stage1.gain == 0.0 and config.stage2.gain == 0.0
    if no_gain or (observable == "homodyne" and input_state.beta_mag == 0.0):
        raise ZeroSignalSlopeError(f"g1={config.stage1.gain}, g2={config.stage2.gain}, |β|={input_state.beta_mag}")

    def mean_at(phi):
        return _observable_at(config.with_phi(phi), input_state, observable, simulator, cutoff)[0]

    _, variance = _observable_at(config, input_state, observable, simulator, cutoff)
    slope = abs(richardson_derivative(mean_at, config.phi, step))
    if slope < DEFAULTS.slope_threshold:
        raise BlindPhasePointError(f"數值斜率 {slope:.2e}，φ={config.phi:.6f}")

    n_total = interior_photon_number(config, input_state)
    if n_total <= 0.0:
        raise NoPhotonsError()
    return SensitivityReport(
        delta_phi=math.sqrt(variance) / slope,
        noise=variance,
        slope=slope,
        backend=Detection(observable),
        hl=1.0 / n_total,
        sql=sql_limit(n_total),
        n_total=n_total,
        method="gaussian_engine" if simulator == "gaussian" else "fock_oracle",
    )


def closed_form_homodyne(config: InterferometerConfig, input_state: InputState) -> SensitivityReport:
    """無損耗用基本式，含損耗用損耗修正式"""
    if config.is_lossless:
        return homodyne_sensitivity(config, input_state)
    return lossy_homodyne_sensitivity(config, input_state)


# =======================
# ====== 參數掃描 ======
# =======================

@dataclass(frozen=True)
class SweepSpec:
    variable: str                              # phi / g / r / beta / L1 / L2
    start: float
    stop: float
    points: int
    config: InterferometerConfig = field(default_factory=InterferometerConfig)
    input_state: InputState = field(default_factory=InputState)
    backend: str = "closed_form"               # closed_form / gaussian_engine / both
    include_intensity: bool = False            # 是否同時計算強度偵測

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ParameterError(f"未知的掃描變數 {self.variable!r}，可用：{', '.join(SWEEP_VARIABLES)}")
        if self.backend not in SWEEP_BACKENDS:
            raise ParameterError(f"未知的後端 {self.backend!r}，可用：{', '.join(SWEEP_BACKENDS)}")
        if not (self.start < self.stop):
            raise ParameterError(f"掃描區間需 start < stop，收到 [{self.start}, {self.stop}]")
        if self.points < 2:
            raise ParameterError(f"掃描點數至少為 2，收到 {self.points}")
        # g 掃描把兩級增益設為同一值，只允許增益相等的配置
        if self.variable == "g" and self.config.stage1.gain != self.config.stage2.gain:
            raise ParameterError(f"g 掃描需要 g1 = g2，收到 g1={self.config.stage1.gain}, "
                                 f"g2={self.config.stage2.gain}；請改掃其他變數")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def point(self, value: float) -> Tuple[InterferometerConfig, InputState]:
        """把掃描值代入固定參數"""
        config, state = self.config, self.input_state
        if self.variable == "phi":
            config = config.with_phi(value)
        elif self.variable == "g":
            config = replace(config, stage1=FwmStage(value, config.stage1.phase),
                             stage2=FwmStage(value, config.stage2.phase))
        elif self.variable == "r":
            state = replace(state, squeeze_r=value)
        elif self.variable == "beta":
            state = replace(state, beta_mag=value)
        elif self.variable == "L1":
            config = replace(config, loss_internal=value)
        else:
            config = replace(config, loss_external=value)
        return config, state


@dataclass
class SweepRow:
    value: float
    delta_phi_homodyne: Optional[float] = None
    delta_phi_intensity: Optional[float] = None
    delta_phi_engine: Optional[float] = None
    delta_phi_hl: Optional[float] = None
    delta_phi_sql: Optional[float] = None
    ratio_to_hl: Optional[float] = None
    noise: Optional[float] = None
    slope: Optional[float] = None
    flags: List[str] = field(default_factory=list)

    def add_flag(self, flag: str) -> None:
        if flag not in self.flags:
            self.flags.append(flag)


def reference_for(config: InterferometerConfig, input_state: InputState) -> Tuple[float, float, float]:
    if config.is_balanced():
        return reference_limits(config.balanced_gain, input_state.squeeze_r, input_state.beta_mag)
    n_total = interior_photon_number(config, input_state)
    if n_total <= 0.0:
        raise NoPhotonsError()
    return n_total, 1.0 / n_total, sql_limit(n_total)


def _intensity_for(config: InterferometerConfig, input_state: InputState, backend: str) -> float:
    if backend != "gaussian_engine" and config.is_lossless and config.is_balanced():
        return intensity_sensitivity(config, input_state).delta_phi
    return numeric_sensitivity(config, input_state, observable="intensity").delta_phi


def evaluate_row(spec: SweepSpec, value: float) -> SweepRow:
    config, input_state = spec.point(value)
    row = SweepRow(value=float(value))

    try:
        _, row.delta_phi_hl, row.delta_phi_sql = reference_for(config, input_state)
    except SensitivityError as exc:
        row.add_flag(flag_for(exc))
        return row

    primary = None
    if spec.backend in ("closed_form", "both"):
        try:
            primary = closed_form_homodyne(config, input_state)
        except (SensitivityError, BalancedConfigurationError) as exc:
            row.add_flag(flag_for(exc))
    if spec.backend in ("gaussian_engine", "both"):
        try:
            engine = numeric_sensitivity(config, input_state)
            row.delta_phi_engine = engine.delta_phi
            if primary is None and spec.backend == "gaussian_engine":
                primary = engine
        except SensitivityError as exc:
            row.add_flag(flag_for(exc))

    if primary is not None:
        row.delta_phi_homodyne = primary.delta_phi
        row.ratio_to_hl = primary.delta_phi / row.delta_phi_hl
        row.noise = primary.noise
        row.slope = primary.slope
        if spec.backend == "both" and row.delta_phi_engine is not None:
            deviation = relative_deviation(primary.delta_phi, row.delta_phi_engine)
            if deviation > DEFAULTS.backend_agreement:
                logger.warning("後端不一致 %s=%.6g：相對偏差 %.3e", spec.variable, value, deviation)
                row.add_flag("backend_mismatch")

    if spec.include_intensity:
        try:
            row.delta_phi_intensity = _intensity_for(config, input_state, spec.backend)
        except (SensitivityError, BalancedConfigurationError) as exc:
            row.add_flag(f"intensity_{flag_for(exc)}")
    return row


def sweep(spec: SweepSpec) -> List[SweepRow]:
    """依序計算每個等距掃描點；盲點只標記不刪除"""
    logger.info("掃描 %s ∈ [%g, %g]，%d 點，後端 %s", spec.variable, spec.start, spec.stop,
                spec.points, spec.backend)
    rows = [evaluate_row(spec, value) for value in spec.values()]
    flagged = sum(1 for row in rows if row.flags)
    if flagged:
        logger.info("共 %d 個掃描點帶有 flags", flagged)
    return rows


def rows_to_frame(rows: Sequence[SweepRow], variable: str) -> pd.DataFrame:
    records = [{
        variable: row.value,
        "dphi_homodyne": row.delta_phi_homodyne,
        "dphi_intensity": row.delta_phi_intensity,
        "dphi_engine": row.delta_phi_engine,
        "dphi_hl": row.delta_phi_hl,
        "dphi_sql": row.delta_phi_sql,
        "ratio_to_hl": row.ratio_to_hl,
        "noise": row.noise,
        "slope": row.slope,
        "flags": ";".join(row.flags),
    } for row in rows]
    return pd.DataFrame(records).astype({col: float for col in (
        "dphi_homodyne", "dphi_intensity", "dphi_engine", "dphi_hl", "dphi_sql",
        "ratio_to_hl", "noise", "slope")})


# =======================
# ===== 最佳 β 搜尋 =====
# =======================

def golden_section_minimize(func: Callable[[float], float], lower: float, upper: float,
                            tol: float) -> float:
    """黃金分割搜尋，返回最終區間中點"""
    a, b = min(lower, upper), max(lower, upper)
    h = b - a
    if h <= tol:
        return 0.5 * (a + b)

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = func(c), func(d)
    for _ in range(steps - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = func(d)
    return 0.5 * (a + d) if yc < yd else 0.5 * (c + b)


def find_optimal_beta(g: float, r: float,
                      search_interval: Optional[Tuple[float, float]] = None) -> Tuple[float, float]:
    """
    在 |β| 上最小化 Δφ′/Δφ_HL

    預設區間 (1e−3, max(100, 100·β_近似))；極小值落在區間端點時視為未包夾
    """
    approx = optimal_beta(g, r)
    lower, upper = search_interval if search_interval is not None else (1e-3, max(100.0, 100.0 * approx))
    if not (0.0 < lower < upper):
        raise ParameterError(f"搜尋區間需滿足 0 < lower < upper，收到 ({lower}, {upper})")

    def ratio(beta):
        return optimal_ratio_to_hl(g, r, beta)

    beta_star = golden_section_minimize(ratio, lower, upper, DEFAULTS.golden_tolerance)
    ratio_star = ratio(beta_star)
    if ratio(lower) <= ratio_star or ratio(upper) <= ratio_star:
        raise NoBracketError(f"β 搜尋區間 ({lower:g}, {upper:g}) 未包夾極小值，β*≈{beta_star:.6g}")
    logger.debug("最佳 β：g=%g r=%g β*=%.10g 比值=%.6f（近似式 %.6g）", g, r, beta_star, ratio_star, approx)
    return beta_star, ratio_star


@dataclass(frozen=True)
class NonMonotonicityReport:
    beta_mag: float
    g: float
    r_values: Tuple[float, ...]
    ratios: Tuple[float, ...]

    @property
    def is_monotonic(self) -> bool:
        diffs = np.diff(self.ratios)
        return bool(np.all(diffs <= 0) or np.all(diffs >= 0))

    @property
    def best_r(self) -> float:
        return self.r_values[int(np.argmin(self.ratios))]


def nonmonotonicity_report(beta_mag: float, g: float, r_values: Sequence[float]) -> NonMonotonicityReport:
    """最佳點 φ=0 下各 r 的 Δφ′/Δφ_HL"""
    r_values = tuple(float(r) for r in r_values)
    ratios = tuple(optimal_ratio_to_hl(g, r, beta_mag) for r in r_values)
    return NonMonotonicityReport(beta_mag=beta_mag, g=g, r_values=r_values, ratios=ratios)


def intensity_deviation_report(config: InterferometerConfig, input_state: InputState,
                               phis: Sequence[float], tolerance: float = 1e-5) -> pd.DataFrame:
    """
    強度偵測解析式與高斯引擎的逐點比較
    僅供參考：偏差只回報，不修正解析式
    """
    records = []
    for phi in phis:
        point = config.with_phi(float(phi))
        record = {"phi": float(phi), "dphi_closed_form": np.nan, "dphi_engine": np.nan,
                  "relative_deviation": np.nan, "within_tolerance": False, "flags": ""}
        try:
            record["dphi_closed_form"] = intensity_sensitivity(point, input_state).delta_phi
            record["dphi_engine"] = numeric_sensitivity(point, input_state, observable="intensity").delta_phi
        except SensitivityError as exc:
            record["flags"] = flag_for(exc)
        if not (np.isnan(record["dphi_closed_form"]) or np.isnan(record["dphi_engine"])):
            deviation = relative_deviation(record["dphi_closed_form"], record["dphi_engine"])
            record["relative_deviation"] = deviation
            record["within_tolerance"] = deviation <= tolerance
        records.append(record)
    report = pd.DataFrame(records)
    worst = report["relative_deviation"].max()
    if not np.isnan(worst) and worst > tolerance:
        logger.info("強度偵測解析式與引擎最大相對偏差 %.3e（門檻 %.1e）", worst, tolerance)
    return report


# =======================
# ===== 各圖資料集 =====
# =======================

def _label(value: float) -> str:
    return f"{value:g}"


def figure_3a(beta_mag: float = 20.0, r_values: Sequence[float] = (1, 2, 3, 4, 5, 6),
              g_start: float = 0.05, g_stop: float = 3.0, points: int = 60) -> Tuple[pd.DataFrame, Dict]:
    """最佳點 Δφ′ 對 g，多個壓縮強度 r，固定 |β|"""
    grid = np.linspace(g_start, g_stop, points)
    columns = {"g": grid}
    for r in r_values:
        dphi = np.array([optimal_point_sensitivity(g, r, beta_mag) for g in grid])
        hl = np.array([heisenberg_limit(g, r, beta_mag) for g in grid])
        columns[f"dphi_r{_label(r)}"] = dphi
        columns[f"hl_r{_label(r)}"] = hl
        columns[f"sql_r{_label(r)}"] = np.sqrt(hl)
        columns[f"ratio_r{_label(r)}"] = dphi / hl
    params = {"figure": "3a", "beta": beta_mag, "phi": 0.0, "r_values": " ".join(_label(r) for r in r_values),
              "g_start": g_start, "g_stop": g_stop, "points": points}
    return pd.DataFrame(columns), params


def figure_3b(squeeze_r: float = 3.0, beta_values: Sequence[float] = (1, 5, 10, 20, 40),
              g_start: float = 0.05, g_stop: float = 3.0, points: int = 60) -> Tuple[pd.DataFrame, Dict]:
    """最佳點 Δφ′ 對 g，多個同調態強度 |β|，固定 r"""
    grid = np.linspace(g_start, g_stop, points)
    columns = {"g": grid}
    for beta in beta_values:
        dphi = np.array([optimal_point_sensitivity(g, squeeze_r, beta) for g in grid])
        hl = np.array([heisenberg_limit(g, squeeze_r, beta) for g in grid])
        columns[f"dphi_beta{_label(beta)}"] = dphi
        columns[f"hl_beta{_label(beta)}"] = hl
        columns[f"sql_beta{_label(beta)}"] = np.sqrt(hl)
        columns[f"ratio_beta{_label(beta)}"] = dphi / hl
    params = {"figure": "3b", "r": squeeze_r, "phi": 0.0,
              "beta_values": " ".join(_label(b) for b in beta_values),
              "g_start": g_start, "g_stop": g_stop, "points": points}
    return pd.DataFrame(columns), params


def _homodyne_or_flag(config: InterferometerConfig, input_state: InputState,
                      flags: List[str], tag: str) -> float:
    try:
        return closed_form_homodyne(config, input_state).delta_phi
    except SensitivityError as exc:
        flag = f"{tag}_{flag_for(exc)}"
        if flag not in flags:
            flags.append(flag)
        return np.nan


def figure_4(beta_mag: float = 10.0, beta_phase: float = math.pi / 2, squeeze_r: float = 2.0,
             g: float = 0.5, loss: float = 0.2, phi_start: float = -0.6, phi_stop: float = 0.6,
             points: int = 101) -> Tuple[pd.DataFrame, Dict]:
    """零差 Δφ 對 φ：無損耗、僅內部損耗 L1、僅外部損耗 L2"""
    input_state = InputState(beta_mag, beta_phase, squeeze_r, 0.0)
    base = InterferometerConfig.balanced(g)
    records = []
    for phi in np.linspace(phi_start, phi_stop, points):
        flags: List[str] = []
        point = base.with_phi(float(phi))
        records.append({
            "phi": float(phi),
            "dphi_lossless": _homodyne_or_flag(point, input_state, flags, "lossless"),
            "dphi_L1only": _homodyne_or_flag(point.with_losses(loss, 0.0), input_state, flags, "L1only"),
            "dphi_L2only": _homodyne_or_flag(point.with_losses(0.0, loss), input_state, flags, "L2only"),
            "flags": ";".join(flags),
        })
    params = {"figure": "4", "beta": beta_mag, "theta_beta": beta_phase, "r": squeeze_r, "eta": 0.0,
              "g": g, "theta1": 0.0, "loss": loss, "phi_start": phi_start, "phi_stop": phi_stop,
              "points": points}
    return pd.DataFrame(records), params


def figure_5(g: float = 1.0, squeeze_r: float = 2.0, beta_mag: float = 10.0, eta: float = 0.0,
             beta_phase: float = math.pi / 2, phi_start: float = -1.0, phi_stop: float = 1.0,
             points: int = 101) -> Tuple[pd.DataFrame, Dict]:
    """零差偵測與強度偵測的 Δφ 對 φ"""
    input_state = InputState(beta_mag, beta_phase, squeeze_r, eta)
    base = InterferometerConfig.balanced(g)
    records = []
    for phi in np.linspace(phi_start, phi_stop, points):
        flags: List[str] = []
        point = base.with_phi(float(phi))
        homodyne = _homodyne_or_flag(point, input_state, flags, "homodyne")
        try:
            intensity = intensity_sensitivity(point, input_state).delta_phi
        except SensitivityError as exc:
            intensity = np.nan
            flags.append(f"intensity_{flag_for(exc)}")
        records.append({"phi": float(phi), "dphi_homodyne": homodyne,
                        "dphi_intensity": intensity, "flags": ";".join(flags)})
    params = {"figure": "5", "g": g, "r": squeeze_r, "beta": beta_mag, "eta": eta,
              "theta_beta": beta_phase, "theta1": 0.0, "phi_start": phi_start, "phi_stop": phi_stop,
              "points": points}
    return pd.DataFrame(records), params


FIGURE_BUILDERS: Dict[str, Callable[..., Tuple[pd.DataFrame, Dict]]] = {
    "3a": figure_3a,
    "3b": figure_3b,
    "4": figure_4,
    "5": figure_5,
}


# =======================
# ===== 報表輸出 =====
# =======================

def _format_param(value) -> str:
    if isinstance(value, float):
        return DEFAULTS.csv_float_format % value
    return str(value)


def write_csv(frame: pd.DataFrame, path: str, params: Dict,
              tool_config: Su11ToolConfig = DEFAULTS) -> str:
    """'#' 開頭的參數標頭 + 欄位列 + 資料列；固定浮點格式與 LF 換行"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# tool = {tool_config.tool_name}\n")
        f.write(f"# version = {tool_config.version}\n")
        for key, value in params.items():
            f.write(f"# {key} = {_format_param(value)}\n")
        frame.to_csv(f, index=False, float_format=tool_config.csv_float_format,
                     lineterminator="\n", na_rep="")
    return path


class Su11Analyzer:
    """各圖資料集與報表的產生器"""

    def __init__(self, config: Su11ToolConfig = DEFAULTS):
        self.config = config

    def build_figure(self, figure_id: str, **overrides) -> Tuple[pd.DataFrame, Dict]:
        if figure_id not in FIGURE_BUILDERS:
            raise ParameterError(f"未知的圖號 {figure_id!r}，可用：{', '.join(FIGURE_BUILDERS)}")
        logger.info("產生圖 %s 的資料集", figure_id)
        return FIGURE_BUILDERS[figure_id](**overrides)

    def generate_reports(self, frame: pd.DataFrame, params: Dict, out_path: str) -> List[str]:
        """輸出 CSV，必要時另存 TXT 摘要"""
        written = [write_csv(frame, out_path, params, self.config)]
        if self.config.generate_txt_report:
            out_txt = os.path.splitext(out_path)[0] + ".txt"
            with open(out_txt, "w", encoding="utf-8") as f:
                f.write(self.generate_txt_report(frame, params))
            written.append(out_txt)
        return written

    def generate_txt_report(self, frame: pd.DataFrame, params: Dict) -> str:
        """生成TXT格式的摘要報告"""
        report = []
        report.append("=" * 80)
        title = f"圖 {params['figure']} 相位靈敏度資料摘要" if "figure" in params else "相位靈敏度掃描摘要"
        report.append(title)
        report.append("=" * 80)
        report.append("")

        report.append("📊 基本資訊")
        report.append("-" * 40)
        report.append(f"工具: {self.config.tool_name} {self.config.version}")
        report.append(f"資料列數: {len(frame):,}")
        report.append(f"報告生成時間: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        report.append("")

        report.append("⚙️ 參數設定")
        report.append("-" * 40)
        for key, value in params.items():
            report.append(f"{key}: {_format_param(value)}")
        report.append("")

        report.append("📈 各欄位極值")
        report.append("-" * 40)
        axis = frame.columns[0]
        for column in frame.columns[1:]:
            if column == "flags" or not pd.api.types.is_numeric_dtype(frame[column]):
                continue
            values = frame[column]
            if values.notna().sum() == 0:
                report.append(f"{column}: 全部為空值")
                continue
            idx = values.idxmin()
            report.append(f"{column}: 最小 {values.min():.6e}（{axis}={frame.loc[idx, axis]:.6g}），"
                          f"最大 {values.max():.6e}")
        report.append("")

        if "flags" in frame.columns:
            flagged = frame[frame["flags"] != ""]
            report.append("⚠️ 標記的資料點")
            report.append("-" * 40)
            if flagged.empty:
                report.append("無")
            else:
                for _, row in flagged.iterrows():
                    report.append(f"{axis}={row[axis]:.6g}: {row['flags']}")
            report.append("")

        report.append("=" * 80)
        return "\n".join(report) + "\n"


def run_figure(figure_id: str, out_path: Optional[str] = None, tool_config: Su11ToolConfig = DEFAULTS,
               **overrides) -> Tuple[pd.DataFrame, List[str]]:
    """便利函數：產生單一圖的資料集並寫檔"""
    analyzer = Su11Analyzer(tool_config)
    frame, params = analyzer.build_figure(figure_id, **overrides)
    out_path = tool_config.figure_path(figure_id) if out_path is None else out_path
    return frame, analyzer.generate_reports(frame, params, out_path)


def optimum_summary(g: float, r: float,
                    search_interval: Optional[Tuple[float, float]] = None) -> Dict[str, float]:
    """最佳 β 條件：近似式、精確極小點與數值搜尋結果"""
    beta_star, ratio_star = find_optimal_beta(g, r, search_interval)
    return {
        "eq12_beta": optimal_beta(g, r),
        "beta_star": beta_star,
        "exact_beta": exact_optimal_beta(g, r),
        "ratio_at_min": ratio_star,
        "dphi_at_min": optimal_point_sensitivity(g, r, beta_star),
    }

