# -*- coding: utf-8 -*-
"""
SU(1,1) 干涉儀相位靈敏度 命令列介面

指令：point / sweep / figure / optimum / validate
結束碼：0 成功，1 參數或用法錯誤，2 驗證失敗
參數優先順序：命令列 > --config 檔案（key = value）> 內建預設值
"""

import argparse
import logging
import math
import sys
from typing import Callable, Dict, List, Optional

from closed_form_sensitivity import SensitivityReport, intensity_sensitivity
from oracle_validation import format_report, run_validation
from su11_analyzer import (
    FIGURE_BUILDERS,
    SWEEP_BACKENDS,
    SWEEP_VARIABLES,
    Su11Analyzer,
    SweepSpec,
    closed_form_homodyne,
    flag_for,
    numeric_sensitivity,
    optimum_summary,
    reference_for,
    rows_to_frame,
    sweep,
    write_csv,
)
from su11_config import DEFAULTS, FwmStage, InputState, InterferometerConfig, Su11ToolConfig, __version__
from su11_errors import (
    BalancedConfigurationError,
    NoPhotonsError,
    ParameterError,
    SensitivityError,
    Su11Error,
    ZeroSignalSlopeError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2

ANGLE_KEYS = ("theta1", "theta2", "phi", "theta_beta", "eta", "phi_start", "phi_stop")

# 單點與掃描共用的內建預設值（Φ=0、Θ=0 的最佳操作點）
# g 不放在這裡：未指定 --g 時 --g1/--g2 才能單獨使用
DEFAULT_GAIN = 1.0
POINT_DEFAULTS = {
    "theta1": 0.0,
    "phi": 0.0,
    "beta": 10.0,
    "r": 2.0,
    "eta": 0.0,
    "L1": 0.0,
    "L2": 0.0,
}

# figure 指令的旗標 → 各圖建構函數的參數名
FIGURE_FLAGS = {
    "3a": {"beta": "beta_mag", "r_values": "r_values", "g_start": "g_start", "g_stop": "g_stop",
           "points": "points"},
    "3b": {"r": "squeeze_r", "beta_values": "beta_values", "g_start": "g_start", "g_stop": "g_stop",
           "points": "points"},
    "4": {"beta": "beta_mag", "theta_beta": "beta_phase", "r": "squeeze_r", "g": "g", "loss": "loss",
          "phi_start": "phi_start", "phi_stop": "phi_stop", "points": "points"},
    "5": {"g": "g", "r": "squeeze_r", "beta": "beta_mag", "eta": "eta", "theta_beta": "beta_phase",
          "phi_start": "phi_start", "phi_stop": "phi_stop", "points": "points"},
}


class UsageError(Exception):
    """命令列用法錯誤（結束碼 1）"""


class Su11ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"無法解析數列：{text!r}")


def _bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"無法解析布林值：{text!r}")


CONVERTERS: Dict[str, Callable] = {
    "g": float, "g1": float, "g2": float, "theta1": float, "theta2": float, "phi": float,
    "beta": float, "theta_beta": float, "r": float, "eta": float, "L1": float, "L2": float,
    "balanced": _bool, "deg": _bool, "intensity": _bool, "report": _bool,
    "variable": str, "start": float, "stop": float, "points": int, "backend": str, "out": str,
    "id": str, "loss": float, "phi_start": float, "phi_stop": float, "g_start": float,
    "g_stop": float, "r_values": _float_list, "beta_values": _float_list,
    "cutoff": int, "tolerance": float, "lower": float, "upper": float,
}


# =======================
# ===== 設定檔讀取 =====
# =======================

def load_config_file(path: str) -> Dict[str, object]:
    """讀取 key = value 設定檔；鍵名同旗標名稱，可帶或不帶前導 '-'"""
    values: Dict[str, object] = {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise ParameterError(f"無法讀取設定檔 {path}: {e}")

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"設定檔 {path} 第 {lineno} 行缺少 '='：{raw.strip()}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in CONVERTERS:
            raise ParameterError(f"設定檔 {path} 第 {lineno} 行有未知的鍵 {key!r}")
        try:
            values[key] = CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as e:
            raise ParameterError(f"設定檔 {path} 第 {lineno} 行的值無效：{e}")
    return values


def resolve(args: argparse.Namespace, keys, defaults: Optional[Dict] = None) -> Dict[str, object]:
    """命令列 > 設定檔 > 預設值；--deg 時角度旗標由度轉為弧度"""
    defaults = defaults or {}
    from_file = load_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None:
            value = from_file.get(key, defaults.get(key))
        resolved[key] = value

    deg = args.deg if args.deg is not None else from_file.get("deg", False)
    if deg:
        for key in ANGLE_KEYS:
            if resolved.get(key) is not None:
                resolved[key] = math.radians(resolved[key])
        if resolved.get("variable") == "phi":
            for key in ("start", "stop"):
                if resolved.get(key) is not None:
                    resolved[key] = math.radians(resolved[key])
    return resolved


# =======================
# ===== 參數組裝 =====
# =======================

PARAM_KEYS = ("g", "g1", "g2", "theta1", "theta2", "phi", "beta", "theta_beta", "r", "eta",
              "L1", "L2", "balanced")


def build_physics(params: Dict[str, object]):
    """由解析後參數建立 (InterferometerConfig, InputState)，並檢查互斥旗標"""
    if params.get("balanced"):
        clash = [name for name in ("g1", "g2", "theta2") if params.get(name) is not None]
        if clash:
            raise UsageError(f"--balanced 不可與 {', '.join('--' + c for c in clash)} 同時使用")
    if params.get("g") is not None and (params.get("g1") is not None or params.get("g2") is not None):
        raise UsageError("--g 不可與 --g1/--g2 同時使用")

    g = params["g"] if params.get("g") is not None else DEFAULT_GAIN
    g1 = params["g1"] if params.get("g1") is not None else g
    g2 = params["g2"] if params.get("g2") is not None else g
    theta1 = params["theta1"]
    theta2 = params["theta2"] if params.get("theta2") is not None else theta1 + math.pi
    theta_beta = params["theta_beta"] if params.get("theta_beta") is not None else theta1 + math.pi / 2

    config = InterferometerConfig(
        stage1=FwmStage(g1, theta1),
        stage2=FwmStage(g2, theta2),
        phi=params["phi"],
        loss_internal=params["L1"],
        loss_external=params["L2"],
    )
    input_state = InputState(params["beta"], theta_beta, params["r"], params["eta"])
    return config, input_state


def physics_params(config: InterferometerConfig, input_state: InputState) -> Dict[str, float]:
    return {
        "g1": config.stage1.gain, "theta1": config.stage1.phase,
        "g2": config.stage2.gain, "theta2": config.stage2.phase,
        "phi": config.phi, "beta": input_state.beta_mag, "theta_beta": input_state.beta_phase,
        "r": input_state.squeeze_r, "eta": input_state.squeeze_eta,
        "L1": config.loss_internal, "L2": config.loss_external,
    }


def _emit(key: str, value) -> None:
    if isinstance(value, float):
        print(f"{key}={DEFAULTS.csv_float_format % value}")
    else:
        print(f"{key}={value}")


# =======================
# ======== 指令 ========
# =======================

def _homodyne_report(config: InterferometerConfig, input_state: InputState) -> SensitivityReport:
    try:
        return closed_form_homodyne(config, input_state)
    except BalancedConfigurationError:
        logger.info("非平衡配置，改用高斯引擎數值誤差傳遞")
        return numeric_sensitivity(config, input_state)


def cmd_point(args: argparse.Namespace) -> int:
    params = resolve(args, PARAM_KEYS, POINT_DEFAULTS)
    config, input_state = build_physics(params)

    report: Optional[SensitivityReport] = None
    try:
        report = _homodyne_report(config, input_state)
        _emit("backend", report.method)
        _emit("delta_phi_homodyne", report.delta_phi)
    except (ZeroSignalSlopeError, NoPhotonsError):
        raise
    except SensitivityError as exc:
        _emit("backend", "closed_form" if config.is_balanced() else "gaussian_engine")
        _emit("delta_phi_homodyne", flag_for(exc))

    try:
        if config.is_lossless and config.is_balanced():
            intensity = intensity_sensitivity(config, input_state).delta_phi
        else:
            intensity = numeric_sensitivity(config, input_state, observable="intensity").delta_phi
        _emit("delta_phi_intensity", intensity)
    except SensitivityError as exc:
        _emit("delta_phi_intensity", flag_for(exc))

    n_total, hl, sql = reference_for(config, input_state)
    _emit("delta_phi_hl", hl)
    _emit("delta_phi_sql", sql)
    if report is not None:
        _emit("ratio_to_hl", report.ratio_to_hl)
        _emit("noise", report.noise)
        _emit("slope", report.slope)
    _emit("n_total", n_total)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    keys = PARAM_KEYS + ("variable", "start", "stop", "points", "backend", "intensity", "out")
    params = resolve(args, keys, {**POINT_DEFAULTS, "points": 51, "backend": "closed_form",
                                  "intensity": False})
    for required in ("variable", "start", "stop"):
        if params[required] is None:
            raise UsageError(f"sweep 需要 --{required}")
    config, input_state = build_physics(params)
    spec = SweepSpec(
        variable=params["variable"], start=params["start"], stop=params["stop"],
        points=params["points"], config=config, input_state=input_state,
        backend=params["backend"], include_intensity=bool(params["intensity"]),
    )
    frame = rows_to_frame(sweep(spec), spec.variable)
    out = params["out"] or f"{DEFAULTS.output_dir}/sweep_{spec.variable}.csv"
    header = {"command": "sweep", **physics_params(config, input_state),
              "variable": spec.variable, "start": spec.start, "stop": spec.stop,
              "points": spec.points, "backend": spec.backend}
    write_csv(frame, out, header)
    print(f"✅ 已輸出CSV：{out}")
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    keys = ("id", "out", "report", "beta", "theta_beta", "r", "g", "eta", "loss", "phi_start",
            "phi_stop", "g_start", "g_stop", "points", "r_values", "beta_values")
    params = resolve(args, keys)
    figure_id = params["id"]
    if figure_id not in FIGURE_BUILDERS:
        raise UsageError(f"未知的圖號 {figure_id!r}，可用：{', '.join(FIGURE_BUILDERS)}")

    allowed = FIGURE_FLAGS[figure_id]
    overrides = {}
    for key in keys[3:]:
        if params[key] is None:
            continue
        if key not in allowed:
            raise UsageError(f"--{key.replace('_', '-')} 不適用於圖 {figure_id}")
        overrides[allowed[key]] = params[key]

    tool_config = Su11ToolConfig(generate_txt_report=bool(params["report"]))
    analyzer = Su11Analyzer(tool_config)
    frame, header = analyzer.build_figure(figure_id, **overrides)
    out = params["out"] or tool_config.figure_path(figure_id)
    for path in analyzer.generate_reports(frame, header, out):
        print(f"✅ 已輸出：{path}")
    return EXIT_OK


def cmd_optimum(args: argparse.Namespace) -> int:
    params = resolve(args, ("g", "r", "lower", "upper"), {"r": 0.0})
    if params["g"] is None:
        raise UsageError("optimum 需要 --g")
    interval = None
    if params["lower"] is not None or params["upper"] is not None:
        if params["lower"] is None or params["upper"] is None:
            raise UsageError("--lower 與 --upper 必須同時指定")
        interval = (params["lower"], params["upper"])
    for key, value in optimum_summary(params["g"], params["r"], interval).items():
        _emit(key, value)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    params = resolve(args, ("cutoff", "tolerance"),
                     {"cutoff": DEFAULTS.fock_default_cutoff, "tolerance": DEFAULTS.backend_agreement})
    result = run_validation(cutoff=params["cutoff"], tolerance=params["tolerance"])
    print(format_report(result))
    return EXIT_OK if result.passed else EXIT_VALIDATION


# =======================
# ===== 參數解析器 =====
# =======================

def _flag(parser: argparse.ArgumentParser, name: str, type_, help_text: str, **kwargs) -> None:
    parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type_, default=None,
                        help=help_text, **kwargs)


def _switch(parser: argparse.ArgumentParser, name: str, help_text: str) -> None:
    parser.add_argument(f"--{name}", dest=name, action="store_const", const=True, default=None,
                        help=help_text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="key = value 設定檔路徑")
    _switch(parser, "deg", "角度旗標以度為單位（輸出一律為弧度）")


def _add_physics(parser: argparse.ArgumentParser) -> None:
    _flag(parser, "g", float, "兩級共同增益 g")
    _flag(parser, "g1", float, "第一級增益")
    _flag(parser, "g2", float, "第二級增益")
    _flag(parser, "theta1", float, "第一級相位 θ1")
    _flag(parser, "theta2", float, "第二級相位 θ2（預設 θ1+π）")
    _flag(parser, "phi", float, "待測相位 φ")
    _flag(parser, "beta", float, "同調態振幅 |β|")
    _flag(parser, "theta_beta", float, "同調態相位 θ_β（預設 θ1+π/2）")
    _flag(parser, "r", float, "壓縮強度 r")
    _flag(parser, "eta", float, "壓縮相位 η")
    parser.add_argument("--L1", dest="L1", type=float, default=None, help="內部損耗 L1")
    parser.add_argument("--L2", dest="L2", type=float, default=None, help="外部損耗 L2")
    _switch(parser, "balanced", "平衡配置 g1=g2、θ2=θ1+π")


def build_parser() -> Su11ArgumentParser:
    parser = Su11ArgumentParser(prog="su11", description="SU(1,1) 干涉儀相位靈敏度工具")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="提高日誌層級（-v INFO，-vv DEBUG）")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    point = sub.add_parser("point", help="單點靈敏度")
    _add_common(point)
    _add_physics(point)
    point.set_defaults(handler=cmd_point)

    sweep_p = sub.add_parser("sweep", help="一維參數掃描並輸出 CSV")
    _add_common(sweep_p)
    _add_physics(sweep_p)
    _flag(sweep_p, "variable", str, "掃描變數", choices=SWEEP_VARIABLES)
    _flag(sweep_p, "start", float, "起點")
    _flag(sweep_p, "stop", float, "終點")
    _flag(sweep_p, "points", int, "點數（≥2）")
    _flag(sweep_p, "backend", str, "計算後端", choices=SWEEP_BACKENDS)
    _switch(sweep_p, "intensity", "同時計算強度偵測")
    _flag(sweep_p, "out", str, "輸出 CSV 路徑")
    sweep_p.set_defaults(handler=cmd_sweep)

    figure = sub.add_parser("figure", help="產生圖 3a/3b/4/5 的資料集")
    _add_common(figure)
    _flag(figure, "id", str, "圖號（3a, 3b, 4, 5）")
    _flag(figure, "out", str, "輸出 CSV 路徑")
    _switch(figure, "report", "另外輸出 TXT 摘要")
    _flag(figure, "beta", float, "同調態振幅 |β|")
    _flag(figure, "theta_beta", float, "同調態相位 θ_β")
    _flag(figure, "r", float, "壓縮強度 r")
    _flag(figure, "g", float, "增益 g")
    _flag(figure, "eta", float, "壓縮相位 η")
    _flag(figure, "loss", float, "圖 4 的損耗值")
    _flag(figure, "phi_start", float, "φ 起點")
    _flag(figure, "phi_stop", float, "φ 終點")
    _flag(figure, "g_start", float, "g 起點")
    _flag(figure, "g_stop", float, "g 終點")
    _flag(figure, "points", int, "點數")
    _flag(figure, "r_values", _float_list, "圖 3a 的 r 值列表，例如 '1,2,3'")
    _flag(figure, "beta_values", _float_list, "圖 3b 的 |β| 值列表")
    figure.set_defaults(handler=cmd_figure)

    optimum = sub.add_parser("optimum", help="最佳 β 條件")
    _add_common(optimum)
    _flag(optimum, "g", float, "增益 g（> 0）")
    _flag(optimum, "r", float, "壓縮強度 r")
    _flag(optimum, "lower", float, "β 搜尋區間下限")
    _flag(optimum, "upper", float, "β 搜尋區間上限")
    optimum.set_defaults(handler=cmd_optimum)

    validate = sub.add_parser("validate", help="Fock / 高斯引擎 / 解析式三方驗證")
    _add_common(validate)
    _flag(validate, "cutoff", int, "每模 Fock 截斷維度（≤ 64）")
    _flag(validate, "tolerance", float, "相對誤差門檻")
    validate.set_defaults(handler=cmd_validate)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Su11Error as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
