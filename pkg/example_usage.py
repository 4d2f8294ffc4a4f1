# -*- coding: utf-8 -*-
"""
SU(1,1) 干涉儀相位靈敏度工具 - 使用範例
=================================================

主要功能：
1. 解析式計算最佳點靈敏度並與 HL/SQL 比較
2. 高斯引擎數值誤差傳遞（含損耗、非平衡配置）
3. 參數掃描並輸出 CSV
4. 最佳 β 條件搜尋

使用方式：
python example_usage.py
"""

import math
import os
import sys

# 添加專案路徑
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from closed_form_sensitivity import homodyne_sensitivity, lossy_homodyne_sensitivity
from su11_analyzer import SweepSpec, find_optimal_beta, numeric_sensitivity, rows_to_frame, sweep, write_csv
from su11_config import FwmStage, InterferometerConfig, input_state_for_optimum


def example_optimal_point():
    """範例1：最佳點的解析式與引擎比較"""
    print("\n=== 範例1：最佳點靈敏度 ===")
    config = InterferometerConfig.balanced(g=1.0)
    input_state = input_state_for_optimum(beta_mag=10.0, squeeze_r=2.0)

    closed = homodyne_sensitivity(config, input_state)
    engine = numeric_sensitivity(config, input_state)
    print(f"解析式 Δφ = {closed.delta_phi:.6e}")
    print(f"引擎   Δφ = {engine.delta_phi:.6e}")
    print(f"Δφ_HL = {closed.hl:.6e}，Δφ_SQL = {closed.sql:.6e}，Δφ/Δφ_HL = {closed.ratio_to_hl:.4f}")


def example_losses():
    """範例2：損耗對靈敏度的影響"""
    print("\n=== 範例2：內部與外部損耗 ===")
    input_state = input_state_for_optimum(beta_mag=10.0, squeeze_r=2.0)
    config = InterferometerConfig.balanced(g=0.5, phi=0.1)
    for l1, l2 in ((0.0, 0.0), (0.2, 0.0), (0.0, 0.2)):
        report = lossy_homodyne_sensitivity(config, input_state, l1, l2)
        print(f"L1={l1:.1f} L2={l2:.1f} → Δφ = {report.delta_phi:.6e}")


def example_unbalanced():
    """範例3：非平衡配置只能走高斯引擎"""
    print("\n=== 範例3：非平衡配置 ===")
    config = InterferometerConfig(stage1=FwmStage(0.8, 0.0), stage2=FwmStage(1.2, math.pi), phi=0.05)
    input_state = input_state_for_optimum(beta_mag=5.0, squeeze_r=1.0)
    report = numeric_sensitivity(config, input_state)
    print(f"g1=0.8, g2=1.2 → Δφ = {report.delta_phi:.6e}（{report.method}）")


def example_sweep():
    """範例4：對 φ 掃描並寫出 CSV"""
    print("\n=== 範例4：φ 掃描 ===")
    spec = SweepSpec(
        variable="phi", start=-0.5, stop=0.5, points=21,
        config=InterferometerConfig.balanced(g=1.0),
        input_state=input_state_for_optimum(beta_mag=10.0, squeeze_r=2.0),
        backend="both", include_intensity=True,
    )
    frame = rows_to_frame(sweep(spec), "phi")
    path = write_csv(frame, "./data/example_sweep_phi.csv", {"command": "example", "variable": "phi"})
    print(frame[["phi", "dphi_homodyne", "dphi_engine", "dphi_intensity", "flags"]].head(5).to_string(index=False))
    print(f"✅ 已輸出：{path}")


def example_optimum():
    """範例5：最佳 β 搜尋"""
    print("\n=== 範例5：最佳 β ===")
    for g, r in ((2.0, 3.0), (1.0, 2.0)):
        beta_star, ratio = find_optimal_beta(g, r)
        approx = math.exp(r) * math.tanh(2 * g) / 2
        print(f"g={g}, r={r} → β* = {beta_star:.4f}（近似式 {approx:.4f}），Δφ/Δφ_HL = {ratio:.4f}")


def main():
    print("🚀 SU(1,1) 干涉儀相位靈敏度工具 - 使用範例")
    print("=" * 60)

    try:
        example_optimal_point()
        example_losses()
        example_unbalanced()
        example_sweep()
        example_optimum()
        print("\n✅ 所有範例執行完成！")
    except Exception as e:
        print(f"\n❌ 範例執行失敗: {e}")


if __name__ == "__main__":
    main()
