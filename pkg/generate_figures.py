# -*- coding: utf-8 -*-
"""
產生全部圖資料集
==========================================

一次輸出圖 3(a)、3(b)、4、5 的 CSV 到 ./data/，並印出各圖的重點數值：
1. 圖 3(a)：最佳點 Δφ 對 g，多個 r（|β|=20）
2. 圖 3(b)：最佳點 Δφ 對 g，多個 |β|（r=3）
3. 圖 4：內部與外部損耗的影響
4. 圖 5：零差偵測與強度偵測的比較

使用方式：
python generate_figures.py [--report]
"""

import os
import sys
from datetime import datetime
from typing import Dict

import pandas as pd

# 添加專案路徑
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from su11_analyzer import FIGURE_BUILDERS, find_optimal_beta, nonmonotonicity_report, run_figure
from su11_config import Su11ToolConfig


def generate_all(tool_config: Su11ToolConfig) -> Dict[str, pd.DataFrame]:
    """產生每張圖的資料集，失敗的圖記為 None"""
    results = {}
    for figure_id in FIGURE_BUILDERS:
        try:
            frame, paths = run_figure(figure_id, tool_config=tool_config)
            results[figure_id] = frame
            for path in paths:
                print(f"✅ 圖 {figure_id} 已輸出：{path}")
        except Exception as e:
            print(f"❌ 圖 {figure_id} 產生失敗: {e}")
            results[figure_id] = None
    return results


def print_summary(results: Dict[str, pd.DataFrame]):
    print("\n" + "=" * 80)
    print("📊 各圖重點數值")
    print("=" * 80)

    if results.get("3a") is not None:
        report = nonmonotonicity_report(20.0, 1.0, (2, 4, 6))
        ratios = ", ".join(f"r={r:g}: {v:.4f}" for r, v in zip(report.r_values, report.ratios))
        print(f"\n🔍 圖 3(a)：g=1 時 Δφ/Δφ_HL → {ratios}")
        print(f"   對 r {'單調' if report.is_monotonic else '非單調'}，最佳 r={report.best_r:g}")

    if results.get("3b") is not None:
        beta_star, ratio = find_optimal_beta(2.0, 3.0)
        print(f"\n🔍 圖 3(b)：r=3、g=2 的最佳 |β|* = {beta_star:.4f}，Δφ/Δφ_HL = {ratio:.4f}")

    df = results.get("4")
    if df is not None:
        ordered = ((df["dphi_L1only"] > df["dphi_L2only"]) & (df["dphi_L2only"] > df["dphi_lossless"])).all()
        print(f"\n🔍 圖 4：L1 only > L2 only > 無損耗 {'✅ 全部成立' if ordered else '❌ 有例外'}")
        print(f"   無損耗最小 Δφ = {df['dphi_lossless'].min():.4e}")

    df = results.get("5")
    if df is not None:
        print(f"\n🔍 圖 5：零差最小 Δφ = {df['dphi_homodyne'].min():.4e}，"
              f"強度最小 Δφ = {df['dphi_intensity'].min():.4e}")


def main():
    print("🚀 SU(1,1) 干涉儀相位靈敏度 圖資料集產生")
    print(f"⏰ 執行時間: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    tool_config = Su11ToolConfig(generate_txt_report="--report" in sys.argv[1:])
    results = generate_all(tool_config)
    print_summary(results)

    successful = len([r for r in results.values() if r is not None])
    print(f"\n✅ 完成！成功產生 {successful}/{len(results)} 張圖的資料")
    print(f"\n📁 資料檔案已儲存至 {tool_config.output_dir}/ 目錄")


if __name__ == "__main__":
    main()
