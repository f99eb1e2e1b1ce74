/**
 * Figure kinds and their CSV contracts. Each kind names the columns it
 * needs from the simulator's output and how they map onto axes; rendering
 * never recomputes physics, it only replots what the CSV holds.
 */

import { readFileSync, writeFileSync, mkdirSync } from "fs";
import * as path from "path";

import { numericColumns, parseCsv } from "./csv";
import { PanelSpec, renderFigure } from "./svg";

export const KINDS = [
  "loglog-Q",
  "linear-T",
  "linear-sigma",
  "robustness",
  "timeseries",
] as const;
export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
  inputCsv: string;
  kind: FigureKind;
  outputPath: string;
}

const COLORS = ["#1f77b4", "#2ca02c", "#d62728"];

function panelsFor(kind: FigureKind, csvPath: string): PanelSpec[] {
  const table = parseCsv(readFileSync(csvPath, "utf-8"));
  switch (kind) {
    case "loglog-Q": {
      const [q, infid] = numericColumns(table, ["q_factor", "infidelity"], csvPath);
      return [
        {
          series: [{ x: q, y: infid, color: COLORS[0], label: "Bell-state infidelity" }],
          xLabel: "Q",
          yLabel: "Infidelity (1 - F)",
          xLog: true,
          yLog: true,
          title: "Infidelity vs cavity quality factor",
        },
      ];
    }
    case "linear-T": {
      const [t, infid] = numericColumns(table, ["temperature_mK", "infidelity"], csvPath);
      return [
        {
          series: [{ x: t, y: infid, color: COLORS[0], label: "Bell-state infidelity" }],
          xLabel: "T (mK)",
          yLabel: "Infidelity (1 - F)",
          title: "Infidelity vs temperature",
        },
      ];
    }
    case "linear-sigma": {
      const [s, infid] = numericColumns(table, ["sigma_um", "avg_infidelity"], csvPath);
      return [
        {
          series: [{ x: s, y: infid, color: COLORS[0], label: "averaged infidelity" }],
          xLabel: "sigma (um)",
          yLabel: "Infidelity (1 - F)",
          title: "Infidelity vs position spread",
        },
      ];
    }
    case "robustness": {
      const [eps, one, three] = numericColumns(
        table,
        ["epsilon", "one_step_error", "three_step_error"],
        csvPath
      );
      return [
        {
          series: [
            { x: eps, y: one, color: COLORS[0], label: "one-step" },
            { x: eps, y: three, color: COLORS[2], label: "three-step", dash: "6 3" },
          ],
          xLabel: "epsilon",
          yLabel: "Population error",
          title: "Robustness to coupling error g(1+epsilon)",
        },
      ];
    }
    case "timeseries": {
      const names = ["t", "pop_11", "pop_1r1", "pop_0r2", "phase_11", "phase_1r1", "phase_0r2"];
      const [t, p11, p1r1, p0r2, f11, f1r1, f0r2] = numericColumns(table, names, csvPath);
      const labels = ["|1m 1a>", "|1m r1>", "|0m r2>"];
      return [
        {
          series: [p11, p1r1, p0r2].map((y, i) => ({
            x: t,
            y,
            color: COLORS[i],
            label: labels[i],
          })),
          xLabel: "t (us)",
          yLabel: "Population",
          title: "Coherent gate dynamics",
        },
        {
          series: [f11, f1r1, f0r2].map((y, i) => ({
            x: t,
            y,
            color: COLORS[i],
            label: labels[i],
          })),
          xLabel: "t (us)",
          yLabel: "Phase (rad)",
        },
      ];
    }
  }
}

export function render(spec: FigureSpec): void {
  const svg = renderFigure(panelsFor(spec.kind, spec.inputCsv));
  mkdirSync(path.dirname(path.resolve(spec.outputPath)), { recursive: true });
  writeFileSync(spec.outputPath, svg, "utf-8");
}
