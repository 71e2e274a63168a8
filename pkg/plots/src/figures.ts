/**
 * Chart-option builders for the three figure kinds:
 *
 *  - lines_vs_h: stacked panels of mu_S, psi_f, polarization, rho against
 *    the sweep axis, one styled series per dataset (solid, dashed, ...),
 *    with vertical transition markers taken from a boundary file;
 *  - heatmap_with_boundary: a value map over a two-axis sweep with the
 *    phase boundary drawn on top as a polyline;
 *  - spectrum: frequency-resolved curves, and zero-crossing markers when
 *    the input is a stability scan.
 *
 * Builders are pure: tables in, an echarts option out.
 */

import type { HeatmapSeriesOption, LineSeriesOption } from "echarts/charts";
import type {
  GridComponentOption,
  LegendComponentOption,
  MarkLineComponentOption,
  MarkPointComponentOption,
  VisualMapComponentOption,
} from "echarts/components";
import type { ComposeOption } from "echarts/core";
import { InputError, Table, groupBy, numeric, requireColumns } from "./csv.js";

export type FigureOption = ComposeOption<
  | LineSeriesOption
  | HeatmapSeriesOption
  | GridComponentOption
  | LegendComponentOption
  | VisualMapComponentOption
  | MarkLineComponentOption
  | MarkPointComponentOption
>;
type AnySeries = LineSeriesOption | HeatmapSeriesOption;

const PALETTE = ["#1565c0", "#e65100", "#2e7d32", "#6a1b9a", "#c62828", "#00838f"];
const BOUNDARY_COLOR = "#e91e63";
const PANELS = ["mu_S", "psi_f", "polarization", "rho"] as const;

export type FigureKind = "lines_vs_h" | "heatmap_with_boundary" | "spectrum";

const BASE: FigureOption = {
  animation: false,
  backgroundColor: "#ffffff",
  textStyle: { fontFamily: "sans-serif" },
};

interface Dataset {
  label: string;
  x: number[];
  y: Map<string, number[]>;
}

/** Split sweep tables into labelled datasets: a table whose axis2 column
 *  is populated contributes one dataset per axis2 value, a one-axis table
 *  contributes a single dataset named after its file. */
function toDatasets(tables: Table[]): Dataset[] {
  const sets: Dataset[] = [];
  for (const table of tables) {
    requireColumns(table, ["axis1", ...PANELS]);
    const axis1 = numeric(table, "axis1");
    const cols = new Map(PANELS.map((p) => [p as string, numeric(table, p)]));
    const pick = (idx: number[], v: number[]) => idx.map((i) => v[i]);
    const twoAxis =
      table.columns.includes("axis2") &&
      table.rows.some((r) => (r["axis2"] ?? "") !== "");
    if (twoAxis) {
      const axis2Name = table.meta.get("sweep.axis2") ?? "axis2";
      for (const [key, idx] of groupBy(table, "axis2")) {
        sets.push({
          label: `${axis2Name} = ${key}`,
          x: pick(idx, axis1),
          y: new Map(PANELS.map((p) => [p as string, pick(idx, cols.get(p)!)])),
        });
      }
    } else {
      const stem = table.path.replace(/^.*\//, "").replace(/\.csv$/, "");
      sets.push({ label: stem, x: axis1, y: cols });
    }
  }
  return sets;
}

export function linesVsH(tables: Table[], boundary: Table | null): FigureOption {
  const sets = toDatasets(tables);
  const axisName = tables[0].meta.get("sweep.axis1") ?? "axis1";
  const markers = boundary ? [...new Set(numeric(boundary, "axis1"))].sort((a, b) => a - b) : [];

  const pos = [
    { left: "9%", top: "10%" },
    { left: "59%", top: "10%" },
    { left: "9%", top: "60%" },
    { left: "59%", top: "60%" },
  ];
  const series: AnySeries[] = [];
  PANELS.forEach((panel, p) => {
    sets.forEach((set, k) => {
      series.push({
        name: set.label,
        type: "line",
        xAxisIndex: p,
        yAxisIndex: p,
        data: set.x.map((x, i) => {
          const y = set.y.get(panel)![i];
          return [x, Number.isFinite(y) ? y : null] as [number, number | null];
        }),
        showSymbol: false,
        lineStyle: { width: 2, type: k % 2 === 1 ? "dashed" : "solid" },
        color: PALETTE[k % PALETTE.length],
        ...(k === 0 && markers.length > 0
          ? {
              markLine: {
                silent: true,
                symbol: "none",
                lineStyle: { color: BOUNDARY_COLOR, type: "dashed", width: 1.5 },
                label: { show: false },
                data: markers.map((v) => ({ xAxis: v })),
              },
            }
          : {}),
      });
    });
  });
  return {
    ...BASE,
    legend: { top: 0, textStyle: { fontFamily: "sans-serif" } },
    grid: pos.map((g) => ({ ...g, width: "36%", height: "32%" })),
    xAxis: pos.map((_, p) => ({
      type: "value",
      gridIndex: p,
      name: p >= 2 ? axisName : "",
      nameLocation: "middle",
      nameGap: 25,
    })),
    yAxis: pos.map((_, p) => ({
      type: "value",
      gridIndex: p,
      name: PANELS[p],
      scale: true,
    })),
    series,
  };
}

/** Fractional index of value v on the sorted grid xs (for drawing the
 *  boundary polyline over category axes). */
function fractionalIndex(xs: number[], v: number): number {
  if (v <= xs[0]) return 0;
  for (let i = 1; i < xs.length; i++) {
    if (v <= xs[i]) {
      return i - 1 + (v - xs[i - 1]) / (xs[i] - xs[i - 1]);
    }
  }
  return xs.length - 1;
}

export function heatmapWithBoundary(
  table: Table,
  boundary: Table | null,
  valueColumn = "psi_f",
): FigureOption {
  requireColumns(table, ["axis1", "axis2", valueColumn]);
  const axis1 = numeric(table, "axis1");
  const axis2 = numeric(table, "axis2");
  const value = numeric(table, valueColumn);
  const xs = [...new Set(axis1)].filter(Number.isFinite).sort((a, b) => a - b);
  const ys = [...new Set(axis2)].filter(Number.isFinite).sort((a, b) => a - b);
  if (xs.length === 0 || ys.length === 0) {
    throw new InputError(
      `${table.path}: needs finite axis1 and axis2 values (two-axis sweep)`,
    );
  }
  const cells = axis1.flatMap((x, i) => {
    const xi = xs.indexOf(x);
    const yi = ys.indexOf(axis2[i]);
    if (xi < 0 || yi < 0) return [];
    return [[xi, yi, Number.isFinite(value[i]) ? value[i] : "-"]];
  });
  const finite = value.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    throw new InputError(`${table.path}: column ${valueColumn} has no finite values`);
  }

  const series: AnySeries[] = [
    {
      type: "heatmap",
      data: cells as (number | string)[][],
      label: { show: false },
    },
  ];
  const boundaryRows = boundary ? boundary.rows.length : 0;
  if (boundary && boundaryRows > 0) {
    const bx = numeric(boundary, "axis1");
    const by = numeric(boundary, "axis2");
    series.push({
      type: "line",
      data: bx.map((x, i) => [fractionalIndex(xs, x), fractionalIndex(ys, by[i])]),
      symbol: "circle",
      symbolSize: 7,
      lineStyle: { color: BOUNDARY_COLOR, width: 2.5 },
      itemStyle: { color: BOUNDARY_COLOR },
      z: 10,
    });
  }
  return {
    ...BASE,
    grid: { left: "12%", right: "16%", top: "8%", bottom: "12%" },
    xAxis: {
      type: "category",
      data: xs.map(String),
      name: table.meta.get("sweep.axis1") ?? "axis1",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "category",
      data: ys.map(String),
      name: table.meta.get("sweep.axis2") ?? "axis2",
      nameLocation: "middle",
      nameGap: 40,
    },
    visualMap: {
      min: Math.min(...finite),
      max: Math.max(...finite),
      seriesIndex: 0,
      calculable: false,
      orient: "vertical",
      right: 0,
      top: "center",
      text: [valueColumn, ""],
      inRange: { color: ["#0d47a1", "#42a5f5", "#ffee58", "#e53935"] },
    },
    series,
  };
}

/** Interpolated zeros of y(x), one per sign change. */
export function zeroCrossings(x: number[], y: number[]): number[] {
  const out: number[] = [];
  for (let i = 1; i < x.length; i++) {
    const a = y[i - 1];
    const b = y[i];
    if (!Number.isFinite(a) || !Number.isFinite(b)) continue;
    if (a === 0) out.push(x[i - 1]);
    else if (a * b < 0) out.push(x[i - 1] - a * (x[i] - x[i - 1]) / (b - a));
  }
  if (y.length > 0 && y[y.length - 1] === 0) out.push(x[x.length - 1]);
  return out;
}

export function spectrum(table: Table): FigureOption {
  requireColumns(table, ["omega"]);
  const omega = numeric(table, "omega");
  const isStability = table.columns.includes("im_k1");
  const picks = isStability
    ? [{ column: "im_k1", label: "Im K^R_1" }]
    : table.columns
        .filter((c) => c.startsWith("im_"))
        .slice(0, 8)
        .map((c) => ({ column: c, label: c.slice(3) }));
  if (picks.length === 0) {
    throw new InputError(`${table.path}: no imaginary-part columns to plot`);
  }

  const series: AnySeries[] = picks.map((pick, k) => {
    const y = numeric(table, pick.column);
    const crossings = isStability ? zeroCrossings(omega, y) : [];
    return {
      name: pick.label,
      type: "line",
      data: omega.map((w, i) => [w, Number.isFinite(y[i]) ? y[i] : null]),
      showSymbol: false,
      lineStyle: { width: 2 },
      color: PALETTE[k % PALETTE.length],
      ...(isStability
        ? {
            markLine: {
              silent: true,
              symbol: "none",
              lineStyle: { color: "#9e9e9e", type: "dashed", width: 1 },
              label: { show: false },
              data: [{ yAxis: 0 }],
            },
            markPoint: {
              silent: true,
              symbol: "circle",
              symbolSize: 9,
              itemStyle: { color: BOUNDARY_COLOR },
              label: { show: false },
              data: crossings.map((w, i) => ({ name: `zero-${i}`, coord: [w, 0] })),
            },
          }
        : {}),
    };
  });
  return {
    ...BASE,
    legend: { top: 0, textStyle: { fontFamily: "sans-serif" } },
    grid: { left: "10%", right: "5%", top: "12%", bottom: "12%" },
    xAxis: {
      type: "value",
      name: "omega",
      nameLocation: "middle",
      nameGap: 25,
      min: "dataMin",
      max: "dataMax",
    },
    yAxis: { type: "value", scale: true },
    series,
  };
}

export function buildFigure(
  kind: FigureKind,
  inputs: Table[],
  boundary: Table | null,
  valueColumn?: string,
): FigureOption {
  switch (kind) {
    case "lines_vs_h":
      return linesVsH(inputs, boundary);
    case "heatmap_with_boundary":
      if (inputs.length !== 1) {
        throw new InputError("heatmap_with_boundary takes exactly one input CSV");
      }
      return heatmapWithBoundary(inputs[0], boundary, valueColumn);
    case "spectrum":
      if (inputs.length !== 1) {
        throw new InputError("spectrum takes exactly one input CSV");
      }
      return spectrum(inputs[0]);
  }
}
