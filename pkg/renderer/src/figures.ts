import { createHash } from "crypto";
import { basename } from "path";
import { CsvTable, numberColumn, readCsv } from "./csv.js";

export type FigureKind = "curve" | "alpha" | "epsilon";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  labels?: string[];
  width?: number;
  height?: number;
}

interface Series {
  name: string;
  x: number[];
  y: number[];
}

export function checksum(values: number[][]): string {
  return createHash("sha256").update(JSON.stringify(values)).digest("hex");
}

function seriesLabel(spec: FigureSpec, index: number): string {
  if (spec.labels && spec.labels[index]) return spec.labels[index];
  return basename(spec.inputs[index]).replace(/\.csv$/, "");
}

const AXES: Record<FigureKind, { xCol: string; yCol: string; xLabel: string; yLabel: string }> = {
  curve: {
    xCol: "t",
    yCol: "adoption_estimate",
    xLabel: "period",
    yLabel: "announced-structure adoption probability",
  },
  alpha: {
    xCol: "param_value",
    yCol: "terminal_adoption",
    xLabel: "switching threshold",
    yLabel: "terminal adoption probability",
  },
  epsilon: {
    xCol: "param_value",
    yCol: "period_sender_utility",
    xLabel: "epsilon",
    yLabel: "sender period expected utility at horizon",
  },
};

function extractSeries(spec: FigureSpec): Series[] {
  const { xCol, yCol } = AXES[spec.kind];
  return spec.inputs.map((path, i) => {
    const table = readCsv(path);
    return { name: seriesLabel(spec, i), x: numberColumn(table, xCol), y: numberColumn(table, yCol) };
  });
}

function axisRange(values: number[]): [number, number] {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const margin = (hi - lo || 1) * 0.05;
  return [lo - margin, hi + margin];
}

/** Build the chart option; the series data arrays are the CSV columns as-is. */
export function buildOption(spec: FigureSpec): { option: Record<string, unknown>; series: Series[] } {
  const series = extractSeries(spec);
  const axes = AXES[spec.kind];
  const allY = series.flatMap((s) => s.y);
  const [yLo, yHi] = axisRange(spec.kind === "curve" || spec.kind === "alpha" ? [...allY, 0, 1] : allY);

  const echartsSeries = series.map((s) => ({
    name: s.name,
    type: "line",
    showSymbol: series.length > 1,
    data: s.x.map((x, i) => [x, s.y[i]]),
    ...(spec.kind === "alpha"
      ? {
          markLine: {
            silent: true,
            symbol: "none",
            lineStyle: { type: "dashed", color: "#888" },
            data: [{ yAxis: 0.5 }],
          },
        }
      : {}),
  }));

  const option = {
    animation: false,
    backgroundColor: "#ffffff",
    legend: series.length > 1 ? { top: 8 } : undefined,
    grid: { left: 70, right: 24, top: 40, bottom: 48 },
    xAxis: {
      type: "value",
      name: axes.xLabel,
      nameLocation: "middle",
      nameGap: 30,
      min: axisRange(series.flatMap((s) => s.x))[0],
      max: axisRange(series.flatMap((s) => s.x))[1],
    },
    yAxis: {
      type: "value",
      name: axes.yLabel,
      nameLocation: "middle",
      nameGap: 45,
      min: yLo,
      max: yHi,
    },
    series: echartsSeries,
  };
  return { option, series };
}

/**
 * Confirm the arrays inside the built option are the CSV columns, verbatim.
 *
 * The option's plotted pairs are hashed and compared with a hash of the
 * columns re-read from disk; any transformation of the data would break it.
 */
export function verifyPlottedArrays(spec: FigureSpec, option: Record<string, unknown>): void {
  const { xCol, yCol } = AXES[spec.kind];
  const plotted = (option.series as { data: number[][] }[]).map((s) => s.data);
  const expected = spec.inputs.map((path) => {
    const table = readCsv(path);
    const xs = numberColumn(table, xCol);
    const ys = numberColumn(table, yCol);
    return xs.map((x, i) => [x, ys[i]]);
  });
  for (let i = 0; i < expected.length; i++) {
    if (checksum(plotted[i]) !== checksum(expected[i])) {
      throw new Error(`plotted arrays for ${spec.inputs[i]} do not match the CSV columns`);
    }
  }
}
