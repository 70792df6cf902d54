/** Chart builders: one echarts option per figure kind.
 *
 * The builders only read the CSV tables handed to them; every number shown
 * (including the annotated scaling slope) is derived from the file
 * contents, so re-rendering the same CSV plots the same data.
 */

import type { EChartsCoreOption } from "echarts";

import { numbers, readCsv, requireColumns, SchemaError, strings, Table } from "./csv.js";

export type FigureKind = "psd" | "spread_fd" | "spread_m" | "ser";

export interface PlotSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
}

const BASE: EChartsCoreOption = {
  animation: false,
  backgroundColor: "#ffffff",
  textStyle: { fontFamily: "sans-serif" },
};

function decimate<T>(values: T[], maxPoints = 4096): T[] {
  if (values.length <= maxPoints) return values;
  const stride = Math.ceil(values.length / maxPoints);
  return values.filter((_, i) => i % stride === 0);
}

function expectInputs(spec: PlotSpec, n: number): Table[] {
  if (spec.inputs.length !== n) {
    throw new SchemaError(
      `kind "${spec.kind}" expects ${n} input CSV file(s), got ${spec.inputs.length}`,
    );
  }
  return spec.inputs.map(readCsv);
}

/** Two-panel spectral comparison: classical bathtub vs equivalent channel. */
export function psdOption(spec: PlotSpec): EChartsCoreOption {
  const tables = expectInputs(spec, 2);
  for (const t of tables) requireColumns(t, ["omega_rad_s", "density", "dc_mass"]);
  // the equivalent-channel file is the one carrying a DC mass
  const sorted = [...tables].sort(
    (a, b) => Number(a.rows[0][a.columns.indexOf("dc_mass")]) -
      Number(b.rows[0][b.columns.indexOf("dc_mass")]),
  );
  const titles = ["classical Jakes channel", "equivalent uplink channel"];
  const grids = [{ left: "7%", right: "55%" }, { left: "55%", right: "4%" }];
  const series = sorted.map((t, i) => {
    const omega = numbers(t, "omega_rad_s");
    const density = numbers(t, "density");
    return {
      type: "line" as const,
      xAxisIndex: i,
      yAxisIndex: i,
      showSymbol: false,
      lineStyle: { width: 1 },
      data: decimate(omega.map((o, k) => [o, density[k]])),
    };
  });
  return {
    ...BASE,
    title: titles.map((text, i) => ({
      text,
      left: i === 0 ? "18%" : "67%",
      textStyle: { fontSize: 13 },
    })),
    grid: grids.map((g) => ({ ...g, top: 48, bottom: 46 })),
    xAxis: grids.map((_, i) => ({
      gridIndex: i,
      type: "value",
      name: "omega [rad/s]",
      nameLocation: "middle",
      nameGap: 28,
    })),
    yAxis: grids.map((_, i) => ({
      gridIndex: i,
      type: "value",
      name: i === 0 ? "PSD" : "",
    })),
    series,
  };
}

/** Doppler spread vs normalized peak Doppler, one curve pair per M. */
export function spreadFdOption(spec: PlotSpec): EChartsCoreOption {
  const [t] = expectInputs(spec, 1);
  requireColumns(t, ["m", "fd_Tb", "sigma_closed", "sigma_numeric", "sigma_jakes"]);
  const m = numbers(t, "m");
  const x = numbers(t, "fd_Tb");
  const closed = numbers(t, "sigma_closed");
  const numeric = numbers(t, "sigma_numeric");
  const jakes = numbers(t, "sigma_jakes");
  const ms = [...new Set(m)].sort((a, b) => a - b);
  const series: object[] = ms.flatMap((mv) => {
    const idx = m.map((v, i) => (v === mv ? i : -1)).filter((i) => i >= 0);
    return [
      {
        type: "line",
        name: `closed form, M=${mv}`,
        data: idx.map((i) => [x[i], closed[i]]),
        symbol: "circle",
      },
      {
        type: "line",
        name: `numeric, M=${mv}`,
        lineStyle: { type: "dashed" },
        data: idx.map((i) => [x[i], numeric[i]]),
        symbol: "triangle",
      },
    ];
  });
  const firstM = m.map((v, i) => (v === ms[0] ? i : -1)).filter((i) => i >= 0);
  series.push({
    type: "line",
    name: "classical Jakes",
    lineStyle: { type: "dotted", width: 2 },
    data: firstM.map((i) => [x[i], jakes[i]]),
    symbol: "none",
  });
  return {
    ...BASE,
    legend: { top: 4, type: "scroll" },
    grid: { top: 60, bottom: 48, left: 70, right: 24 },
    xAxis: {
      type: "value",
      name: "fd * Tb",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: { type: "value", name: "Doppler spread [rad/s]" },
    series,
  };
}

/** Least-squares slope of log(y) against log(x). */
export function loglogSlope(x: number[], y: number[]): number {
  const lx = x.map(Math.log);
  const ly = y.map(Math.log);
  const mx = lx.reduce((a, b) => a + b, 0) / lx.length;
  const my = ly.reduce((a, b) => a + b, 0) / ly.length;
  let num = 0;
  let den = 0;
  for (let i = 0; i < lx.length; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) ** 2;
  }
  return num / den;
}

/** Spread vs antenna count on log-log axes with the fitted slope annotated. */
export function spreadMOption(spec: PlotSpec): EChartsCoreOption {
  const [t] = expectInputs(spec, 1);
  requireColumns(t, ["m", "sigma_closed", "sigma_asymptotic_fit"]);
  const m = numbers(t, "m");
  const closed = numbers(t, "sigma_closed");
  const fit = numbers(t, "sigma_asymptotic_fit");
  if (m.length < 2) {
    throw new SchemaError(`${t.file}: need at least two antenna counts`);
  }
  const slope = loglogSlope(m, closed);
  return {
    ...BASE,
    title: { text: "Doppler spread vs transmit antennas", left: "center" },
    grid: { top: 48, bottom: 48, left: 80, right: 24 },
    xAxis: {
      type: "log",
      name: "M",
      nameLocation: "middle",
      nameGap: 28,
      minorSplitLine: { show: true },
    },
    yAxis: { type: "log", name: "Doppler spread [rad/s]" },
    legend: { top: 26 },
    graphic: [
      {
        type: "text",
        right: 40,
        top: 70,
        style: {
          text: `fitted slope ${slope.toFixed(3)}`,
          fontSize: 14,
          fill: "#333",
        },
      },
    ],
    series: [
      {
        type: "line",
        name: "closed form",
        data: m.map((v, i) => [v, closed[i]]),
        symbol: "circle",
      },
      {
        type: "line",
        name: "asymptotic fit",
        lineStyle: { type: "dashed" },
        data: m.map((v, i) => [v, fit[i]]),
        symbol: "none",
      },
    ],
  };
}

/** SER vs SNR on a log-y axis, one curve per (scheme, M). */
export function serOption(spec: PlotSpec): EChartsCoreOption {
  const [t] = expectInputs(spec, 1);
  requireColumns(t, ["scheme", "m", "snr_db", "ser", "frames", "ci95"]);
  const scheme = strings(t, "scheme");
  const m = numbers(t, "m");
  const snr = numbers(t, "snr_db");
  const ser = numbers(t, "ser");
  const keys = [...new Set(scheme.map((s, i) => `${s} M=${m[i]}`))];
  const series = keys.map((key) => {
    const pts: [number, number][] = [];
    for (let i = 0; i < ser.length; i++) {
      // zero counts cannot sit on a log axis; drop those points
      if (`${scheme[i]} M=${m[i]}` === key && ser[i] > 0) {
        pts.push([snr[i], ser[i]]);
      }
    }
    pts.sort((a, b) => a[0] - b[0]);
    return {
      type: "line" as const,
      name: key,
      data: pts,
      lineStyle: key.startsWith("proposed") ? {} : { type: "dashed" },
    };
  });
  return {
    ...BASE,
    legend: { top: 4, type: "scroll" },
    grid: { top: 56, bottom: 48, left: 70, right: 24 },
    xAxis: {
      type: "value",
      name: "SNR [dB]",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: { type: "log", name: "SER" },
    series,
  };
}

export function buildOption(spec: PlotSpec): EChartsCoreOption {
  switch (spec.kind) {
    case "psd":
      return psdOption(spec);
    case "spread_fd":
      return spreadFdOption(spec);
    case "spread_m":
      return spreadMOption(spec);
    case "ser":
      return serOption(spec);
    default:
      throw new SchemaError(`unknown figure kind "${(spec as PlotSpec).kind}"`);
  }
}
