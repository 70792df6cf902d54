#!/usr/bin/env node
/** CLI: render experiment CSVs to an SVG figure.
 *
 *   render --kind psd --in psd_jakes.csv psd_equivalent.csv --out psd.svg
 *   render --kind spread_m --in spread_vs_m.csv --out spread_m.svg
 *
 * Kinds: psd (two inputs), spread_fd, spread_m, ser (one input each).
 * Schema problems are reported before anything is written.
 */

import { writeFileSync } from "node:fs";
import * as echarts from "echarts";

import { buildOption, FigureKind, PlotSpec } from "./figures.js";
import { SchemaError } from "./csv.js";

const KINDS: FigureKind[] = ["psd", "spread_fd", "spread_m", "ser"];

export function renderToSvg(spec: PlotSpec,
                            width = 900, height = 480): string {
  const option = buildOption(spec);   // validates schemas before rendering
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

export function render(spec: PlotSpec): void {
  const svg = renderToSvg(spec);
  writeFileSync(spec.output, svg, "utf-8");
}

function parseArgs(argv: string[]): PlotSpec {
  let kind: string | undefined;
  const inputs: string[] = [];
  let output: string | undefined;
  let collect: "in" | null = null;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--kind") {
      kind = argv[++i];
      collect = null;
    } else if (a === "--in") {
      collect = "in";
    } else if (a === "--out") {
      output = argv[++i];
      collect = null;
    } else if (a.startsWith("--")) {
      throw new Error(`unknown flag ${a}`);
    } else if (collect === "in") {
      inputs.push(a);
    } else {
      throw new Error(`unexpected argument ${a}`);
    }
  }
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (inputs.length === 0) throw new Error("--in requires at least one CSV");
  if (!output) throw new Error("--out is required");
  return { kind: kind as FigureKind, inputs, output };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    render(spec);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    const tag = err instanceof SchemaError ? "schema error" : "error";
    console.error(`${tag}: ${(err as Error).message}`);
    return 1;
  }
}

import { fileURLToPath } from "node:url";
if (process.argv[1] && fileURLToPath(import.meta.url) === process.argv[1]) {
  process.exit(main(process.argv.slice(2)));
}
