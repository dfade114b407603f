#!/usr/bin/env node
// render_figures --kind {curve,alpha,epsilon} --in <csv> [--in <csv> ...]
//                [--label <name> ...] --out <img.svg>

import { FigureKind, FigureSpec } from "./figures.js";
import { renderFigure } from "./render.js";

function parseArgs(argv: string[]): FigureSpec {
  let kind: string | undefined;
  let out: string | undefined;
  const inputs: string[] = [];
  const labels: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i++;
      if (i >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[i];
    };
    if (arg === "--kind") kind = next();
    else if (arg === "--in") inputs.push(next());
    else if (arg === "--label") labels.push(next());
    else if (arg === "--out") out = next();
    else if (arg === "--help" || arg === "-h") {
      console.log(
        "usage: render_figures --kind {curve,alpha,epsilon} --in <csv> [--in <csv> ...] " +
          "[--label <name> ...] --out <img.svg>",
      );
      process.exit(0);
    } else throw new Error(`unknown argument ${arg}`);
  }
  if (!kind || !["curve", "alpha", "epsilon"].includes(kind)) {
    throw new Error("--kind must be curve, alpha, or epsilon");
  }
  if (inputs.length === 0) throw new Error("at least one --in CSV is required");
  if (!out) throw new Error("--out is required");
  return { kind: kind as FigureKind, inputs, output: out, labels };
}

try {
  const spec = parseArgs(process.argv.slice(2));
  renderFigure(spec);
  console.log(`wrote ${spec.output}`);
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`);
  process.exit(1);
}
