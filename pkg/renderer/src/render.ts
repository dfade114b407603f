import { writeFileSync } from "fs";
import { init, use } from "echarts/core";
import { LineChart } from "echarts/charts";
import { GridComponent, LegendComponent, MarkLineComponent } from "echarts/components";
import { SVGRenderer } from "echarts/renderers";
import { FigureSpec, buildOption, verifyPlottedArrays } from "./figures.js";

use([LineChart, GridComponent, LegendComponent, MarkLineComponent, SVGRenderer]);

/**
 * Rewrite renderer-generated id/class tokens to a canonical numbering.
 *
 * The SVG backend names elements with process-global counters, so two
 * renders of the same data differ in token suffixes. Renumbering by first
 * appearance keeps references intact and makes output a pure function of
 * the input.
 */
export function normalizeSvgIds(svg: string): string {
  const mapping = new Map<string, string>();
  return svg.replace(/zr\d+-[A-Za-z]+-?\d+/g, (token) => {
    let canonical = mapping.get(token);
    if (!canonical) {
      canonical = `zr0-g-${mapping.size}`;
      mapping.set(token, canonical);
    }
    return canonical;
  });
}

/** Render one figure to a static SVG file; throws before writing on bad input. */
export function renderFigure(spec: FigureSpec): string {
  const { option } = buildOption(spec);
  verifyPlottedArrays(spec, option);
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width ?? 960,
    height: spec.height ?? 600,
  });
  try {
    chart.setOption(option);
    const svg = normalizeSvgIds(chart.renderToSVGString());
    writeFileSync(spec.output, svg, "utf8");
    return svg;
  } finally {
    chart.dispose();
  }
}
