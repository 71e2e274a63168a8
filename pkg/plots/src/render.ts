/**
 * Server-side SVG rendering.  echarts runs headless in SSR mode, so the
 * output is a plain SVG string: no DOM, no fonts to rasterize, no
 * timestamps -- the same option object always renders to the same bytes
 * within a fresh process.
 */

import { writeFileSync } from "node:fs";
import { HeatmapChart, LineChart } from "echarts/charts";
import {
  GridComponent,
  LegendComponent,
  MarkLineComponent,
  MarkPointComponent,
  VisualMapComponent,
} from "echarts/components";
import { init, use } from "echarts/core";
import { SVGRenderer } from "echarts/renderers";
import type { FigureOption } from "./figures.js";

use([
  SVGRenderer,
  LineChart,
  HeatmapChart,
  GridComponent,
  LegendComponent,
  MarkLineComponent,
  MarkPointComponent,
  VisualMapComponent,
]);

export interface RenderSize {
  width: number;
  height: number;
}

export function renderSVG(option: FigureOption, size: RenderSize): string {
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width: size.width,
    height: size.height,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

export function writeSVG(path: string, svg: string): void {
  writeFileSync(path, svg, "utf-8");
}
