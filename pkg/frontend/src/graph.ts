import type { DiagramData } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const X_SCALE = 9;
const ARC_STEP = 26;
const ROW_STEP = 56;
const MARGIN = 20;
const FONT = 13;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** Render the geometry the backend computed; all coordinates come from the
 * diagram, this only scales abstract units to pixels. */
export function renderDiagram(container: HTMLElement, diagram: DiagramData): SVGSVGElement {
  const horizontal = diagram.mode !== "tree_vertical";
  const step = horizontal ? ARC_STEP : ROW_STEP;
  const sky = diagram.height * step;
  const width = diagram.width * X_SCALE + 2 * MARGIN;
  const height = sky + 2 * MARGIN + 2.4 * FONT + (horizontal ? 0 : ROW_STEP);
  const px = (x: number) => MARGIN + x * X_SCALE;
  const py = (y: number) => MARGIN + (horizontal ? sky - y * step : y * step);

  const svg = svgEl("svg", { width, height, "data-mode": diagram.mode });
  svg.setAttribute("font-family", "monospace");
  svg.setAttribute("font-size", String(FONT));

  for (const edge of diagram.edges) {
    const pts = edge.anchors.map(([x, y]) => [px(x), py(y)] as const);
    let d: string;
    if (pts.length === 3) {
      d = `M ${pts[0][0]} ${pts[0][1]} Q ${pts[1][0]} ${pts[1][1]} ${pts[2][0]} ${pts[2][1]}`;
    } else {
      d = `M ${pts[0][0]} ${pts[0][1]} L ${pts[pts.length - 1][0]} ${pts[pts.length - 1][1]}`;
    }
    const path = svgEl("path", {
      d,
      fill: "none",
      stroke: "#556",
      "data-edge": `${edge.head_id}-${edge.dep_id}`,
    });
    svg.appendChild(path);
    if (edge.deprel) {
      const [lx, ly] = pts[Math.floor(pts.length / 2)];
      const label = svgEl("text", {
        x: lx,
        y: ly - 3,
        "text-anchor": "middle",
        fill: "#a33",
        "data-edge-label": `${edge.head_id}-${edge.dep_id}`,
      });
      label.textContent = edge.deprel;
      svg.appendChild(label);
    }
  }

  for (const node of diagram.nodes) {
    const x = px(node.x);
    const y = horizontal ? py(0) + FONT + 4 : py(node.y);
    const form = svgEl("text", {
      x,
      y,
      "text-anchor": "middle",
      "data-node": node.token_id,
    });
    form.textContent = node.label;
    svg.appendChild(form);
    if (node.sublabel) {
      const sub = svgEl("text", {
        x,
        y: y + FONT,
        "text-anchor": "middle",
        fill: "#778",
      });
      sub.textContent = node.sublabel;
      svg.appendChild(sub);
    }
  }

  container.replaceChildren(svg);
  return svg;
}
