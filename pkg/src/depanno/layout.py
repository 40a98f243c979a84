"""Geometry for the three dependency-graph views.

The backend computes positions in abstract units (character widths on the
x-axis, arc levels / tree depths on the y-axis); clients scale to pixels.
Two horizontal modes share one edge-height rule: an arc must be one level
higher than the highest arc whose span it strictly contains.  Arcs whose
spans merely cross (non-projective trees) may share a level and are drawn
crossing.  The compact mode packs token x-positions by label width instead
of uniform slots, trading grid regularity for screen real estate.

Partially annotated sentences lay out with the annotated edges only; cyclic
head graphs are refused (the UI shows validation errors instead).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Sentence, head_cycle

__all__ = [
    "MODES",
    "Node",
    "Edge",
    "ArcDiagram",
    "CyclicGraph",
    "layout",
    "render_svg",
]

MODES = ("compact_horizontal", "arcs_horizontal", "tree_vertical")
GAP = 2.0  # character cells between neighboring labels


class CyclicGraph(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    token_id: int
    x: float
    y: float
    label: str
    sublabel: str | None


@dataclass(frozen=True)
class Edge:
    head_id: int  # 0 = virtual root anchor
    dep_id: int
    deprel: str | None
    height: int  # arc level (horizontal) or depth (vertical)
    anchors: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class ArcDiagram:
    mode: str
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    width: float
    height: float


def _drawable_edges(sent: Sentence) -> list[tuple[int, int]]:
    """(head, dep) for every token whose head is set and in range."""
    n = len(sent.tokens)
    return [
        (t.head, t.id)
        for t in sent.tokens
        if t.head is not None and 0 <= t.head <= n
    ]


def _span(head: int, dep: int) -> tuple[int, int]:
    # The virtual root anchor sits left of token 1, so a root edge spans
    # (0, dep) and nests above everything it covers.
    return (min(head, dep), max(head, dep))


def _contains(outer: tuple[int, int], inner: tuple[int, int]) -> bool:
    return (
        outer != inner
        and outer[0] <= inner[0]
        and inner[1] <= outer[1]
    )


def arc_heights(edges: list[tuple[int, int]]) -> dict[tuple[int, int], int]:
    """Height of each edge: 1 + max height of strictly contained spans."""
    spans = {e: _span(*e) for e in edges}
    order = sorted(edges, key=lambda e: spans[e][1] - spans[e][0])
    heights: dict[tuple[int, int], int] = {}
    for e in order:
        inner = [
            heights[o] for o in order if _contains(spans[e], spans[o])
        ]
        heights[e] = 1 + max(inner, default=0)
    return heights


def _footprint(tok) -> float:
    return float(max(len(tok.form), len(tok.upos or ""), 1))


def _horizontal(sent: Sentence, mode: str) -> ArcDiagram:
    n = len(sent.tokens)
    if mode == "compact_horizontal":
        xs: list[float] = []
        cursor = 0.0
        for tok in sent.tokens:
            fp = _footprint(tok)
            xs.append(cursor + fp / 2.0)
            cursor += fp + GAP
        width = cursor - GAP if n else 0.0
    else:
        slot = max((_footprint(t) for t in sent.tokens), default=1.0) + GAP
        xs = [slot * (i + 0.5) for i in range(n)]
        width = slot * n

    nodes = tuple(
        Node(t.id, xs[t.id - 1], 0.0, t.form, t.upos) for t in sent.tokens
    )
    edges_hd = _drawable_edges(sent)
    heights = arc_heights(edges_hd)
    edges = []
    for head, dep in edges_hd:
        h = heights[(head, dep)]
        x_dep = xs[dep - 1]
        tok = sent.tokens[dep - 1]
        if head == 0:
            anchors = ((x_dep, float(h)), (x_dep, 0.0))
        else:
            x_head = xs[head - 1]
            anchors = ((x_head, 0.0), ((x_head + x_dep) / 2.0, float(h)), (x_dep, 0.0))
        edges.append(Edge(head, dep, tok.deprel, h, anchors))
    edges.sort(key=lambda e: e.dep_id)
    total_height = max((e.height for e in edges), default=0)
    return ArcDiagram(mode, nodes, tuple(edges), width, float(total_height))


def _vertical(sent: Sentence) -> ArcDiagram:
    n = len(sent.tokens)
    depth: dict[int, int] = {}

    def depth_of(tid: int) -> int:
        if tid in depth:
            return depth[tid]
        chain = []
        cur = tid
        while cur not in depth:
            chain.append(cur)
            head = sent.tokens[cur - 1].head
            if head is None or head == 0 or not 1 <= head <= n:
                depth[cur] = 1  # roots and unattached tokens float at depth 1
                break
            cur = head
        for tid2 in reversed(chain):
            head = sent.tokens[tid2 - 1].head
            if tid2 not in depth:
                depth[tid2] = depth[head] + 1
        return depth[tid]

    slot = max((_footprint(t) for t in sent.tokens), default=1.0) + GAP
    nodes = []
    for t in sent.tokens:
        nodes.append(
            Node(t.id, slot * (t.id - 0.5), float(depth_of(t.id)), t.form, t.upos)
        )
    edges = []
    for head, dep in _drawable_edges(sent):
        node = nodes[dep - 1]
        if head == 0:
            anchors = ((node.x, 0.0), (node.x, node.y))
        else:
            parent = nodes[head - 1]
            anchors = ((parent.x, parent.y), (node.x, node.y))
        edges.append(Edge(head, dep, sent.tokens[dep - 1].deprel, int(node.y), anchors))
    edges.sort(key=lambda e: e.dep_id)
    total_height = max((nd.y for nd in nodes), default=0.0)
    return ArcDiagram("tree_vertical", tuple(nodes), tuple(edges), slot * n, total_height)


def layout(sent: Sentence, mode: str) -> ArcDiagram:
    """Compute the diagram geometry for one sentence in the given mode."""
    if mode not in MODES:
        raise ValueError(f"unknown layout mode {mode!r}; expected one of {MODES}")
    cycle = head_cycle(sent.tokens)
    if cycle is not None:
        raise CyclicGraph(
            "cannot lay out a cyclic head graph (tokens "
            + ", ".join(str(i) for i in sorted(cycle))
            + ")"
        )
    if mode == "tree_vertical":
        return _vertical(sent)
    return _horizontal(sent, mode)


# --- SVG rendering (for the `render` CLI subcommand) -------------------------

X_SCALE = 9.0
ARC_STEP = 26.0
ROW_STEP = 64.0
MARGIN = 20.0
FONT = 13


def _esc(s: str) -> str:
    return (
        s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def render_svg(diagram: ArcDiagram) -> str:
    """A small standalone SVG document of the computed geometry."""
    horizontal = diagram.mode != "tree_vertical"
    step = ARC_STEP if horizontal else ROW_STEP
    sky = diagram.height * step
    width = diagram.width * X_SCALE + 2 * MARGIN
    height = sky + 2 * MARGIN + 2.2 * FONT + (0 if horizontal else ROW_STEP)

    def px(x: float) -> float:
        return MARGIN + x * X_SCALE

    def py(y: float) -> float:
        # horizontal: arcs rise above the baseline; vertical: depth grows down
        return MARGIN + (sky - y * step if horizontal else y * step)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" font-family="monospace" font-size="{FONT}">'
    ]
    for e in diagram.edges:
        pts = [(px(x), py(y)) for x, y in e.anchors]
        if len(pts) == 3:
            d = (
                f"M {pts[0][0]:.1f} {pts[0][1]:.1f} "
                f"Q {pts[1][0]:.1f} {pts[1][1]:.1f} {pts[2][0]:.1f} {pts[2][1]:.1f}"
            )
        else:
            d = f"M {pts[0][0]:.1f} {pts[0][1]:.1f} L {pts[-1][0]:.1f} {pts[-1][1]:.1f}"
        parts.append(f'<path d="{d}" fill="none" stroke="#555"/>')
        if e.deprel:
            lx, ly = pts[len(pts) // 2]
            parts.append(
                f'<text x="{lx:.1f}" y="{ly - 3:.1f}" text-anchor="middle" '
                f'fill="#a33">{_esc(e.deprel)}</text>'
            )
    for node in diagram.nodes:
        x = px(node.x)
        y = py(node.y) if not horizontal else py(0) + FONT + 4
        parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="middle">{_esc(node.label)}</text>'
        )
        if node.sublabel:
            parts.append(
                f'<text x="{x:.1f}" y="{y + FONT:.1f}" text-anchor="middle" '
                f'fill="#777">{_esc(node.sublabel)}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
