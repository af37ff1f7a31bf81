"""Vector knot-diagram output (Encapsulated PostScript).

Strands are drawn in the diagram projection with the under-strand
broken at every crossing; the gap length is pserase times the strand
width, centered on the crossing.  Three styles: 40 plain broken
strokes, 41 white-filled outlined strands, 45 color-filled bands with
dark edges.
"""

from dataclasses import dataclass

import numpy as np

from . import codes, spline
from .colors import auto_color
from .errors import EmptyLink, UnsupportedMode
from .polylink import Component, PolyLink

POINT_SIZE = 432.0          # longer bbox side, in points


@dataclass
class EpsOptions:
    psmode: int = 40
    pserase: float = 1.5
    bbox: str = "tight"             # tight | square
    strand_width: float = 0.3       # model units
    display_mode: str = "s"         # s smooths with ncur points per edge
    ncur: int = 5

    def __post_init__(self):
        if self.psmode not in (40, 41, 45):
            raise UnsupportedMode("psmode must be 40, 41 or 45")
        if self.pserase < 0:
            raise UnsupportedMode("pserase must be >= 0")
        if self.bbox not in ("tight", "square"):
            raise UnsupportedMode("bbox must be tight or square")


def _drawn_link(link, opts):
    """The polyline actually drawn (smoothed in mode s)."""
    comps = []
    for c in link.components:
        if c.hidden:
            continue
        if opts.display_mode == "s" and c.nedges >= 2:
            pts = spline.dense_curve(c.vertices, c.closed, opts.ncur)
        else:
            pts = c.vertices
        comps.append(Component(pts, closed=c.closed, color=c.color))
    return PolyLink(comps)


def _arc_lengths(pts, closed):
    if closed:
        seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    else:
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _point_at(pts, closed, arc, cum):
    """Point at an arclength along the polyline."""
    total = cum[-1]
    if closed:
        arc = arc % total
    arc = min(max(arc, 0.0), total)
    k = int(np.searchsorted(cum, arc, side="right") - 1)
    k = min(k, len(cum) - 2)
    seg = cum[k + 1] - cum[k]
    t = 0.0 if seg <= 0 else (arc - cum[k]) / seg
    a = pts[k]
    b = pts[(k + 1) % len(pts)]
    return a + t * (b - a)


def _cut_paths(pts, closed, gap_arcs, gap_len, cum):
    """Kept sub-paths after removing gap intervals.

    Returns (paths, closed_path): with no gaps a closed component stays
    one closed path, otherwise the curve splits at every gap (and at
    the basepoint), one open path per kept stretch.
    """
    total = cum[-1]
    if not gap_arcs:
        return [pts], closed
    intervals = []
    for g in sorted(gap_arcs):
        lo, hi = g - gap_len / 2.0, g + gap_len / 2.0
        if closed:
            lo %= total
            hi %= total
            if lo <= hi:
                intervals.append((lo, hi))
            else:
                intervals.append((lo, total))
                intervals.append((0.0, hi))
        else:
            intervals.append((max(lo, 0.0), min(hi, total)))
    intervals.sort()
    merged = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    kept = []
    cursor = 0.0
    for lo, hi in merged:
        if lo > cursor:
            kept.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor < total:
        kept.append((cursor, total))
    paths = []
    for lo, hi in kept:
        if hi - lo <= 1e-12:
            continue
        i0 = int(np.searchsorted(cum, lo, side="right"))
        i1 = int(np.searchsorted(cum, hi, side="left"))
        inner = [pts[k % len(pts)] for k in range(i0, i1)]
        path = [_point_at(pts, closed, lo, cum)] + inner \
            + [_point_at(pts, closed, hi, cum)]
        paths.append(np.array(path))
    return paths, False


def render_paths(link, proj="z", opts=None):
    """Per-component draw data: (2D paths, is_closed, color, gap count)."""
    opts = opts or EpsOptions()
    drawn = _drawn_link(link, opts)
    if drawn.ncomponents == 0:
        raise EmptyLink("nothing visible to draw")
    diagram = codes.project_crossings(drawn, proj)
    axes = codes.projection_axes(proj)
    u, v = axes[0], axes[1]
    out = []
    gap_len = opts.pserase * opts.strand_width
    for ci, c in enumerate(drawn.components):
        pts3 = c.vertices
        pts2 = np.stack([pts3 @ u, pts3 @ v], axis=1)
        cum = _arc_lengths(pts2, c.closed)
        unders = [entry for entry in diagram.passages[ci]
                  if entry[1] == "U"]
        gap_arcs = []
        for cid, _, param in unders:
            k = int(param)
            frac = param - k
            seg = cum[k + 1] - cum[k]
            gap_arcs.append(cum[k] + frac * seg)
        paths, closed_path = _cut_paths(pts2, c.closed, gap_arcs,
                                        gap_len, cum)
        color = c.color if c.color is not None else auto_color(ci)
        out.append((paths, closed_path, color, len(unders)))
    return out


def psout(link, proj="z", opts=None):
    """Encapsulated PostScript diagram; byte-deterministic."""
    opts = opts or EpsOptions()
    comps = render_paths(link, proj, opts)
    allpts = np.concatenate([p for paths, _, _, _ in comps for p in paths])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    margin = max(opts.strand_width * 2.0, 1e-6)
    lo -= margin
    hi += margin
    if opts.bbox == "square":
        side = max(hi[0] - lo[0], hi[1] - lo[1])
        cx, cy = (lo + hi) / 2.0
        lo = np.array([cx - side / 2.0, cy - side / 2.0])
        hi = np.array([cx + side / 2.0, cy + side / 2.0])
    span = max(hi[0] - lo[0], hi[1] - lo[1])
    unit = POINT_SIZE / span
    bx = int(np.ceil((hi[0] - lo[0]) * unit))
    by = int(np.ceil((hi[1] - lo[1]) * unit))

    def pt(p):
        return ((p[0] - lo[0]) * unit, (p[1] - lo[1]) * unit)

    lw = opts.strand_width * unit
    lines = [
        "%!PS-Adobe-3.0 EPSF-3.0",
        "%%BoundingBox: 0 0 " + "%d %d" % (bx, by),
        "%%Title: knot diagram",
        "%%Creator: knotforge",
        "%%EndComments",
        "gsave",
        "1 setlinejoin 0 setlinecap",
    ]

    def emit_path(path, close):
        x, y = pt(path[0])
        lines.append("newpath %.3f %.3f moveto" % (x, y))
        for p in path[1:]:
            x, y = pt(p)
            lines.append("%.3f %.3f lineto" % (x, y))
        if close:
            lines.append("closepath")

    for ci, (paths, closed_path, color, ngaps) in enumerate(comps):
        lines.append("%% component %d paths %d gaps %d"
                     % (ci, len(paths), ngaps))
        for path in paths:
            if opts.psmode == 40:
                emit_path(path, closed_path)
                lines.append("%.4f %.4f %.4f setrgbcolor" % color)
                lines.append("%.3f setlinewidth stroke" % lw)
            elif opts.psmode == 41:
                emit_path(path, closed_path)
                lines.append("0 0 0 setrgbcolor")
                lines.append("%.3f setlinewidth stroke" % (lw * 1.3))
                emit_path(path, closed_path)
                lines.append("1 1 1 setrgbcolor")
                lines.append("%.3f setlinewidth stroke" % (lw * 0.8))
            else:   # 45: filled band with dark edges
                emit_path(path, closed_path)
                lines.append("0 0 0 setrgbcolor")
                lines.append("%.3f setlinewidth stroke" % (lw * 1.3))
                emit_path(path, closed_path)
                lines.append("%.4f %.4f %.4f setrgbcolor" % color)
                lines.append("%.3f setlinewidth stroke" % (lw * 0.9))
    lines.append("grestore")
    lines.append("showpage")
    lines.append("%%EOF")
    return ("\n".join(lines) + "\n").encode("ascii")
