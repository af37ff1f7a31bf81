"""Planar projection, crossing extraction, and crossing codes.

Crossings come from a generic orthographic projection (straight down z
or along the current view).  Each transverse intersection of two
non-adjacent projected edges becomes a crossing with over/under
resolved by depth toward the viewer and handedness by the 2D
orientation of (over direction, under direction).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateProjection, MultiComponent
from .polylink import ViewTransform

GENERIC_TOL = 1e-9


def projection_axes(proj):
    """(u, v, depth) rows for a projection spec.

    proj is "z" or a ViewTransform (orthographic view direction).
    Screen position is (p.u, p.v); larger p.depth is nearer the viewer.
    """
    if proj is None or (isinstance(proj, str) and proj == "z"):
        return np.eye(3)
    if isinstance(proj, ViewTransform):
        return proj.rotation.copy()
    arr = np.asarray(proj, dtype=float)
    if arr.shape == (3, 3):
        return arr.copy()
    raise ValueError("projection must be 'z', a ViewTransform, or a basis")


@dataclass
class Crossing:
    position: tuple               # 2D screen point
    over: tuple                   # (component, arc parameter)
    under: tuple
    handedness: int               # +1 / -1


@dataclass
class CrossingDiagram:
    crossings: list = field(default_factory=list)
    passages: list = field(default_factory=list)
    # passages[c] = ordered [(crossing index, 'O'|'U', arc parameter), ...]

    @property
    def ncrossings(self):
        return len(self.crossings)


def _gather_edges(link, visible_only):
    """2D endpoints, depths and (component, local edge) table."""
    rows = []
    for ci, c in enumerate(link.components):
        if visible_only and c.hidden:
            continue
        n = c.nbeads
        for k in range(c.nedges):
            rows.append((ci, k, c.vertices[k], c.vertices[(k + 1) % n]))
    return rows


def project_crossings(link, proj="z", visible_only=False):
    """Extract the crossing diagram of a generic projection.

    Raises DegenerateProjection (jitter the link) on vertex-over-edge
    contacts, overlapping parallel edges, unresolvable depths, or near
    triple points, using a 1e-9 relative tolerance.
    """
    axes = projection_axes(proj)
    u, v, w = axes[0], axes[1], axes[2]
    rows = _gather_edges(link, visible_only)
    ne = len(rows)
    if ne == 0:
        return CrossingDiagram([], [[] for _ in link.components])
    a2 = np.empty((ne, 2))
    b2 = np.empty((ne, 2))
    za = np.empty(ne)
    zb = np.empty(ne)
    comp = np.empty(ne, dtype=int)
    local = np.empty(ne, dtype=int)
    for i, (ci, k, p, q) in enumerate(rows):
        a2[i] = (p @ u, p @ v)
        b2[i] = (q @ u, q @ v)
        za[i] = p @ w
        zb[i] = q @ w
        comp[i] = ci
        local[i] = k
    scale = max(np.abs(np.concatenate([a2, b2])).max(), 1.0)
    tol = GENERIC_TOL

    dirs = b2 - a2
    seglen = np.linalg.norm(dirs, axis=1)
    if (seglen < tol * scale).any():
        raise DegenerateProjection(
            "an edge projects to a point; jitter the link")

    # vertex ids to skip adjacent pairs
    vert_id = {}
    first = np.empty(ne, dtype=int)
    second = np.empty(ne, dtype=int)
    counter = 0
    for i, (ci, k, _, _) in enumerate(rows):
        nverts = link.components[ci].nbeads
        for slot, vk in ((0, k), (1, (k + 1) % nverts)):
            key = (ci, vk)
            if key not in vert_id:
                vert_id[key] = counter
                counter += 1
            (first if slot == 0 else second)[i] = vert_id[key]

    ii, jj = np.triu_indices(ne, k=1)
    adj = ((first[ii] == first[jj]) | (first[ii] == second[jj])
           | (second[ii] == first[jj]) | (second[ii] == second[jj]))
    ii, jj = ii[~adj], jj[~adj]

    # quick reject on bounding boxes
    lo_i = np.minimum(a2[ii], b2[ii])
    hi_i = np.maximum(a2[ii], b2[ii])
    lo_j = np.minimum(a2[jj], b2[jj])
    hi_j = np.maximum(a2[jj], b2[jj])
    margin = tol * scale
    near = np.all((lo_i <= hi_j + margin) & (lo_j <= hi_i + margin), axis=1)
    ii, jj = ii[near], jj[near]

    def cross2(p, q):
        return p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0]

    crossings = []
    for i, j in zip(ii, jj):
        d1 = dirs[i]
        d2 = dirs[j]
        det = cross2(d1, d2)
        rel = a2[j] - a2[i]
        if abs(det) <= tol * seglen[i] * seglen[j]:
            # parallel: overlapping projections are non-generic
            offs = abs(cross2(rel, d1)) / seglen[i]
            if offs <= tol * scale:
                t0 = (rel @ d1) / seglen[i] ** 2
                t1 = ((b2[j] - a2[i]) @ d1) / seglen[i] ** 2
                if min(t0, t1) < 1.0 + tol and max(t0, t1) > -tol:
                    raise DegenerateProjection(
                        "parallel overlapping edges; jitter the link")
            continue
        s = cross2(rel, d2) / det
        t = cross2(rel, d1) / det
        window = tol * scale / min(seglen[i], seglen[j])
        inside_s = -window < s < 1.0 + window
        inside_t = -window < t < 1.0 + window
        if not (inside_s and inside_t):
            continue
        if not (window < s < 1.0 - window and window < t < 1.0 - window):
            raise DegenerateProjection(
                "a vertex lies on another projected edge; jitter the link")
        pos2 = a2[i] + s * d1
        zi = za[i] + s * (zb[i] - za[i])
        zj = za[j] + t * (zb[j] - za[j])
        if abs(zi - zj) <= tol * scale:
            raise DegenerateProjection(
                "edges touch along the projection axis; jitter the link")
        if zi > zj:
            oi, oparam = i, s
            ui_, uparam = j, t
        else:
            oi, oparam = j, t
            ui_, uparam = i, s
        sign = 1 if cross2(dirs[oi], dirs[ui_]) > 0 else -1
        crossings.append(Crossing(
            position=(float(pos2[0]), float(pos2[1])),
            over=(int(comp[oi]), float(local[oi] + oparam)),
            under=(int(comp[ui_]), float(local[ui_] + uparam)),
            handedness=sign))

    # near triple points: two crossings closer than tolerance
    pts = np.array([c.position for c in crossings]) \
        if crossings else np.zeros((0, 2))
    for i in range(len(crossings)):
        d = np.linalg.norm(pts[i + 1:] - pts[i], axis=1)
        if len(d) and d.min() <= tol * scale:
            raise DegenerateProjection(
                "crossings coincide (triple point?); jitter the link")

    passages = [[] for _ in link.components]
    for idx, c in enumerate(crossings):
        passages[c.over[0]].append((idx, "O", c.over[1]))
        passages[c.under[0]].append((idx, "U", c.under[1]))
    for plist in passages:
        plist.sort(key=lambda entry: entry[2])
    return CrossingDiagram(crossings, passages)


def xing(link, proj="z"):
    """Crossing count of the projection."""
    return project_crossings(link, proj).ncrossings


def dowker(link, proj="z"):
    """Raw Dowker-Thistlethwaite code from bead 0 of the one component.

    Passages are labelled 1..2n along the curve; the code lists the
    even partner of each odd label 1, 3, 5, ..., negated when the even
    passage goes over.  No basepoint/orientation canonicalisation is
    applied, so compare codes up to cyclic relabelling, reversal, and a
    global sign flip.  Worked example: the standard 3-crossing trefoil
    diagram pairs 1-4, 3-6, 5-2 with every even passage under, giving
    4 6 2.
    """
    if link.ncomponents != 1 or not link.components[0].closed:
        raise MultiComponent("Dowker codes need a single closed component")
    diagram = project_crossings(link, proj)
    passages = diagram.passages[0]
    labels = {}
    over_flag = {}
    for label0, (cid, flag, _) in enumerate(passages):
        label = label0 + 1
        labels.setdefault(cid, []).append(label)
        over_flag[(cid, label)] = flag == "O"
    code = []
    for odd in range(1, 2 * diagram.ncrossings, 2):
        for cid, pair in labels.items():
            if odd in pair:
                even = pair[0] if pair[1] == odd else pair[1]
                value = -even if over_flag[(cid, even)] else even
                code.append(value)
                break
    return code


def gauss_extended(link, proj="z"):
    """Extended Gauss code tokens per component.

    Token grammar: O|U, crossing id (first-encounter order scanning
    components in index order, 1-based), and +/- handedness.
    """
    diagram = project_crossings(link, proj)
    ids = {}
    tokens = []
    for plist in diagram.passages:
        row = []
        for cid, flag, _ in plist:
            if cid not in ids:
                ids[cid] = len(ids) + 1
            sign = "+" if diagram.crossings[cid].handedness > 0 else "-"
            row.append("%s%d%s" % (flag, ids[cid], sign))
        tokens.append(row)
    return tokens


def format_dt(code):
    return " ".join(str(x) for x in code)


def format_egc(tokens):
    return " / ".join(", ".join(row) for row in tokens)
