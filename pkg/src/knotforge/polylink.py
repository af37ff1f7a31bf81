"""Polygonal link data model and whole-link geometric operations.

A link is an ordered list of components; a component is an ordered run
of beads (vertices) that is either closed (edge n joins vertex n to
vertex n+1 mod count) or open.  Components carry display color, a
hidden flag, and optional per-bead anchor points used by the anchor
force.  Operations never mutate their inputs: they return new links.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels, rng
from .errors import (BadComponentIndex, BadIndex, BadScale, BadSpec,
                     DegenerateInertia, DegenerateLink, EmptyLink,
                     NoNonadjacentPairs, ZeroScale)


def as_vec3(value):
    v = np.asarray(value, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(v)):
        raise BadSpec("coordinates must be finite")
    return v


@dataclass
class Component:
    """One open or closed polygonal curve."""

    vertices: np.ndarray
    closed: bool = True
    color: tuple | None = None
    hidden: bool = False
    anchors: np.ndarray | None = None
    anchor_mask: np.ndarray | None = None
    pinned: np.ndarray | None = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64, copy=True)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 1:
            raise BadSpec("component needs an (n, 3) vertex array")
        if not np.all(np.isfinite(v)):
            raise BadSpec("vertices must be finite")
        self.vertices = v
        n = len(v)
        if self.closed and n < 3:
            raise BadSpec("closed component needs at least 3 vertices")
        diffs = np.diff(v, axis=0)
        if n > 1 and (np.einsum("ij,ij->i", diffs, diffs) == 0.0).any():
            raise BadSpec("consecutive vertices coincide")
        if self.closed and n >= 2 and np.all(v[0] == v[-1]):
            raise BadSpec("consecutive vertices coincide")
        if self.anchors is not None:
            a = np.array(self.anchors, dtype=np.float64, copy=True)
            if a.shape != v.shape:
                raise BadSpec("anchors must match the vertex count")
            self.anchors = a
            if self.anchor_mask is None:
                self.anchor_mask = np.ones(n, dtype=bool)
            else:
                m = np.array(self.anchor_mask, dtype=bool, copy=True)
                if m.shape != (n,):
                    raise BadSpec("anchor mask must match the vertex count")
                self.anchor_mask = m
        elif self.anchor_mask is not None:
            raise BadSpec("anchor mask without anchors")
        if self.pinned is not None:
            pm = np.array(self.pinned, dtype=bool, copy=True)
            if pm.shape != (n,):
                raise BadSpec("pinned mask must match the vertex count")
            self.pinned = pm

    @property
    def nbeads(self):
        return len(self.vertices)

    @property
    def nedges(self):
        n = len(self.vertices)
        return n if self.closed else n - 1

    def edge_lengths(self):
        v = self.vertices
        if self.closed:
            d = np.roll(v, -1, axis=0) - v
        else:
            d = np.diff(v, axis=0)
        return np.linalg.norm(d, axis=1)

    def with_vertices(self, vertices, closed=None, keep_anchors=False):
        """Copy carrying flags/color; anchors and pins drop unless kept
        and the bead count still matches."""
        anchors = None
        mask = None
        pinned = None
        if keep_anchors and len(vertices) == self.nbeads:
            if self.anchors is not None:
                anchors = self.anchors
                mask = self.anchor_mask
            pinned = self.pinned
        return Component(vertices,
                         closed=self.closed if closed is None else closed,
                         color=self.color, hidden=self.hidden,
                         anchors=anchors, anchor_mask=mask, pinned=pinned)


@dataclass
class PolyLink:
    """An ordered collection of components (the embedding)."""

    components: list = field(default_factory=list)
    head_visible: int | None = None    # display cap: show first n beads only

    def __post_init__(self):
        self.components = list(self.components)

    @property
    def ncomponents(self):
        return len(self.components)

    @property
    def nbeads(self):
        return sum(c.nbeads for c in self.components)

    @property
    def nedges(self):
        return sum(c.nedges for c in self.components)

    def component(self, index):
        if not isinstance(index, (int, np.integer)) \
                or not 0 <= index < len(self.components):
            raise BadComponentIndex("no component %r" % (index,))
        return self.components[index]

    def with_components(self, components):
        return PolyLink(list(components), head_visible=self.head_visible)

    def map_vertices(self, fn, comp=None, keep_anchors=False):
        """Apply fn to each (n,3) vertex array; anchors transform alongside
        when kept."""
        out = []
        for i, c in enumerate(self.components):
            if comp is not None and i != comp:
                out.append(c)
                continue
            nc = Component(fn(c.vertices), closed=c.closed, color=c.color,
                           hidden=c.hidden)
            if keep_anchors:
                if c.anchors is not None:
                    nc.anchors = fn(c.anchors)
                    nc.anchor_mask = c.anchor_mask.copy()
                if c.pinned is not None:
                    nc.pinned = c.pinned.copy()
            out.append(nc)
        return self.with_components(out)

    def all_vertices(self):
        if not self.components:
            return np.zeros((0, 3))
        return np.concatenate([c.vertices for c in self.components])

    def flatten(self):
        return FlatLink(self)


class FlatLink:
    """Flattened arrays for the compiled kernels.

    positions: (N,3) float64; edges: (E,2) global vertex ids;
    edge_comp: component of each edge; nbr: per-vertex edge-connected
    neighbors (-1 padded); nxt: forward vertex along the component;
    vedges: per-vertex incident edge ids (-1 padded).
    """

    def __init__(self, link):
        comps = link.components
        offsets = []
        total = 0
        for c in comps:
            offsets.append(total)
            total += c.nbeads
        self.offsets = offsets
        self.link = link
        self.positions = (np.concatenate([c.vertices for c in comps])
                          if comps else np.zeros((0, 3)))
        edges = []
        edge_comp = []
        nbr = -np.ones((total, 2), dtype=np.int64)
        nxt = -np.ones(total, dtype=np.int64)
        vedges = -np.ones((total, 2), dtype=np.int64)

        def add_nbr(i, j):
            if nbr[i, 0] < 0:
                nbr[i, 0] = j
            else:
                nbr[i, 1] = j

        def add_vedge(i, e):
            if vedges[i, 0] < 0:
                vedges[i, 0] = e
            else:
                vedges[i, 1] = e

        for ci, c in enumerate(comps):
            base = offsets[ci]
            n = c.nbeads
            for k in range(c.nedges):
                u = base + k
                v = base + (k + 1) % n
                e = len(edges)
                edges.append((u, v))
                edge_comp.append(ci)
                add_nbr(u, v)
                add_nbr(v, u)
                add_vedge(u, e)
                add_vedge(v, e)
                nxt[u] = v
        self.edges = (np.array(edges, dtype=np.int64)
                      if edges else np.zeros((0, 2), dtype=np.int64))
        self.edge_comp = np.array(edge_comp, dtype=np.int64)
        self.nbr = nbr
        self.nxt = nxt
        self.vedges = vedges
        anch = np.zeros((total, 3))
        mask = np.zeros(total, dtype=bool)
        pinned = np.zeros(total, dtype=bool)
        for ci, c in enumerate(comps):
            base = offsets[ci]
            if c.anchors is not None:
                anch[base:base + c.nbeads] = c.anchors
                mask[base:base + c.nbeads] = c.anchor_mask
            if c.pinned is not None:
                pinned[base:base + c.nbeads] = c.pinned
        self.anchors = anch
        self.anch_mask = mask
        self.pinned = pinned

    def locate_vertex(self, gid):
        """Global vertex id -> (component index, local index)."""
        for ci in range(len(self.offsets) - 1, -1, -1):
            if gid >= self.offsets[ci]:
                return ci, gid - self.offsets[ci]
        raise BadIndex("vertex id out of range")

    def edge_ref(self, eid):
        """Global edge id -> (component index, local edge index)."""
        u = self.edges[eid, 0]
        ci, k = self.locate_vertex(u)
        return ci, k

    def rebuild_link(self, positions=None):
        """New PolyLink with the same structure and given positions."""
        pos = self.positions if positions is None else positions
        out = []
        for ci, c in enumerate(self.link.components):
            base = self.offsets[ci]
            out.append(c.with_vertices(pos[base:base + c.nbeads],
                                       keep_anchors=True))
        return self.link.with_components(out)


@dataclass
class ViewTransform:
    """Camera-side transform: never touches coordinates.

    `rotation` maps model coordinates into view space; `vscale` and
    `pan` apply after it.  With the identity transform the camera sits
    at (0, 0, camera_distance) looking down the z axis.
    """

    rotation: np.ndarray = field(
        default_factory=lambda: np.eye(3))
    vscale: float = 1.0
    pan: np.ndarray = field(default_factory=lambda: np.zeros(3))
    projection: str = "perspective"
    camera_distance: float = 8.0

    def __post_init__(self):
        self.rotation = np.array(self.rotation, dtype=np.float64)
        self.pan = np.array(self.pan, dtype=np.float64)
        if self.vscale <= 0:
            raise BadScale("vscale must be positive")
        if self.projection not in ("perspective", "orthographic"):
            raise BadSpec("projection must be perspective or orthographic")

    def view_coords(self, vertices):
        return (vertices @ self.rotation.T) * self.vscale + self.pan


def rotation_matrix(axis, degrees):
    t = np.radians(degrees)
    c, s = np.cos(t), np.sin(t)
    if axis == "x":
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=float)
    if axis == "y":
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]], dtype=float)
    if axis == "z":
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=float)
    raise BadSpec("axis must be x, y or z")


# ---------------------------------------------------------------------------
# distances

def seg_min_distance(p0, p1, q0, q1):
    """Exact minimum distance between two closed segments."""
    return float(kernels.seg_dist(as_vec3(p0), as_vec3(p1),
                                  as_vec3(q0), as_vec3(q1)))


def min_nonadjacent_distance(link):
    """Minimum distance over non-adjacent edge pairs.

    Returns (distance, ((comp_i, edge_i), (comp_j, edge_j))).  Edges
    are adjacent iff they share a vertex.
    """
    flat = link.flatten()
    dist, i, j = kernels.min_nonadjacent(flat.positions, flat.edges)
    if i < 0:
        raise NoNonadjacentPairs("every edge pair shares a vertex")
    return float(dist), (flat.edge_ref(i), flat.edge_ref(j))


# ---------------------------------------------------------------------------
# embedding transforms

def about(link, axis, degrees):
    """Rotate the embedding about a fixed coordinate axis."""
    m = rotation_matrix(axis, degrees)
    return link.map_vertices(lambda v: v @ m.T, keep_anchors=True)


def translate(link, dx, dy, dz, comp=None):
    off = np.array([dx, dy, dz], dtype=float)
    if comp is not None:
        link.component(comp)
    return link.map_vertices(lambda v: v + off, comp=comp,
                             keep_anchors=True)


def translate_to(link, target):
    """Rigidly move the link so vertex 0 of component 0 lands on target."""
    if not link.components:
        raise EmptyLink("nothing loaded")
    off = as_vec3(target) - link.components[0].vertices[0]
    return link.map_vertices(lambda v: v + off, keep_anchors=True)


def scale(link, sx, sy=None, sz=None):
    """Uniform scale, or non-proportional when three factors are given."""
    if sy is None:
        sy = sz = sx
    if sx == 0 or sy == 0 or sz == 0:
        raise ZeroScale("scale factor must be nonzero")
    f = np.array([sx, sy, sz], dtype=float)
    return link.map_vertices(lambda v: v * f, keep_anchors=True)


def reflect(link, axes, comp=None):
    """Flip the sign of the named coordinates ('x', 'yx', ...)."""
    axes = axes.lower()
    if not axes or any(a not in "xyz" for a in axes):
        raise BadSpec("reflect axes must be a combination of x, y, z")
    f = np.ones(3)
    for a in set(axes):
        f["xyz".index(a)] = -1.0
    if comp is not None:
        link.component(comp)
    return link.map_vertices(lambda v: v * f, comp=comp, keep_anchors=True)


def reflect_random(link, seed):
    """Reflect in one of the 7 nonempty axis subsets, chosen uniformly."""
    subsets = ["x", "y", "z", "xy", "xz", "yz", "xyz"]
    g = rng.generator(seed)
    return reflect(link, subsets[int(g.integers(0, 7))])


def project(link, direction):
    """Flatten onto the plane through the centroid normal to direction."""
    d = as_vec3(direction)
    norm = np.linalg.norm(d)
    if norm < 1e-12:
        raise BadSpec("projection direction must be nonzero")
    d = d / norm
    allv = link.all_vertices()
    if len(allv) == 0:
        raise EmptyLink("nothing loaded")
    level = float(np.mean(allv @ d))

    def flat(v):
        return v - np.outer(v @ d - level, d)

    return link.map_vertices(flat)


def project_random(link, seed):
    return project(link, rng.random_unit_vector(rng.generator(seed)))


def fitto(link, mode, value):
    """Rescale so an extent / clearance / mean edge target is met exactly."""
    if value <= 0:
        raise BadSpec("fitto value must be positive")
    allv = link.all_vertices()
    if len(allv) == 0:
        raise EmptyLink("nothing loaded")
    if mode == "extent":
        center = (allv.max(axis=0) + allv.min(axis=0)) / 2.0
        extent = np.abs(allv - center).max()
        if extent == 0:
            raise DegenerateLink("all vertices coincide")
        f = value / extent
        return link.map_vertices(lambda v: (v - center) * f)
    if mode == "mindist":
        dist, _ = min_nonadjacent_distance(link)
        if dist == 0:
            raise DegenerateLink("touching edges cannot be rescaled apart")
        f = value / dist
    elif mode == "avlength":
        lengths = np.concatenate([c.edge_lengths() for c in link.components
                                  if c.nedges > 0])
        mean = lengths.mean() if len(lengths) else 0.0
        if mean == 0:
            raise DegenerateLink("link has no edges")
        f = value / mean
    else:
        raise BadSpec("fitto mode must be extent, mindist or avlength")
    center = (allv.max(axis=0) + allv.min(axis=0)) / 2.0
    return link.map_vertices(lambda v: (v - center) * f + center)


def centre(link, mode="bbox"):
    allv = link.all_vertices()
    if len(allv) == 0:
        raise EmptyLink("nothing loaded")
    if mode == "bbox":
        c = (allv.max(axis=0) + allv.min(axis=0)) / 2.0
    elif mode == "mass":
        c = allv.mean(axis=0)
    else:
        raise BadSpec("centre mode must be bbox or mass")
    return link.map_vertices(lambda v: v - c, keep_anchors=True)


def align_axes(link, tol=1e-9):
    """Centre the mass and rotate principal spread onto the axes.

    The vertex covariance comes out diagonal with variances descending
    on x, y, z, so the flattest direction looks down z (a planar
    polygon ends up in the xy plane).  Returns (link, warning_or_None);
    a warning means two principal values coincide within tol and an
    arbitrary valid basis was used.
    """
    allv = link.all_vertices()
    if len(allv) == 0:
        raise EmptyLink("nothing loaded")
    c = allv.mean(axis=0)
    dev = allv - c
    cov = dev.T @ dev / len(dev)
    evals, evecs = np.linalg.eigh(cov)     # ascending
    order = [2, 1, 0]                      # descending onto x, y, z
    evals = evals[order]
    basis = evecs[:, order]
    warning = None
    span = max(abs(evals[0]), 1.0)
    if evals[0] - evals[1] < tol * span or evals[1] - evals[2] < tol * span:
        warning = "degenerate principal directions; basis not unique"
    # deterministic signs: biggest entry of each axis positive
    for k in range(3):
        col = basis[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            basis[:, k] = -col
    if np.linalg.det(basis) < 0:
        basis[:, 2] = -basis[:, 2]
    rot = basis.T
    return link.map_vertices(lambda v: (v - c) @ rot.T), warning


# ---------------------------------------------------------------------------
# visibility

def _component_indices(link, which):
    if which == "all":
        return list(range(link.ncomponents))
    link.component(which)
    return [which]


def set_hidden(link, which, hidden):
    out = list(link.components)
    for i in _component_indices(link, which):
        out[i] = replace(out[i], vertices=out[i].vertices.copy(),
                         hidden=hidden,
                         anchors=None if out[i].anchors is None
                         else out[i].anchors.copy(),
                         anchor_mask=None if out[i].anchor_mask is None
                         else out[i].anchor_mask.copy())
    return link.with_components(out)


def hide(link, which):
    return set_hidden(link, which, True)


def unhide(link, which):
    return set_hidden(link, which, False)


def head(link, count):
    """Show only the first count beads (None or 'off' shows everything).

    Display flag only: hidden beads still join every computation.
    """
    if count in (None, "off"):
        out = link.with_components(link.components)
        out.head_visible = None
        return out
    count = int(count)
    if count < 0:
        raise BadIndex("head count must be >= 0")
    out = link.with_components(link.components)
    out.head_visible = count
    return out


# ---------------------------------------------------------------------------
# view operations

def rotate_view(view, axis, degrees):
    """Rotate the camera: x/y/z about model axes, i/j/k about screen axes."""
    if axis in ("x", "y", "z"):
        m = rotation_matrix(axis, degrees)
        new_rot = view.rotation @ m
    elif axis in ("i", "j", "k"):
        # screen axes: i right, j up, k into the screen
        base = {"i": "x", "j": "y", "k": "z"}[axis]
        sign = -1.0 if axis == "k" else 1.0
        m = rotation_matrix(base, sign * degrees)
        new_rot = m @ view.rotation
    else:
        raise BadSpec("rotate axis must be one of x y z i j k")
    return replace(view, rotation=new_rot, pan=view.pan.copy())


def set_vscale(view, value):
    if value <= 0:
        raise BadScale("vscale must be positive")
    return replace(view, vscale=float(value),
                   rotation=view.rotation.copy(), pan=view.pan.copy())


def set_projection(view, mode):
    return replace(view, projection=mode,
                   rotation=view.rotation.copy(), pan=view.pan.copy())


def view_unit(view):
    """Reset rotation only."""
    return replace(view, rotation=np.eye(3), pan=view.pan.copy())


def view_untran(view):
    """Reset rotation and pan (the unrotated, untranslated view)."""
    return replace(view, rotation=np.eye(3), pan=np.zeros(3))


def rotate_fix(link, view):
    """Bake the view rotation into the coordinates.

    The picture on screen is unchanged, and a subsequent save/load
    reproduces the current orientation looking down z.
    """
    rot = view.rotation
    baked = link.map_vertices(lambda v: v @ rot.T, keep_anchors=True)
    return baked, replace(view, rotation=np.eye(3), pan=view.pan.copy())
