"""Bead-count and topology surgery on links.

Bead edits (split, nbeads, refine, jitter) change sampling along the
curve; topology edits (cut, join, open, close, shift, ...) change the
component structure.  Both always return new links with densely
renumbered components.
"""

import numpy as np

from . import rng, spline
from .errors import (BadCount, BadFactor, BadIndex, CloseTooShort,
                     JoinOnClosedComponent, TooFewBeads)
from .polylink import Component, PolyLink


# ---------------------------------------------------------------------------
# bead edits

def split(link):
    """Insert a midpoint into every edge (curve point set unchanged)."""
    out = []
    for c in link.components:
        v = c.vertices
        n = len(v)
        if c.nedges == 0:
            out.append(c.with_vertices(v))
            continue
        nxt = np.roll(v, -1, axis=0) if c.closed else v[1:]
        base = v if c.closed else v[:-1]
        mids = (base + nxt) / 2.0
        woven = np.empty((len(base) * 2, 3))
        woven[0::2] = base
        woven[1::2] = mids
        if not c.closed:
            woven = np.concatenate([woven, v[-1:]])
        out.append(c.with_vertices(woven))
    return link.with_components(out)


def _resample_component(c, count):
    if c.nedges == 0:
        raise TooFewBeads("cannot resample a single bead")
    return c.with_vertices(spline.resample(c.vertices, c.closed, count))


def nbeads(link, mode, value):
    """Re-bead along the interpolating spline.

    mode 'delta' adds value beads to each component, 'mult' multiplies
    each component's count, 'absolute' distributes a total of value
    beads across components proportionally.
    """
    counts = [c.nbeads for c in link.components]
    if mode == "delta":
        new = [n + int(value) for n in counts]
    elif mode == "mult":
        if value <= 0:
            raise BadFactor("multiplier must be positive")
        new = [int(round(n * value)) for n in counts]
    elif mode == "absolute":
        total = sum(counts)
        if total == 0:
            raise BadCount("nothing to resample")
        new = [max(int(round(value * n / total)), 1) for n in counts]
    else:
        raise BadFactor("unknown nbeads mode %r" % (mode,))
    out = []
    for c, cnt in zip(link.components, new):
        if cnt < (3 if c.closed else 2):
            raise TooFewBeads("resampling below the minimum bead count")
        out.append(_resample_component(c, cnt))
    return link.with_components(out)


def refine(link, factor):
    """Spline-resample every component to factor times the bead count."""
    if factor < 1:
        raise BadFactor("refine factor must be >= 1")
    return nbeads(link, "mult", factor)


def refine_equilateral(link, target):
    """Re-bead to approximately equal edge lengths near target."""
    if target <= 0:
        raise BadFactor("target edge length must be positive")
    out = []
    for c in link.components:
        if c.nedges == 0:
            out.append(c.with_vertices(c.vertices))
            continue
        out.append(c.with_vertices(
            spline.resample_equilateral(c.vertices, c.closed, target)))
    return link.with_components(out)


def jitter(link, magnitude, seed):
    """Move every bead by an independent uniform vector of norm <= magnitude."""
    if magnitude < 0:
        raise BadFactor("jitter magnitude must be >= 0")
    if magnitude == 0:
        return link.with_components(link.components)
    g = rng.generator(seed)
    out = []
    for c in link.components:
        offs = rng.uniform_ball(g, c.nbeads, magnitude)
        out.append(c.with_vertices(c.vertices + offs))
    return link.with_components(out)


# ---------------------------------------------------------------------------
# topology edits

def _pieces_to_components(template, pieces):
    """Open components from vertex runs, inheriting template's look."""
    out = []
    for run in pieces:
        if len(run) == 0:
            continue
        out.append(Component(run, closed=False, color=template.color,
                             hidden=template.hidden))
    return out


def cut(link, edge_index):
    """Delete the edge starting at the given global bead index."""
    flat = link.flatten()
    total = link.nbeads
    if not 0 <= edge_index < total:
        raise BadIndex("no bead %d" % edge_index)
    ci, k = flat.locate_vertex(edge_index)
    c = link.components[ci]
    if k >= c.nedges:
        raise BadIndex("bead %d starts no edge" % edge_index)
    v = c.vertices
    out = list(link.components)
    if c.closed:
        rolled = np.roll(v, -(k + 1), axis=0)
        out[ci] = Component(rolled, closed=False, color=c.color,
                            hidden=c.hidden)
    else:
        first, second = v[:k + 1], v[k + 1:]
        out[ci:ci + 1] = _pieces_to_components(c, [first, second])
    return link.with_components(out)


def cut_outside(link, axis, offset):
    """Remove every edge lying entirely on the positive side of a plane."""
    if axis not in "xyz":
        raise BadIndex("axis must be x, y or z")
    ax = "xyz".index(axis)
    out = []
    for c in link.components:
        v = c.vertices
        n = len(v)
        keep = []
        for k in range(c.nedges):
            a, b = v[k], v[(k + 1) % n]
            keep.append(not (a[ax] > offset and b[ax] > offset))
        if all(keep):
            out.append(c.with_vertices(v))
            continue
        if not any(keep):
            out.extend(_pieces_to_components(c, [v[i:i + 1]
                                                 for i in range(n)]))
            continue
        # walk runs of kept edges; start just after a removed edge
        removed = [i for i, kf in enumerate(keep) if not kf]
        start = (removed[0] + 1) % n if c.closed else 0
        runs = []
        run = [start]
        for step in range(c.nedges):
            k = (start + step) % n if c.closed else step
            tgt = (k + 1) % n
            if keep[k]:
                if not run:
                    run = [k]
                run.append(tgt)
            else:
                if run:
                    runs.append(run)
                run = []
        if run:
            runs.append(run)
        pieces = [v[np.array(r)] for r in runs if len(r) >= 1]
        covered = set(i for r in runs for i in r)
        singles = [v[i:i + 1] for i in range(n) if i not in covered]
        out.extend(_pieces_to_components(c, pieces + singles))
    return PolyLink(out, head_visible=link.head_visible)


def cut_pieces(link, n):
    """Cut each component into n open pieces of near-equal edge count."""
    if n < 1:
        raise BadCount("piece count must be >= 1")
    out = []
    for c in link.components:
        m = c.nedges
        ncuts = n if c.closed else n - 1
        if ncuts == 0:
            out.append(c.with_vertices(c.vertices))
            continue
        if (c.closed and n > m) or (not c.closed and n > m + 1):
            raise BadCount("component has too few edges for %d pieces" % n)
        v = c.vertices
        nv = len(v)
        if c.closed:
            bounds = [int(round(i * m / n)) for i in range(n)]
            for p in range(n):
                lo = bounds[p]
                hi = bounds[p + 1] if p + 1 < n else m
                if hi <= lo:
                    continue
                idx = [(b + 1) % nv for b in range(lo, hi)]
                out.extend(_pieces_to_components(c, [v[np.array(idx)]]))
        else:
            cuts = [int(round(i * m / n)) for i in range(1, n)]
            prev = 0
            for b in cuts + [m]:
                if b < prev:
                    continue
                idx = list(range(prev, b + 1))      # piece ends at vertex b
                if idx:
                    out.extend(_pieces_to_components(c, [v[np.array(idx)]]))
                prev = b + 1
    return PolyLink(out, head_visible=link.head_visible)


def _parse_end_ref(ref):
    ref = ref.strip().upper()
    if len(ref) < 2 or ref[0] not in "FL" or not ref[1:].isdigit():
        raise BadIndex("endpoint must look like F0 or L3")
    return ref[0], int(ref[1:])


def join(link, ref_a, ref_b):
    """Connect two open endpoints (F<i>/L<i>) with a new edge.

    Distinct components merge into one open chain; naming the two ends
    of one component closes it.
    """
    ea, ia = _parse_end_ref(ref_a)
    eb, ib = _parse_end_ref(ref_b)
    ca = link.component(ia)
    cb = link.component(ib)
    if ca.closed or cb.closed:
        raise JoinOnClosedComponent("both components must be open")
    if ia == ib:
        if ea == eb:
            raise BadIndex("cannot join an endpoint to itself")
        return close_component(link, ia)
    va = ca.vertices if ea == "L" else ca.vertices[::-1]
    vb = cb.vertices if eb == "F" else cb.vertices[::-1]
    merged = Component(np.concatenate([va, vb]), closed=False,
                       color=ca.color, hidden=ca.hidden)
    out = [merged if i == ia else c
           for i, c in enumerate(link.components) if i != ib]
    return PolyLink(out, head_visible=link.head_visible)


def open_component(link, which):
    """Remove the closing edge (between the last bead and bead 0)."""
    out = list(link.components)
    idxs = range(len(out)) if which == "all" else [which]
    for i in idxs:
        c = link.component(i)
        if c.closed:
            out[i] = Component(c.vertices, closed=False, color=c.color,
                               hidden=c.hidden)
    return PolyLink(out, head_visible=link.head_visible)


def close_component(link, which):
    out = list(link.components)
    idxs = range(len(out)) if which == "all" else [which]
    for i in idxs:
        c = link.component(i)
        if c.closed:
            continue
        if c.nbeads < 3:
            raise CloseTooShort("need >= 3 beads to close")
        out[i] = Component(c.vertices, closed=True, color=c.color,
                           hidden=c.hidden)
    return PolyLink(out, head_visible=link.head_visible)


def shift(link, amount):
    """Relabel beads on closed components so old bead k becomes bead 0.

    amount may also be one of maxx/minx/maxy/miny/maxz/minz to put
    bead 0 at the named extreme.
    """
    out = []
    for c in link.components:
        if not c.closed:
            out.append(c.with_vertices(c.vertices, keep_anchors=True))
            continue
        if isinstance(amount, str):
            key = amount.lower()
            if key not in ("maxx", "minx", "maxy", "miny", "maxz", "minz"):
                raise BadIndex("unknown shift target %r" % (amount,))
            ax = "xyz".index(key[-1])
            col = c.vertices[:, ax]
            k = int(np.argmax(col) if key.startswith("max")
                    else np.argmin(col))
        else:
            k = int(amount) % c.nbeads
        out.append(Component(np.roll(c.vertices, -k, axis=0), closed=True,
                             color=c.color, hidden=c.hidden))
    return PolyLink(out, head_visible=link.head_visible)


def revbeads(link, which="all"):
    out = list(link.components)
    idxs = range(len(out)) if which == "all" else [which]
    for i in idxs:
        c = link.component(i)
        nc = Component(c.vertices[::-1], closed=c.closed, color=c.color,
                       hidden=c.hidden)
        if c.anchors is not None:
            nc.anchors = c.anchors[::-1].copy()
            nc.anchor_mask = c.anchor_mask[::-1].copy()
        out[i] = nc
    return PolyLink(out, head_visible=link.head_visible)


def duplicate(link, which=0):
    c = link.component(which)
    copy = Component(c.vertices.copy(), closed=c.closed, color=c.color,
                     hidden=c.hidden)
    return PolyLink(list(link.components) + [copy],
                    head_visible=link.head_visible)


def delete_components(link, which):
    if which == "all":
        return PolyLink([], head_visible=link.head_visible)
    link.component(which)
    out = [c for i, c in enumerate(link.components) if i != which]
    return PolyLink(out, head_visible=link.head_visible)


def keep_component(link, which):
    c = link.component(which)
    return PolyLink([c], head_visible=link.head_visible)


def swap(link, i, j):
    link.component(i)
    link.component(j)
    out = list(link.components)
    out[i], out[j] = out[j], out[i]
    return PolyLink(out, head_visible=link.head_visible)


def swap_random(link, seed):
    """Randomly permute component numbering (identity allowed)."""
    g = rng.generator(seed)
    perm = g.permutation(link.ncomponents)
    out = [link.components[k] for k in perm]
    return PolyLink(out, head_visible=link.head_visible)
