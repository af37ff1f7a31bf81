"""Geometric and topological quantities of a link.

The crossing-average quantities come from the signed solid angle each
non-adjacent edge pair sweeps on the direction sphere: acn sums the
absolute angles over all pairs, writhe the signed angles within each
component, and the linking matrix the signed angles across components.
"""

import numpy as np

from . import kernels
from .errors import (EmptyLink, GenericityFailure, TooFewComponents,
                     TouchingSegments)
from .polylink import as_vec3

TOUCH_EPS = 1e-12


def gauss_pair(p0, p1, q0, q1):
    """Signed solid angle of the Gauss map over one segment pair."""
    p0, p1, q0, q1 = as_vec3(p0), as_vec3(p1), as_vec3(q0), as_vec3(q1)
    scale = max(np.abs(np.concatenate([p0, p1, q0, q1])).max(), 1.0)
    if kernels.seg_dist(p0, p1, q0, q1) < TOUCH_EPS * scale:
        raise TouchingSegments("segments touch")
    return float(kernels.pair_omega(p0, p1, q0, q1))


def _link_scale(link):
    v = link.all_vertices()
    if len(v) == 0:
        raise EmptyLink("nothing loaded")
    return max(float(np.abs(v).max()), 1.0)


def acn_writhe(link):
    """(average crossing number, writhe) by the exact pair-angle sums.

    acn averages the unsigned crossing count over all projection
    directions and includes inter-component pairs; writhe averages the
    signed count within each component.
    """
    flat = link.flatten()
    ncomp = max(link.ncomponents, 1)
    abs_sum, wr_sum, _, ok = kernels.gauss_sums(
        flat.positions, flat.edges, flat.edge_comp, ncomp,
        TOUCH_EPS * _link_scale(link))
    if not ok:
        raise TouchingSegments(
            "non-adjacent edges touch; jitter the link first")
    return abs_sum / (2.0 * np.pi), wr_sum / (2.0 * np.pi)


def lnknum(link, residual_tol=0.01):
    """Linking number matrix (diagonal zero by convention)."""
    closed = [c for c in link.components]
    if link.ncomponents < 2:
        raise TooFewComponents("need at least two components")
    if not all(c.closed for c in closed):
        raise TooFewComponents("linking numbers need closed components")
    flat = link.flatten()
    _, _, lk_sums, ok = kernels.gauss_sums(
        flat.positions, flat.edges, flat.edge_comp, link.ncomponents,
        TOUCH_EPS * _link_scale(link))
    if not ok:
        raise TouchingSegments(
            "non-adjacent edges touch; jitter the link first")
    raw = lk_sums / (4.0 * np.pi)
    mat = np.rint(raw).astype(np.int64)
    resid = np.abs(raw - mat)
    np.fill_diagonal(resid, 0.0)
    if resid.max() >= residual_tol:
        raise GenericityFailure(
            "linking sum %.4f away from an integer" % resid.max())
    np.fill_diagonal(mat, 0)
    return mat


def length_stats(link):
    """Per-component (total, min, max, ratio, mean) of edge lengths."""
    out = []
    for c in link.components:
        if c.nedges == 0:
            out.append({"total": 0.0, "min": 0.0, "max": 0.0,
                        "ratio": np.nan, "mean": 0.0})
            continue
        ln = c.edge_lengths()
        out.append({"total": float(ln.sum()), "min": float(ln.min()),
                    "max": float(ln.max()),
                    "ratio": float(ln.max() / ln.min()),
                    "mean": float(ln.mean())})
    return out


def _internal_angles(c):
    """Internal angle (degrees) at each vertex carrying two edges."""
    v = c.vertices
    n = len(v)
    if c.closed:
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        a, b = prev - v, nxt - v
    else:
        if n < 3:
            return np.zeros(0)
        a = v[:-2] - v[1:-1]
        b = v[2:] - v[1:-1]
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    cosv = np.clip(np.einsum("ij,ij->i", a, b) / (na * nb), -1.0, 1.0)
    return np.degrees(np.arccos(cosv))


def angle_stats(link, turning=False):
    """Internal (or turning = 180 - internal) vertex angles per component.

    Open-component endpoints have no internal angle and are skipped.
    """
    out = []
    for c in link.components:
        ang = _internal_angles(c)
        if turning:
            ang = 180.0 - ang
        if len(ang) == 0:
            out.append({"min": np.nan, "max": np.nan,
                        "ratio": np.nan, "mean": np.nan})
            continue
        out.append({"min": float(ang.min()), "max": float(ang.max()),
                    "ratio": float(ang.max() / ang.min())
                    if ang.min() > 0 else np.inf,
                    "mean": float(ang.mean())})
    return out


def radius_of_gyration(link):
    """Root-mean-square vertex distance from the vertex centroid."""
    v = link.all_vertices()
    if len(v) == 0:
        raise EmptyLink("nothing loaded")
    dev = v - v.mean(axis=0)
    return float(np.sqrt(np.einsum("ij,ij->i", dev, dev).mean()))


def info(link):
    return {
        "components": link.ncomponents,
        "beads": link.nbeads,
        "edges": link.nedges,
        "closed": [c.closed for c in link.components],
        "hidden": [c.hidden for c in link.components],
        "bead_counts": [c.nbeads for c in link.components],
    }


def _nonadjacent_pairs(flat):
    edges = flat.edges
    ne = len(edges)
    if ne == 0:
        return np.zeros((0, 2), dtype=int)
    ii, jj = np.triu_indices(ne, k=1)
    a, b = edges[ii, 0], edges[ii, 1]
    c, d = edges[jj, 0], edges[jj, 1]
    keep = (a != c) & (a != d) & (b != c) & (b != d)
    return np.stack([ii[keep], jj[keep]], axis=1)


def _pair_distances(flat, pairs):
    pos, edges = flat.positions, flat.edges
    out = np.empty(len(pairs))
    for k, (i, j) in enumerate(pairs):
        out[k] = kernels.seg_dist(pos[edges[i, 0]], pos[edges[i, 1]],
                                  pos[edges[j, 0]], pos[edges[j, 1]])
    return out


def energy(link, model="MD"):
    """Knot energy under the named model.

    MD: sum of len_i*len_j / d(e_i, e_j)^2 over non-adjacent pairs
    (minimum-distance energy).  symm: the same sum with the symmetric
    midpoint distance min(d(m_i, e_j), d(m_j, e_i)) in place of the
    pair minimum distance.  nbeads: the total bead count.
    """
    if model == "nbeads":
        return float(link.nbeads)
    flat = link.flatten()
    pairs = _nonadjacent_pairs(flat)
    if len(pairs) == 0:
        return 0.0
    pos, edges = flat.positions, flat.edges
    lens = np.linalg.norm(pos[edges[:, 1]] - pos[edges[:, 0]], axis=1)
    scale = _link_scale(link)
    if model == "MD":
        d = _pair_distances(flat, pairs)
        if d.min() < TOUCH_EPS * scale:
            raise TouchingSegments("touching edges give a divergent energy")
        return float(np.sum(lens[pairs[:, 0]] * lens[pairs[:, 1]] / d ** 2))
    if model == "symm":
        mids = (pos[edges[:, 0]] + pos[edges[:, 1]]) / 2.0
        total = 0.0
        for i, j in pairs:
            d1 = kernels.seg_dist(mids[i], mids[i],
                                  pos[edges[j, 0]], pos[edges[j, 1]])
            d2 = kernels.seg_dist(mids[j], mids[j],
                                  pos[edges[i, 0]], pos[edges[i, 1]])
            dm = min(d1, d2)
            if dm < TOUCH_EPS * scale:
                raise TouchingSegments(
                    "touching edges give a divergent energy")
            total += lens[i] * lens[j] / dm ** 2
        return float(total)
    raise ValueError("unknown energy model %r" % (model,))


def thickness(link):
    """Injectivity-style thickness estimate.

    The smaller of (a) half the minimum non-adjacent pair distance and
    (b) the smallest local turn radius |e_i| / (2 sin(turn_i / 2)) over
    vertices.  This is a display heuristic, not the ropelength
    thickness.
    """
    flat = link.flatten()
    pairs = _nonadjacent_pairs(flat)
    scale = _link_scale(link)
    if len(pairs):
        d = _pair_distances(flat, pairs)
        if d.min() < TOUCH_EPS * scale:
            raise TouchingSegments("touching edges have no thickness")
        doubly = float(d.min()) / 2.0
    else:
        doubly = np.inf
    local = np.inf
    for c in link.components:
        if c.nedges == 0:
            continue
        turn = np.radians(180.0 - _internal_angles(c))
        lens = c.edge_lengths()
        if c.closed:
            out_len = lens
        else:
            out_len = lens[1:]          # vertex i+1 owns outgoing edge i+1
            turn = turn[:len(out_len)]
        s = np.sin(turn / 2.0)
        good = s > 1e-15
        if good.any():
            local = min(local, float((out_len[good] / (2.0 * s[good])).min()))
    return float(min(doubly, local))
