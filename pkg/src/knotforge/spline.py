"""Interpolating spline, resampling, and tube frames.

The smooth view of a polygonal component is a uniform cubic Bezier per
edge whose control points come from Catmull-Rom style tangents: the
tangent at a vertex is (v[i+1] - v[i-1]) / 2, clamped to the one-sided
difference at open ends.  Everything downstream (bead resampling, tube
meshes, smooth diagrams) samples this same curve.
"""

import numpy as np

from .errors import OpenComponent, TooFewBeads


def _tangents(verts, closed):
    n = len(verts)
    if n == 1:
        return np.zeros_like(verts)
    if closed:
        return (np.roll(verts, -1, axis=0) - np.roll(verts, 1, axis=0)) / 2.0
    t = np.empty_like(verts)
    t[1:-1] = (verts[2:] - verts[:-2]) / 2.0
    t[0] = verts[1] - verts[0]
    t[-1] = verts[-1] - verts[-2]
    return t


def eval_spline(verts, closed, params):
    """Points of the interpolating spline at global parameters.

    A parameter t in [i, i+1] lies on the Bezier of edge i; closed
    components wrap modulo the edge count.
    """
    verts = np.asarray(verts, dtype=float)
    n = len(verts)
    nedges = n if closed else n - 1
    params = np.asarray(params, dtype=float)
    if nedges == 0:
        return np.repeat(verts[:1], len(params), axis=0)
    tan = _tangents(verts, closed)
    if closed:
        params = np.mod(params, nedges)
    idx = np.minimum(params.astype(int), nedges - 1)
    s = params - idx
    i1 = (idx + 1) % n
    p0 = verts[idx]
    p3 = verts[i1]
    p1 = p0 + tan[idx] / 3.0
    p2 = p3 - tan[i1] / 3.0
    s = s[:, None]
    u = 1.0 - s
    return (u ** 3 * p0 + 3 * u ** 2 * s * p1
            + 3 * u * s ** 2 * p2 + s ** 3 * p3)


def eval_spline_tangent(verts, closed, params):
    """Unit tangents of the spline at global parameters."""
    verts = np.asarray(verts, dtype=float)
    n = len(verts)
    nedges = n if closed else n - 1
    params = np.asarray(params, dtype=float)
    tan = _tangents(verts, closed)
    if closed:
        params = np.mod(params, nedges)
    idx = np.minimum(params.astype(int), nedges - 1)
    s = params - idx
    i1 = (idx + 1) % n
    p0 = verts[idx]
    p3 = verts[i1]
    p1 = p0 + tan[idx] / 3.0
    p2 = p3 - tan[i1] / 3.0
    s = s[:, None]
    u = 1.0 - s
    d = 3 * u ** 2 * (p1 - p0) + 6 * u * s * (p2 - p1) + 3 * s ** 2 * (p3 - p2)
    norms = np.linalg.norm(d, axis=1)
    # a vanishing derivative only happens at degenerate control points;
    # fall back to the chord direction there
    bad = norms < 1e-12
    if bad.any():
        d[bad] = p3[bad] - p0[bad]
        norms = np.linalg.norm(d, axis=1)
        norms[norms < 1e-300] = 1.0
    return d / norms[:, None]


def resample(verts, closed, count):
    """count points uniformly spaced in spline parameter."""
    verts = np.asarray(verts, dtype=float)
    nedges = len(verts) if closed else len(verts) - 1
    if closed:
        if count < 3:
            raise TooFewBeads("closed component needs >= 3 beads")
        params = np.arange(count) * (nedges / count)
    else:
        if count < 2:
            raise TooFewBeads("open component needs >= 2 beads")
        params = np.linspace(0.0, nedges, count)
    return eval_spline(verts, closed, params)


def resample_equilateral(verts, closed, target, oversample=32):
    """Points at equal arclength steps, edge length close to target."""
    verts = np.asarray(verts, dtype=float)
    nedges = len(verts) if closed else len(verts) - 1
    dense_n = max(nedges * oversample, 64)
    if closed:
        params = np.arange(dense_n + 1) * (nedges / dense_n)
    else:
        params = np.linspace(0.0, nedges, dense_n + 1)
    pts = eval_spline(verts, closed, params)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    total = arc[-1]
    count = max(int(round(total / target)), 3 if closed else 2)
    if closed:
        targets = np.arange(count) * (total / count)
    else:
        targets = np.linspace(0.0, total, count)
    out = np.empty((count, 3))
    for k in range(3):
        out[:, k] = np.interp(targets, arc, pts[:, k])
    return out


def dense_curve(verts, closed, per_edge):
    """per_edge spline samples per edge (plus the end point when open)."""
    verts = np.asarray(verts, dtype=float)
    nedges = len(verts) if closed else len(verts) - 1
    if nedges == 0:
        return verts.copy()
    m = nedges * per_edge
    if closed:
        params = np.arange(m) / per_edge
    else:
        params = np.arange(m + 1) / per_edge
    return eval_spline(verts, closed, params)


def rm_frames(points, tangents):
    """Rotation-minimizing normals along a curve (double reflection)."""
    n = len(points)
    normals = np.empty((n, 3))
    t0 = tangents[0]
    seed = np.array([0.0, 0.0, 1.0])
    if abs(t0 @ seed) > 0.9:
        seed = np.array([1.0, 0.0, 0.0])
    r = seed - (seed @ t0) * t0
    r /= np.linalg.norm(r)
    normals[0] = r
    for i in range(n - 1):
        v1 = points[i + 1] - points[i]
        c1 = v1 @ v1
        if c1 < 1e-300:
            normals[i + 1] = normals[i]
            continue
        rl = normals[i] - (2.0 / c1) * (v1 @ normals[i]) * v1
        tl = tangents[i] - (2.0 / c1) * (v1 @ tangents[i]) * v1
        v2 = tangents[i + 1] - tl
        c2 = v2 @ v2
        if c2 < 1e-300:
            normals[i + 1] = rl
        else:
            normals[i + 1] = rl - (2.0 / c2) * (v2 @ rl) * v2
    return normals


def closed_frame_holonomy(points, tangents):
    """Angle by which the RM frame misses itself around a closed loop.

    points/tangents describe one full loop without the repeated end
    point; the frame is transported across the closing segment too.
    """
    pts = np.concatenate([points, points[:1]])
    tans = np.concatenate([tangents, tangents[:1]])
    normals = rm_frames(pts, tans)
    r0 = normals[0]
    r1 = normals[-1]
    t0 = tans[0]
    cosv = np.clip(r0 @ r1, -1.0, 1.0)
    sinv = np.cross(r0, r1) @ t0
    return float(np.arctan2(sinv, cosv))


def seam_twist(holonomy, total_length, nseg):
    """Twist rate cancelling the seam mismatch modulo ring symmetry.

    Returns the smallest-magnitude rate t with
    holonomy + t * total_length = 0 (mod 2*pi/nseg).
    """
    if total_length <= 0:
        raise OpenComponent("twist fix needs a closed tube")
    period = 2.0 * np.pi / nseg
    residue = (-holonomy) % period
    if residue > period / 2.0:
        residue -= period
    return residue / total_length
