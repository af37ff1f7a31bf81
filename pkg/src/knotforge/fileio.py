"""Link file formats: plain text, native binary, VECT, and OBJ tubes.

The save-name extension picks the format: no extension is the native
binary, .txt the plain text, .vect Geomview VECT, .obj a tube mesh,
and .eps the diagram emitter (see epsdiag).
"""

import struct

import numpy as np

from . import spline
from .errors import (BadMagic, BadTubeParams, EmptyLink, ParseError,
                     Truncated, WrongArity)
from .polylink import Component, PolyLink

MAGIC = b"KFRG1"


def load_text(data):
    """Plain text: one vertex per line, blank lines split components.

    Components load closed (the format keeps no closure flag); runs of
    fewer than 3 vertices load open.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    comps = []
    current = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            if current:
                comps.append(current)
                current = []
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise WrongArity("expected three coordinates on line %d"
                             % lineno, lineno)
        try:
            current.append([float(p) for p in parts])
        except ValueError:
            raise ParseError("bad number on line %d" % lineno, lineno)
    if current:
        comps.append(current)
    if not comps:
        raise EmptyLink("no vertices in text input")
    out = []
    for rows in comps:
        arr = np.array(rows)
        out.append(Component(arr, closed=len(arr) >= 3))
    return PolyLink(out)


def save_text(link):
    """17 significant digits, one blank line between components."""
    if link.ncomponents == 0:
        raise EmptyLink("nothing to save")
    blocks = []
    for c in link.components:
        blocks.append("\n".join("%.17g %.17g %.17g" % tuple(v)
                                for v in c.vertices))
    return ("\n\n".join(blocks) + "\n").encode("utf-8")


def save_native(link):
    """Bit-exact binary: magic, component count, then per component a
    flags byte (bit0 closed, bit1 hidden), float32 color, u32 count,
    float64 vertex triples (all little endian)."""
    out = [MAGIC, struct.pack("<I", link.ncomponents)]
    for c in link.components:
        flags = (1 if c.closed else 0) | (2 if c.hidden else 0)
        color = c.color if c.color is not None else (-1.0, -1.0, -1.0)
        out.append(struct.pack("<B3fI", flags, *color, c.nbeads))
        out.append(c.vertices.astype("<f8").tobytes())
    return b"".join(out)


def load_native(data):
    if data[:5] != MAGIC:
        raise BadMagic("not a native link file")
    offset = 5

    def take(n):
        nonlocal offset
        if offset + n > len(data):
            raise Truncated("file ends inside a record")
        chunk = data[offset:offset + n]
        offset += n
        return chunk

    (ncomp,) = struct.unpack("<I", take(4))
    comps = []
    for _ in range(ncomp):
        flags, r, g, b, count = struct.unpack("<B3fI", take(17))
        verts = np.frombuffer(take(24 * count), dtype="<f8")
        verts = verts.reshape(count, 3).copy()
        color = None if r < 0 else (float(r), float(g), float(b))
        comps.append(Component(verts, closed=bool(flags & 1),
                               color=color, hidden=bool(flags & 2)))
    return PolyLink(comps)


def save_vect(link):
    """Geomview VECT; closed components repeat their first vertex."""
    if link.ncomponents == 0:
        raise EmptyLink("nothing to save")
    counts = []
    chunks = []
    for c in link.components:
        v = c.vertices
        if c.closed:
            v = np.concatenate([v, v[:1]])
        counts.append(len(v))
        chunks.append(v)
    lines = ["VECT"]
    lines.append("%d %d %d" % (link.ncomponents, sum(counts),
                               link.ncomponents))
    lines.append(" ".join(str(n) for n in counts))
    lines.append(" ".join("1" for _ in counts))
    for chunk in chunks:
        for v in chunk:
            lines.append("%.17g %.17g %.17g" % tuple(v))
    from .colors import auto_color
    for i, c in enumerate(link.components):
        color = c.color if c.color is not None else auto_color(i)
        lines.append("%.6g %.6g %.6g 1" % tuple(color))
    return ("\n".join(lines) + "\n").encode("utf-8")


def tube_mesh(component, radius, nseg, ncur, twist_fix=True):
    """Tube vertices and faces around the smoothed centerline.

    Returns (rings, faces) where rings is (M, nseg, 3) and faces index
    into the flattened ring array; closed tubes wrap with the seam
    shifted by the twist-corrected holonomy so they stay watertight.
    """
    if nseg < 3 or ncur < 1 or radius <= 0:
        raise BadTubeParams("need nseg >= 3, ncur >= 1, radius > 0")
    pts = spline.dense_curve(component.vertices, component.closed, ncur)
    nedges = component.nedges
    if component.closed:
        params = np.arange(len(pts)) / ncur
    else:
        params = np.arange(len(pts)) / ncur
    tans = spline.eval_spline_tangent(component.vertices, component.closed,
                                      params)
    normals = spline.rm_frames(pts, tans)
    m = len(pts)
    twist = np.zeros(m)
    seam_shift = 0
    if component.closed:
        holo = spline.closed_frame_holonomy(pts, tans)
        seg = np.linalg.norm(np.diff(np.concatenate([pts, pts[:1]]),
                                     axis=0), axis=1)
        arc = np.concatenate([[0.0], np.cumsum(seg)])
        total = arc[-1]
        rate = spline.seam_twist(holo, total, nseg) if twist_fix else 0.0
        twist = rate * arc[:m]
        seam_angle = holo + rate * total
        seam_shift = int(round(seam_angle / (2.0 * np.pi / nseg))) % nseg
    rings = np.empty((m, nseg, 3))
    theta = 2.0 * np.pi * np.arange(nseg) / nseg
    for i in range(m):
        t = tans[i]
        n = normals[i]
        b = np.cross(t, n)
        ang = theta + twist[i]
        rings[i] = (pts[i][None, :]
                    + radius * (np.cos(ang)[:, None] * n[None, :]
                                + np.sin(ang)[:, None] * b[None, :]))
    faces = []

    def ring_vertex(i, j):
        return i * nseg + j

    last = m if component.closed else m - 1
    for i in range(last):
        nxt = (i + 1) % m
        shift = seam_shift if (component.closed and i == m - 1) else 0
        for j in range(nseg):
            j2 = (j + 1) % nseg
            a = ring_vertex(i, j)
            b_ = ring_vertex(i, j2)
            c = ring_vertex(nxt, (j2 + shift) % nseg)
            d = ring_vertex(nxt, (j + shift) % nseg)
            faces.append((a, b_, c))
            faces.append((a, c, d))
    return rings, faces


def save_obj(link, radius=0.5, nseg=12, ncur=5, twist_fix=True):
    """Wavefront OBJ tube mesh (one object per visible component)."""
    if link.ncomponents == 0:
        raise EmptyLink("nothing to export")
    lines = []
    base = 1
    for i, c in enumerate(link.components):
        if c.hidden:
            continue
        rings, faces = tube_mesh(c, radius, nseg, ncur, twist_fix)
        pts = rings.reshape(-1, 3)
        centers = np.repeat(rings.mean(axis=1), nseg, axis=0)
        radial = pts - centers
        norms = np.linalg.norm(radial, axis=1)
        norms[norms < 1e-300] = 1.0
        radial = radial / norms[:, None]
        lines.append("o component_%d" % i)
        for p in pts:
            lines.append("v %.9g %.9g %.9g" % tuple(p))
        for nvec in radial:
            lines.append("vn %.6f %.6f %.6f" % tuple(nvec))
        for f in faces:
            lines.append("f %d//%d %d//%d %d//%d"
                         % (f[0] + base, f[0] + base, f[1] + base,
                            f[1] + base, f[2] + base, f[2] + base))
        base += len(pts)
    return ("\n".join(lines) + "\n").encode("utf-8")


def twfix_angle(component, nseg, ncur=5):
    """Seam-aligning twist rate for a closed component's tube."""
    from .errors import OpenComponent
    if not component.closed:
        raise OpenComponent("twist fix needs a closed component")
    pts = spline.dense_curve(component.vertices, True, ncur)
    params = np.arange(len(pts)) / ncur
    tans = spline.eval_spline_tangent(component.vertices, True, params)
    holo = spline.closed_frame_holonomy(pts, tans)
    seg = np.linalg.norm(np.diff(np.concatenate([pts, pts[:1]]), axis=0),
                         axis=1)
    total = float(seg.sum())
    return spline.seam_twist(holo, total, nseg)


FORMAT_EXTENSIONS = {"": "native", ".txt": "text", ".vect": "vect",
                     ".obj": "obj", ".eps": "eps"}


def save_by_name(link, name, eps_fn=None, obj_kwargs=None):
    """(filename, bytes) for a save name; extension picks the format."""
    lower = name.lower()
    for ext, kind in FORMAT_EXTENSIONS.items():
        if ext and lower.endswith(ext):
            if kind == "text":
                return name, save_text(link)
            if kind == "vect":
                return name, save_vect(link)
            if kind == "obj":
                return name, save_obj(link, **(obj_kwargs or {}))
            if kind == "eps":
                if eps_fn is None:
                    raise BadTubeParams("no diagram emitter provided")
                return name, eps_fn(link)
    return name, save_native(link)
