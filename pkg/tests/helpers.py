"""Independent oracles used across the test suite.

Everything here is deliberately written from scratch with plain loops,
so it shares no code path with the engine implementations it checks.
"""

import numpy as np


def brute_crossings(link, axes=None):
    """Slow reference crossing extraction under an orthographic
    projection.

    Returns a list of dicts with keys over (comp, param), under,
    sign, xy.  axes defaults to the identity (straight down z).
    """
    if axes is None:
        axes = np.eye(3)
    u, v, w = axes[0], axes[1], axes[2]
    segs = []
    for ci, c in enumerate(link.components):
        n = len(c.vertices)
        m = n if c.closed else n - 1
        for k in range(m):
            p = c.vertices[k]
            q = c.vertices[(k + 1) % n]
            segs.append((ci, k, (ci, k), (ci, (k + 1) % n),
                         np.array([p @ u, p @ v]),
                         np.array([q @ u, q @ v]),
                         p @ w, q @ w))
    out = []
    for i in range(len(segs)):
        ci, ki, vi0, vi1, a, b, za, zb = segs[i]
        for j in range(i + 1, len(segs)):
            cj, kj, vj0, vj1, c2, d2, zc, zd = segs[j]
            if vi0 in (vj0, vj1) or vi1 in (vj0, vj1):
                continue
            r = b - a
            s = d2 - c2
            denom = r[0] * s[1] - r[1] * s[0]
            if denom == 0:
                continue
            q = c2 - a
            t = (q[0] * s[1] - q[1] * s[0]) / denom
            uu = (q[0] * r[1] - q[1] * r[0]) / denom
            if not (0 < t < 1 and 0 < uu < 1):
                continue
            zi = za + t * (zb - za)
            zj = zc + uu * (zd - zc)
            if zi > zj:
                over = (ci, ki + t)
                under = (cj, kj + uu)
                d_over, d_under = r, s
            else:
                over = (cj, kj + uu)
                under = (ci, ki + t)
                d_over, d_under = s, r
            sign = 1 if (d_over[0] * d_under[1]
                         - d_over[1] * d_under[0]) > 0 else -1
            out.append({"over": over, "under": under, "sign": sign,
                        "xy": tuple(a + t * r)})
    return out


def brute_passages(link, crossings):
    """Per-component ordered passage list [(crossing idx, 'O'|'U',
    param)]."""
    passages = [[] for _ in link.components]
    for idx, x in enumerate(crossings):
        passages[x["over"][0]].append((idx, "O", x["over"][1]))
        passages[x["under"][0]].append((idx, "U", x["under"][1]))
    for p in passages:
        p.sort(key=lambda e: e[2])
    return passages


def dt_codes_all_bases(link, axes=None):
    """Every DT code obtainable from the diagram by moving the
    basepoint or reversing orientation (the documented equivalences),
    plus global sign flips.  The engine's raw code must be in here."""
    crossings = brute_crossings(link, axes)
    passages = brute_passages(link, crossings)[0]
    n = len(crossings)
    codes = set()
    if n == 0:
        return {()}
    order = [(idx, flag) for idx, flag, _ in passages]
    for reverse in (False, True):
        seq = list(reversed(order)) if reverse else list(order)
        for shift in range(2 * n):
            rot = seq[shift:] + seq[:shift]
            labels = {}
            over_of = {}
            for pos, (idx, flag) in enumerate(rot, start=1):
                labels.setdefault(idx, []).append(pos)
                over_of[(idx, pos)] = flag == "O"
            code = []
            ok = True
            for odd in range(1, 2 * n, 2):
                found = None
                for idx, pair in labels.items():
                    if odd in pair:
                        even = pair[0] if pair[1] == odd else pair[1]
                        if even % 2 != 0:
                            ok = False
                        found = -even if over_of[(idx, even)] else even
                        break
                if not ok:
                    break
                code.append(found)
            if ok:
                codes.add(tuple(code))
                codes.add(tuple(-x for x in code))
    return codes


def quad_omega(p0, p1, q0, q1, n=400):
    """Mid-point quadrature of the pair solid-angle integrand."""
    p0, p1, q0, q1 = (np.asarray(x, dtype=float) for x in (p0, p1, q0, q1))
    t = (np.arange(n) + 0.5) / n
    a = p0 + np.outer(t, p1 - p0)
    b = q0 + np.outer(t, q1 - q0)
    da = (p1 - p0) / n
    db = (q1 - q0) / n
    cross = np.cross(da, db)
    total = 0.0
    for i in range(n):
        r = a[i] - b
        dist = np.linalg.norm(r, axis=1)
        total += np.sum(cross @ r.T / dist ** 3)
    return total


def direction_basis(d):
    """Orthonormal rows (u, v, d): a projection basis looking along d."""
    d = np.asarray(d, dtype=float)
    d = d / np.linalg.norm(d)
    helper = np.array([0.0, 0.0, 1.0])
    if abs(d @ helper) > 0.9:
        helper = np.array([1.0, 0.0, 0.0])
    u = np.cross(helper, d)
    u = u / np.linalg.norm(u)
    v = np.cross(d, u)
    return np.stack([u, v, d])


def mesh_is_watertight(faces):
    """Every undirected edge must appear in exactly two triangles."""
    count = {}
    for f in faces:
        for k in range(3):
            e = tuple(sorted((f[k], f[(k + 1) % 3])))
            count[e] = count.get(e, 0) + 1
    return all(v == 2 for v in count.values())


def valid_eps(data):
    """Minimal EPS syntax audit."""
    text = data.decode("ascii", errors="replace")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("%!PS-Adobe-3.0 EPSF-3.0"):
        return False
    bbox = [ln for ln in lines if ln.startswith("%%BoundingBox:")]
    if len(bbox) != 1:
        return False
    parts = bbox[0].split()[1:]
    if len(parts) != 4:
        return False
    x0, y0, x1, y1 = (int(p) for p in parts)
    if not (x1 > x0 and y1 > y0):
        return False
    if text.count("gsave") != text.count("grestore"):
        return False
    return "%%EOF" in text


def eps_gap_count(data):
    """Sum of per-component gap counts from the emitter's comments."""
    total = 0
    for line in data.decode("ascii").splitlines():
        if line.startswith("% component"):
            total += int(line.split("gaps")[1])
    return total


def eps_path_count(data):
    total = 0
    for line in data.decode("ascii").splitlines():
        if line.startswith("% component"):
            total += int(line.split("paths")[1].split("gaps")[0])
    return total
