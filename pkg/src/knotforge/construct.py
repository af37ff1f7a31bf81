"""Parametric knot/link generators and notation parsers."""

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import BadCount, BadSpec, EmptyWord, ParseError, ZeroLength
from .polylink import Component, PolyLink, as_vec3


def unknot(n=50, radius=5.0):
    """Regular n-gon of the given circumradius in the z = 0 plane."""
    if n < 3:
        raise BadCount("polygon needs at least 3 vertices")
    if radius <= 0:
        raise BadSpec("radius must be positive")
    t = 2.0 * np.pi * np.arange(n) / n
    verts = np.stack([radius * np.cos(t), radius * np.sin(t),
                      np.zeros(n)], axis=1)
    return PolyLink([Component(verts, closed=True)])


def torus(p, q, n=50, R=11.0, r=2.0):
    """(p, q) torus knot or link on the torus of radii R (longitudinal)
    and r (meridional); gcd(p, q) components share n beads evenly."""
    if p < 1:
        raise BadSpec("p must be >= 1")
    if not (R > r > 0):
        raise BadSpec("need R > r > 0")
    g = math.gcd(p, abs(q)) if q != 0 else p
    if n < 3 * g:
        raise BadCount("need at least 3 beads per component")
    comps = []
    per = [n // g + (1 if k < n % g else 0) for k in range(g)]
    seen = set()
    rep = 0
    for k in range(g):
        while rep in seen:
            rep += 1
        j = rep
        while j not in seen:
            seen.add(j)
            j = (j + q) % p
        m = per[k]
        # half-bead phase keeps projected crossings off the vertices of
        # symmetric samplings (e.g. the 60-bead trefoil down z)
        t = (np.arange(m) + 0.5) * (2.0 * np.pi * (p // g) / m)
        uu = t
        vv = (q / p) * t + 2.0 * np.pi * rep / p
        rad = R + r * np.cos(vv)
        verts = np.stack([rad * np.cos(uu), rad * np.sin(uu),
                          r * np.sin(vv)], axis=1)
        comps.append(Component(verts, closed=True))
    return PolyLink(comps)


def lissajous(nx, ny, nz, px=0.0, py=0.0, pz=0.0, n=100, close=0.12):
    """Closed Lissajous curve cos(n*t + phase) per axis.

    Returns (link, safety report); many parameter choices land in an
    unsafe position, so the verdict rides along (see lissajous_safe for
    the reroll loop).
    """
    if min(nx, ny, nz) < 1:
        raise BadSpec("frequencies must be positive")
    if n < 3:
        raise BadCount("need at least 3 beads")
    t = 2.0 * np.pi * np.arange(n) / n
    verts = np.stack([np.cos(nx * t + px), np.cos(ny * t + py),
                      np.cos(nz * t + pz)], axis=1)
    link = PolyLink([Component(verts, closed=True)])
    from .dynamics import check_safe
    return link, check_safe(link, close)


def lissajous_safe(seed, n=100, close=0.12, max_tries=1000,
                   freq_choices=(2, 3, 4, 5, 7)):
    """Retry random Lissajous parameters until the embedding is safe.

    Mirrors the demo loop that rerolls until a safe embedding shows up.
    Returns (link, (nx, ny, nz, px, py, pz)).
    """
    from .dynamics import check_safe
    g = rng.generator(seed)
    for _ in range(max_tries):
        nx, ny, nz = (int(g.choice(freq_choices)) for _ in range(3))
        px, py, pz = (float(g.uniform(0, 2 * np.pi)) for _ in range(3))
        link, _ = lissajous(nx, ny, nz, px, py, pz, n)
        # scale up so close is reachable for typical curves
        from .polylink import fitto
        try:
            link = fitto(link, "mindist", max(4 * close, 0.5))
        except Exception:
            continue
        if check_safe(link, close).safe:
            return link, (nx, ny, nz, px, py, pz)
    raise BadSpec("no safe Lissajous embedding found in %d tries" % max_tries)


def chain(k, beads_per=16):
    """Chain of k round components; consecutive rings interlock."""
    if k < 1:
        raise BadCount("need at least one component")
    if beads_per < 3:
        raise BadCount("need at least 3 beads per ring")
    comps = []
    spacing = 1.2
    t = 2.0 * np.pi * np.arange(beads_per) / beads_per
    for i in range(k):
        cx = spacing * i
        if i % 2 == 0:
            verts = np.stack([cx + np.cos(t), np.sin(t),
                              np.zeros(beads_per)], axis=1)
        else:
            verts = np.stack([cx + np.cos(t), np.zeros(beads_per),
                              np.sin(t)], axis=1)
        comps.append(Component(verts, closed=True))
    return PolyLink(comps)


def line(start, end, n=2):
    """Open component of n evenly spaced beads between two points."""
    if n < 2:
        raise BadCount("a line needs at least 2 beads")
    a, b = as_vec3(start), as_vec3(end)
    if np.linalg.norm(b - a) == 0:
        raise ZeroLength("line endpoints coincide")
    t = np.linspace(0.0, 1.0, n)[:, None]
    return PolyLink([Component(a + t * (b - a), closed=False)])


# ---------------------------------------------------------------------------
# braids

@dataclass
class BraidWord:
    letters: list        # [(generator index >= 1, +1 | -1), ...]
    strands: int

    def render(self):
        out = []
        for gen, sign in self.letters:
            ch = chr(ord("a") + gen - 1)
            out.append(ch.upper() if sign < 0 else ch)
        return "".join(out)


def parse_braid(text):
    """Parse a braid word: letters a-z are generators 1-26, capitals
    their inverses, parentheses group, ^n repeats the previous atom."""
    text = text.strip()
    if not text:
        raise EmptyWord()

    pos = 0

    def error(msg, at):
        raise ParseError(msg, at)

    def parse_word(depth):
        nonlocal pos
        letters = []
        while pos < len(text):
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch == ")":
                if depth == 0:
                    error("unmatched ')'", pos)
                return letters
            if ch == "(":
                start = pos
                pos += 1
                group = parse_word(depth + 1)
                if pos >= len(text) or text[pos] != ")":
                    error("unclosed '('", start)
                pos += 1
                letters.extend(_apply_power(group, parse_power()))
            elif ch.isascii() and ch.isalpha():
                pos += 1
                gen = ord(ch.lower()) - ord("a") + 1
                sign = -1 if ch.isupper() else 1
                letters.extend(_apply_power([(gen, sign)], parse_power()))
            else:
                error("unexpected character %r" % ch, pos)
        return letters

    def parse_power():
        nonlocal pos
        if pos < len(text) and text[pos] == "^":
            at = pos
            pos += 1
            neg = False
            if pos < len(text) and text[pos] == "-":
                neg = True
                pos += 1
            digits = ""
            while pos < len(text) and text[pos].isdigit():
                digits += text[pos]
                pos += 1
            if not digits:
                error("'^' needs an integer", at)
            n = int(digits)
            return -n if neg else n
        return 1

    letters = parse_word(0)
    if pos < len(text):
        error("unmatched ')'", pos)
    if not letters:
        raise EmptyWord()
    strands = 1 + max(gen for gen, _ in letters)
    return BraidWord(letters, strands)


def _apply_power(group, n):
    if n == 0:
        return []
    if n < 0:
        inv = [(g, -s) for g, s in reversed(group)]
        return inv * (-n)
    return group * n


def braid_close(word, row_gap=2.0, block_len=1.0, height=0.5):
    """Close a braid into a link.

    Strands run along x at rows y = 0, row_gap, ...; each letter is a
    crossing block where the over strand lifts to +height and the under
    strand dips to -height; strand ends return around the outside of
    the diagram in the z = 0 plane, nested so the straight-down-z
    projection is exactly the closed braid diagram.
    """
    if not word.letters:
        raise EmptyWord()
    s = word.strands
    length = max(len(word.letters), 1) * block_len
    # one polyline per starting row
    paths = [[np.array([0.0, row_gap * r, 0.0])] for r in range(s)]
    at_row = list(range(s))     # strand index currently at each row
    for step, (gen, sign) in enumerate(word.letters):
        x0 = step * block_len
        x1 = x0 + block_len
        lo, hi = gen - 1, gen
        a = at_row[lo]      # strand entering at the lower row
        b = at_row[hi]
        ya, yb = row_gap * lo, row_gap * hi
        # positive letter: the strand entering at the lower row goes over
        za, zb = (height, -height) if sign > 0 else (-height, height)
        xm = (x0 + x1) / 2.0
        paths[a].append(np.array([x0, ya, 0.0]))
        paths[a].append(np.array([xm, ya + 0.7 * (yb - ya), za]))
        paths[a].append(np.array([x1, yb, 0.0]))
        paths[b].append(np.array([x0, yb, 0.0]))
        paths[b].append(np.array([xm, yb + 0.7 * (ya - yb), zb]))
        paths[b].append(np.array([x1, ya, 0.0]))
        at_row[lo], at_row[hi] = b, a
    for r in range(s):
        paths[at_row[r]].append(np.array([length, row_gap * r, 0.0]))

    # closure: row r's right end returns to row r's left start through a
    # nested rectangle above the braid (outermost for row 0)
    y_top = row_gap * (s - 1)
    end_row = [0] * s
    for r in range(s):
        end_row[at_row[r]] = r

    def closure(row):
        nest = float(s - 1 - row)
        xr = length + 1.0 + nest
        xl = -1.0 - nest
        yr = y_top + 2.0 + 2.0 * nest
        y = row_gap * row
        return [np.array([xr, y, 0.0]), np.array([xr, yr, 0.0]),
                np.array([xl, yr, 0.0]), np.array([xl, y, 0.0])]

    # components follow strand cycles: the strand starting at row r ends
    # at end_row[r], whose closure arc feeds the strand starting there
    comps = []
    visited = set()
    for r0 in range(s):
        if r0 in visited:
            continue
        pts = []
        r = r0
        while True:
            visited.add(r)
            pts.extend(paths[r])
            end = end_row[r]
            pts.extend(closure(end))
            r = end
            if r == r0:
                break
        comps.append(Component(_dedupe(np.array(pts)), closed=True))
    return PolyLink(comps)


def _dedupe(arr):
    keep = [0]
    for i in range(1, len(arr)):
        if np.linalg.norm(arr[i] - arr[keep[-1]]) > 1e-12:
            keep.append(i)
    arr = arr[keep]
    if len(arr) > 2 and np.linalg.norm(arr[0] - arr[-1]) <= 1e-12:
        arr = arr[:-1]
    return arr


def braid_permutation(word):
    """Row permutation induced by the braid: start row -> end row."""
    s = word.strands
    at_row = list(range(s))
    for gen, _ in word.letters:
        lo, hi = gen - 1, gen
        at_row[lo], at_row[hi] = at_row[hi], at_row[lo]
    perm = [0] * s
    for row, strand in enumerate(at_row):
        perm[strand] = row
    return perm


# ---------------------------------------------------------------------------
# pretzel links

def parse_pretzel(text):
    """Comma-separated nonzero twist counts."""
    parts = [p.strip() for p in text.split(",")]
    twists = []
    offset = 0
    for p in parts:
        if not p or not (p.lstrip("-").isdigit()):
            raise ParseError("expected a comma-separated integer list",
                             text.find(p, offset) if p else offset)
        val = int(p)
        if val == 0:
            from .errors import ZeroTwist
            raise ZeroTwist("zero twists are not a pretzel region")
        twists.append(val)
        offset += len(p) + 1
    if not twists:
        raise ParseError("empty pretzel spec", 0)
    return twists


def conway_pretzel(text, box_gap=4.0, strand_gap=1.0, height=0.5):
    """Pretzel link from comma-separated twist counts.

    k twist regions sit side by side; region i holds |p_i| crossings of
    sign(p_i).  Tops and bottoms chain to their neighbours and the two
    long returns wrap around the outside, so the z projection is the
    standard pretzel diagram with sum(|p_i|) crossings.
    """
    twists = parse_pretzel(text) if isinstance(text, str) else list(text)
    k = len(twists)
    H = float(max(abs(p) for p in twists))

    # per region: two strand arcs running bottom to top, twisting
    region_x = []
    arcs = []    # (points bottom..top, bottom endpoint name, top endpoint)
    for i, p in enumerate(twists):
        xl = box_gap * i
        xr = xl + strand_gap
        region_x.append((xl, xr))
        a_pts = [np.array([xl, 0.0, 0.0])]    # starts bottom-left
        b_pts = [np.array([xr, 0.0, 0.0])]    # starts bottom-right
        for c in range(abs(p)):
            y0 = float(c)
            y1 = y0 + 1.0
            ym = y0 + 0.5
            za, zb = (height, -height) if p > 0 else (-height, height)
            a_pts.append(np.array([xl, y0, 0.0]))
            a_pts.append(np.array([xl + 0.7 * strand_gap, ym, za]))
            a_pts.append(np.array([xr, y1, 0.0]))
            b_pts.append(np.array([xr, y0, 0.0]))
            b_pts.append(np.array([xr - 0.7 * strand_gap, ym, zb]))
            b_pts.append(np.array([xl, y1, 0.0]))
            a_pts, b_pts = b_pts, a_pts       # track which list sits left
        a_pts.append(np.array([xl, H, 0.0]))
        b_pts.append(np.array([xr, H, 0.0]))
        # a_pts ends top-left; with an odd twist count it began bottom-right
        odd = abs(p) % 2 == 1
        arcs.append((a_pts, ("bot", "R" if odd else "L", i),
                     ("top", "L", i)))
        arcs.append((b_pts, ("bot", "L" if odd else "R", i),
                     ("top", "R", i)))

    end_of = {}
    for idx, (_, bot_name, top_name) in enumerate(arcs):
        end_of[bot_name] = (idx, "bot")
        end_of[top_name] = (idx, "top")

    # connections between arc endpoints: neighbour tents plus the two
    # outside wraps
    conns = {}

    def connect(a, b, via):
        conns[a] = (b, via)
        conns[b] = (a, list(reversed(via)))

    for i in range(k - 1):
        xr = region_x[i][1]
        xl = region_x[i + 1][0]
        xm = (xr + xl) / 2.0
        connect(("top", "R", i), ("top", "L", i + 1),
                [np.array([xm, H + 0.5, 0.0])])
        connect(("bot", "R", i), ("bot", "L", i + 1),
                [np.array([xm, -0.5, 0.0])])
    x_left = region_x[0][0] - 2.0
    x_right = region_x[-1][1] + 2.0
    connect(("top", "L", 0), ("top", "R", k - 1),
            [np.array([x_left, H + 2.0, 0.0]),
             np.array([x_right, H + 2.0, 0.0])])
    connect(("bot", "L", 0), ("bot", "R", k - 1),
            [np.array([x_left, -2.0, 0.0]),
             np.array([x_right, -2.0, 0.0])])

    comps = []
    used = set()
    for start in range(len(arcs)):
        if start in used:
            continue
        pts = []
        idx, enter = start, "bot"
        while True:
            used.add(idx)
            arc_pts, bot_name, top_name = arcs[idx]
            if enter == "bot":
                pts.extend(arc_pts)
                exit_name = top_name
            else:
                pts.extend(reversed(arc_pts))
                exit_name = bot_name
            nxt, via = conns[exit_name]
            pts.extend(via)
            nidx, nend = end_of[nxt]
            if nidx == start and nend == "bot":
                break
            idx, enter = nidx, nend
        comps.append(Component(_dedupe(np.array(pts)), closed=True))
    return PolyLink(comps)
