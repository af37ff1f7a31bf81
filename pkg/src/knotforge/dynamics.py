"""Force-based relaxation that preserves knot type.

The safety invariant drives everything: a link is safe when no two
non-adjacent edges are closer than `close`.  Beads move one at a time,
each displacement capped at `max_dir` (< close in fast collision
mode), and in fast mode any single move that would break the clearance
is rejected.  A safe start therefore stays safe for the whole run,
which is what pins the knot type down.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (CoincidentBeads, ConfigError, NoOpenComponents,
                     UnsafeStart)
from .polylink import Component

FORCE_KINDS = ("elec", "mech", "amech", "grav", "therm", "tanf", "anch",
               "velfo")
_KIND_SLOT = {k: i for i, k in enumerate(FORCE_KINDS)}


@dataclass
class ForceSpec:
    kind: str
    magnitude: float = 1.0
    power: float = 4.0        # elec falloff exponent
    spring: float = 1.0       # amech preferred edge length

    def __post_init__(self):
        if self.kind not in FORCE_KINDS:
            raise ConfigError("unknown force %r" % (self.kind,))
        if self.magnitude < 0:
            raise ConfigError("force magnitude must be >= 0")
        if self.kind == "elec" and self.power < 2:
            raise ConfigError("elec power must be >= 2")


@dataclass
class RelaxConfig:
    close: float = 0.12
    max_dir: float = 0.1
    dt: float = 0.05
    mode: str = "damped"              # damped | undamped
    collision: str = "fast"           # fast | allow
    forces: tuple = (ForceSpec("elec", 1.0), ForceSpec("mech", 1.0))
    stusplit: int = 0                 # steps between stuck checks, 0 = off
    dbmin: int = 3
    dstep: int = 1                    # steps per snapshot
    stuck_factor: float = 1.5         # stuck proximity = factor * close
    stuck_eps: float = 0.01           # stuck move = eps * max_dir
    beadlimit: int = 4000             # stuck splitting stops at this count

    def __post_init__(self):
        if self.close <= 0 or self.max_dir <= 0 or self.dt <= 0:
            raise ConfigError("close, max-dir and dt must be positive")
        if self.mode not in ("damped", "undamped"):
            raise ConfigError("mode must be damped or undamped")
        if self.collision not in ("fast", "allow"):
            raise ConfigError("collision must be fast or allow")
        if self.collision == "fast" and not self.max_dir < self.close:
            raise ConfigError("fast collision requires max-dir < close")
        if self.stusplit < 0 or self.dbmin < 0 or self.dstep < 1:
            raise ConfigError("bad stusplit/dbmin/dstep")
        self.forces = tuple(self.forces)

    def toggles_and_magnitudes(self):
        on = np.zeros(8, dtype=np.bool_)
        mag = np.zeros(10)
        mag[kernels.M_POWER] = 4.0
        for f in self.forces:
            on[_KIND_SLOT[f.kind]] = True
            if f.kind == "elec":
                mag[kernels.M_CHARGE] = f.magnitude
                mag[kernels.M_POWER] = f.power
            elif f.kind == "mech":
                mag[kernels.M_HOOKE] = f.magnitude
            elif f.kind == "amech":
                mag[kernels.M_HOOKE_A] = f.magnitude
                mag[kernels.M_SPRING] = f.spring
            elif f.kind == "grav":
                mag[kernels.M_GRAVMAG] = f.magnitude
            elif f.kind == "therm":
                mag[kernels.M_THERMMAG] = f.magnitude
            elif f.kind == "tanf":
                mag[kernels.M_TANMAG] = f.magnitude
            elif f.kind == "anch":
                mag[kernels.M_ANCHMAG] = f.magnitude
            elif f.kind == "velfo":
                mag[kernels.M_VELMAG] = f.magnitude
        return on, mag


@dataclass
class RelaxState:
    velocities: np.ndarray
    step_count: int = 0
    rng_state: int = 1
    last_move_norms: np.ndarray | None = None
    check_positions: np.ndarray | None = None

    @classmethod
    def for_link(cls, link, seed=1):
        n = link.nbeads
        return cls(velocities=np.zeros((n, 3)),
                   rng_state=int(seed) & kernels._MASK.item(),
                   last_move_norms=np.zeros(n))

    def copy(self):
        return RelaxState(
            velocities=self.velocities.copy(),
            step_count=self.step_count,
            rng_state=self.rng_state,
            last_move_norms=None if self.last_move_norms is None
            else self.last_move_norms.copy(),
            check_positions=None if self.check_positions is None
            else self.check_positions.copy())


@dataclass
class SafetyReport:
    safe: bool
    min_distance: float
    offending_pair: tuple | None = None


def check_safe(link, close):
    """Safe iff every non-adjacent edge pair is at least close apart.

    A link without non-adjacent pairs (a lone triangle) is vacuously
    safe with infinite clearance.
    """
    if close <= 0:
        raise ConfigError("close must be positive")
    flat = link.flatten()
    dist, i, j = kernels.min_nonadjacent(flat.positions, flat.edges)
    if i < 0:
        return SafetyReport(True, math.inf, None)
    pair = (flat.edge_ref(i), flat.edge_ref(j))
    return SafetyReport(bool(dist >= close), float(dist),
                        None if dist >= close else pair)


def _require_force_inputs(cfg, flat, state):
    on, _ = cfg.toggles_and_magnitudes()
    if on[kernels.F_ANCH] and not flat.anch_mask.any():
        raise ConfigError("anchor force enabled but no anchors are set")
    if on[kernels.F_VELFO] and cfg.mode == "damped":
        # velocity damping only acts on the undamped integrator
        pass
    if len(state.velocities) != len(flat.positions):
        raise ConfigError("state does not match the link bead count")


def compute_forces(link, cfg, state):
    """Per-bead force sum for the enabled forces (state left untouched)."""
    flat = link.flatten()
    _require_force_inputs(cfg, flat, state)
    on, mag = cfg.toggles_and_magnitudes()
    force = np.zeros_like(flat.positions)
    state_box = np.array([state.rng_state], dtype=np.uint64)
    status = kernels._forces(flat.positions, state.velocities.copy(),
                             flat.edges, flat.nbr, flat.nxt, flat.anchors,
                             flat.anch_mask, on, mag,
                             cfg.mode == "damped", state_box, force)
    if status == kernels.ERR_COINCIDENT:
        raise CoincidentBeads("coincident beads; jitter the link first")
    return force


def _kernel_steps(flat, cfg, state, nsteps):
    """Advance the kernel nsteps on flat arrays; mutates pos/vel/state."""
    on, mag = cfg.toggles_and_magnitudes()
    state_box = np.array([state.rng_state], dtype=np.uint64)
    force = np.zeros_like(flat.positions)
    status = kernels.relax_steps(
        flat.positions, state.velocities, flat.edges, flat.nbr, flat.nxt,
        flat.vedges, flat.anchors, flat.anch_mask, flat.pinned, on, mag,
        cfg.close, cfg.max_dir, cfg.dt,
        cfg.collision == "fast", cfg.mode == "damped",
        state_box, nsteps, force)
    state.rng_state = int(state_box[0])
    state.step_count += nsteps
    if status == kernels.ERR_COINCIDENT:
        raise CoincidentBeads("coincident beads; jitter the link first")


def step(link, cfg, state):
    """One relaxation step: beads visited once each, in index order."""
    if cfg.collision == "fast" and not check_safe(link, cfg.close).safe:
        raise UnsafeStart(
            "unsafe start; scale up or run fitto mindist first")
    flat = link.flatten()
    _require_force_inputs(cfg, flat, state)
    new_state = state.copy()
    _kernel_steps(flat, cfg, new_state, 1)
    return flat.rebuild_link(), new_state


def run(link, cfg, state, n_steps, stop=None, observer=None):
    """Run the relaxation for n_steps (0 with a stop signal = run until
    stopped).

    Every cfg.stusplit steps (when nonzero) stuck edges are split;
    every cfg.dstep steps the observer receives (link, state).  The
    stop signal is checked between steps.
    """
    if n_steps < 0:
        raise ConfigError("step count must be >= 0")
    if cfg.collision == "fast" and not check_safe(link, cfg.close).safe:
        raise UnsafeStart(
            "unsafe start; scale up or run fitto mindist first")
    unbounded = n_steps == 0 and stop is not None
    if n_steps == 0 and stop is None:
        return link.with_components(link.components), state.copy()

    flat = link.flatten()
    _require_force_inputs(cfg, flat, state)
    new_state = state.copy()
    if new_state.check_positions is None:
        new_state.check_positions = flat.positions.copy()

    done = 0
    while unbounded or done < n_steps:
        if stop is not None and stop.is_set():
            break
        boundaries = [cfg.dstep - (done % cfg.dstep)]
        if cfg.stusplit > 0:
            boundaries.append(cfg.stusplit - (done % cfg.stusplit))
        if not unbounded:
            boundaries.append(n_steps - done)
        chunk = max(min(boundaries), 1)
        _kernel_steps(flat, cfg, new_state, chunk)
        done += chunk
        link_now = None
        if cfg.stusplit > 0 and done % cfg.stusplit == 0:
            link_now = flat.rebuild_link()
            new_state.last_move_norms = np.linalg.norm(
                flat.positions - new_state.check_positions, axis=1)
            split_link, inserted = _split_stuck(link_now, cfg,
                                                new_state.last_move_norms)
            if inserted:
                link_now = split_link
                flat = link_now.flatten()
                new_state.velocities = _weave_rows(
                    new_state.velocities, inserted)
                new_state.last_move_norms = np.zeros(len(flat.positions))
            new_state.check_positions = flat.positions.copy()
        if observer is not None and done % cfg.dstep == 0:
            if link_now is None:
                link_now = flat.rebuild_link()
            observer(link_now, new_state)
    return flat.rebuild_link(), new_state


def _weave_rows(arr, inserted_after):
    """Insert zero rows after the given (pre-insertion) global indices."""
    marks = set(inserted_after)
    out = np.zeros((len(arr) + len(marks),) + arr.shape[1:],
                   dtype=arr.dtype)
    dst = 0
    for src in range(len(arr)):
        out[dst] = arr[src]
        dst += 1
        if src in marks:
            dst += 1                    # the new midpoint keeps zero rows
    return out


def _split_stuck(link, cfg, moves):
    """Split stuck edges; returns (link, inserted-after global indices)."""
    flat = link.flatten()
    if len(flat.edges) == 0 or link.nbeads >= cfg.beadlimit:
        return link, []
    threshold = cfg.stuck_factor * cfg.close
    still = cfg.stuck_eps * cfg.max_dir
    pos, edges = flat.positions, flat.edges
    to_split = set()
    ne = len(edges)
    for i in range(ne):
        a, b = edges[i]
        if moves[a] >= still or moves[b] >= still:
            continue
        for j in range(i + 1, ne):
            c, d = edges[j]
            if a == c or a == d or b == c or b == d:
                continue
            if moves[c] >= still or moves[d] >= still:
                continue
            if kernels.seg_dist(pos[a], pos[b], pos[c], pos[d]) < threshold:
                to_split.add(i)
                to_split.add(j)
    if not to_split:
        return link, []
    by_comp = {}
    inserted = []
    for e in to_split:
        ci, k = flat.edge_ref(e)
        by_comp.setdefault(ci, set()).add(k)
        inserted.append(flat.offsets[ci] + k)
    out = []
    for ci, c in enumerate(link.components):
        if ci not in by_comp:
            out.append(c.with_vertices(c.vertices, keep_anchors=True))
            continue
        v = c.vertices
        n = len(v)
        pieces = []
        marks = by_comp[ci]
        for k in range(n):
            pieces.append(v[k])
            if k in marks:
                pieces.append((v[k] + v[(k + 1) % n]) / 2.0)
        out.append(Component(np.array(pieces), closed=c.closed,
                             color=c.color, hidden=c.hidden))
    return link.with_components(out), inserted


def stuck_check(link, cfg, state):
    """Incremental stuck handling for external go-loops.

    Compares positions against state.check_positions, splits stuck
    edges, reweaves the velocity array, and re-arms the tracker.
    Mutates state; returns the (possibly grown) link.
    """
    flat = link.flatten()
    if state.check_positions is None \
            or len(state.check_positions) != len(flat.positions):
        state.check_positions = flat.positions.copy()
        return link
    moves = np.linalg.norm(flat.positions - state.check_positions, axis=1)
    state.last_move_norms = moves
    new_link, inserted = _split_stuck(link, cfg, moves)
    if inserted:
        state.velocities = _weave_rows(state.velocities, inserted)
        state.last_move_norms = np.zeros(new_link.nbeads)
    state.check_positions = new_link.flatten().positions.copy()
    return new_link


def stuck_split(link, cfg, state=None):
    """Split edge pairs pinned against each other.

    A pair is stuck when its distance is under stuck_factor * close and
    all four endpoint beads moved less than stuck_eps * max_dir net
    over the last check interval.  Both edges gain a midpoint, which
    leaves the curve point set (and so the knot type) unchanged.
    """
    moves = None
    if state is not None and state.last_move_norms is not None \
            and len(state.last_move_norms) == link.nbeads:
        moves = state.last_move_norms
    if moves is None:
        moves = np.zeros(link.nbeads)
    new_link, _ = _split_stuck(link, cfg, moves)
    return new_link


def delete_downto(link, cfg, target):
    """Remove beads while provably keeping the knot type.

    A bead may go when the triangle it spans with its neighbours meets
    no other edge and the resulting link still passes check_safe.
    Beads are attempted in round-robin order until the total drops to
    max(target, dbmin) or a full pass removes nothing.
    """
    if target < 0:
        raise ConfigError("target must be >= 0")
    floor = max(target, cfg.dbmin)
    comps = [c.vertices.copy() for c in link.components]
    closed = [c.closed for c in link.components]

    def total():
        return sum(len(v) for v in comps)

    def flat_arrays(candidate=None):
        """Global positions/edges, optionally with one vertex replaced."""
        pos = []
        edges = []
        base = 0
        for ci, v in enumerate(comps):
            if candidate is not None and candidate[0] == ci:
                v = candidate[1]
            n = len(v)
            pos.append(v)
            m = n if closed[ci] else n - 1
            for k in range(m):
                edges.append((base + k, base + (k + 1) % n))
            base += n
        pos = np.concatenate(pos) if pos else np.zeros((0, 3))
        edges = (np.array(edges, dtype=np.int64)
                 if edges else np.zeros((0, 2), dtype=np.int64))
        return pos, edges

    scale = max(float(np.abs(link.all_vertices()).max()), 1.0) \
        if link.nbeads else 1.0
    eps = 1e-12 * scale ** 3

    progress = True
    while progress and total() > floor:
        progress = False
        ci = 0
        while ci < len(comps):
            v = comps[ci]
            k = 0
            while k < len(v):
                if total() <= floor:
                    return _rebuild(link, comps, closed)
                n = len(v)
                if closed[ci]:
                    if n <= 3:
                        break
                    u, w = (k - 1) % n, (k + 1) % n
                else:
                    if n < 3 or k == 0 or k == n - 1:
                        k += 1
                        continue
                    u, w = k - 1, k + 1
                pos, edges = flat_arrays()
                base = sum(len(c) for c in comps[:ci])
                if kernels.triangle_clear(pos, edges, base + u, base + k,
                                          base + w, eps):
                    cand = np.delete(v, k, axis=0)
                    cpos, cedges = flat_arrays((ci, cand))
                    if not kernels.any_below(cpos, cedges, cfg.close):
                        comps[ci] = cand
                        v = cand
                        progress = True
                        continue
                k += 1
            ci += 1
    return _rebuild(link, comps, closed)


def _rebuild(link, comps, closed):
    out = []
    for ci, c in enumerate(link.components):
        out.append(Component(comps[ci], closed=closed[ci], color=c.color,
                             hidden=c.hidden))
    return link.with_components(out)


def mass_open(link):
    """Anchor the first and last bead of every open component in place.

    The endpoints become pinned (the stepper never moves them) and
    their anchor targets are set so the anchor force agrees.
    """
    opens = [i for i, c in enumerate(link.components) if not c.closed]
    if not opens:
        raise NoOpenComponents("no open components to anchor")
    out = []
    for i, c in enumerate(link.components):
        if c.closed:
            out.append(c.with_vertices(c.vertices, keep_anchors=True))
            continue
        anchors = c.anchors.copy() if c.anchors is not None \
            else c.vertices.copy()
        mask = c.anchor_mask.copy() if c.anchor_mask is not None \
            else np.zeros(c.nbeads, dtype=bool)
        pinned = c.pinned.copy() if c.pinned is not None \
            else np.zeros(c.nbeads, dtype=bool)
        anchors[0] = c.vertices[0]
        anchors[-1] = c.vertices[-1]
        mask[0] = True
        mask[-1] = True
        pinned[0] = True
        pinned[-1] = True
        out.append(Component(c.vertices.copy(), closed=False, color=c.color,
                             hidden=c.hidden, anchors=anchors,
                             anchor_mask=mask, pinned=pinned))
    return link.with_components(out)


def model_energy(link, charge=1.0, power=4.0, hooke=1.0):
    """Potential for the default force pair (repulsion + edge springs).

    The bead-pair repulsion of strength charge and falloff power has
    potential charge / ((power-1) r^(power-1)); the quadratic edge
    attraction integrates to hooke * len^3 / 3.
    """
    flat = link.flatten()
    pos = flat.positions
    total = 0.0
    n = len(pos)
    for i in range(n):
        for j in range(i + 1, n):
            if flat.nbr[i, 0] == j or flat.nbr[i, 1] == j:
                continue
            r = float(np.linalg.norm(pos[i] - pos[j]))
            total += charge / ((power - 1.0) * r ** (power - 1.0))
    lens = np.concatenate([c.edge_lengths() for c in link.components
                           if c.nedges > 0]) if link.nedges else []
    total += float(np.sum(hooke * np.asarray(lens) ** 3 / 3.0))
    return total
