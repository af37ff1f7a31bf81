"""The interpreter: session state, command dispatch, scripts.

A session owns one link, one view transform, the parameter registry,
a single-level undo slot, aliases, and the relaxation state.  Commands
map onto the engine operations; anything that goes wrong prints a
complaint line prefixed with *** (and aborts the process when the duc
parameter is set).
"""

import os
import time

import numpy as np

from . import (catalogue, codes, colors, construct, dynamics, editing,
               epsdiag, fileio, measures, polylink, rng)
from .errors import KnotforgeError
from .params import ParameterStore
from .parser import parse_line, tokenize
from .polylink import PolyLink, ViewTransform


class DieUponComplaint(Exception):
    """Raised when duc is set and a complaint fires."""


class ScriptExit(Exception):
    """Raised by exit/quit to unwind the current script or REPL."""


class Session:
    def __init__(self, seed=1, cwd=None, headless=True):
        self.seed = int(seed)
        self.cwd = cwd or os.getcwd()
        self.headless = headless
        self.interactive_go = False      # service mode flips this on
        self.link = PolyLink([])
        self.view = ViewTransform()
        self.params = ParameterStore()
        self.aliases = {}
        self.undo_slot = None
        self.timers = {}
        self.display_mode = "s"
        self.dowker_projection = "z"
        self.collision = "fast"
        self.history = []
        self.delayed = []                # (due monotonic, command text)
        self.relax_state = dynamics.RelaxState.for_link(self.link, seed)
        self.relax_running = False
        self.relax_budget = None
        self.steps_since_check = 0
        self.angle_turning = False
        self.energy_model = "MD"
        self.show_flags = set()
        self.draw_style = "normal"
        self.bead_color = None
        self.tube_twist = 0.0
        self._ps_bbox = "tight"
        self._seed_counter = 0
        self.on_mutate = None            # hook: called after link changes
        self.last_save = None

    # -- deterministic sub-seeds -------------------------------------
    def next_seed(self):
        self._seed_counter += 1
        return rng.derive_seed(self.seed, self._seed_counter)

    # -- relaxation config from parameters ---------------------------
    def relax_config(self):
        p = self.params
        forces = []
        if p.get("elec"):
            forces.append(dynamics.ForceSpec("elec", p.get("charge"),
                                             power=p.get("power")))
        if p.get("mech"):
            forces.append(dynamics.ForceSpec("mech", p.get("hooke")))
        if p.get("amech"):
            forces.append(dynamics.ForceSpec("amech", p.get("hooke_a"),
                                             spring=p.get("spring")))
        if p.get("grav"):
            forces.append(dynamics.ForceSpec("grav", p.get("gravmag")))
        if p.get("therm"):
            forces.append(dynamics.ForceSpec("therm", p.get("thermmag")))
        if p.get("tanf"):
            forces.append(dynamics.ForceSpec("tanf", p.get("tanmag")))
        if p.get("anch"):
            forces.append(dynamics.ForceSpec("anch", p.get("anchmag")))
        if p.get("velfo"):
            forces.append(dynamics.ForceSpec("velfo", p.get("velmag")))
        return dynamics.RelaxConfig(
            close=p.get("close"), max_dir=p.get("max-dir"),
            dt=p.get("dt"),
            mode="undamped" if p.get("undamped") else "damped",
            collision=self.collision, forces=tuple(forces),
            stusplit=p.get("stusplit"), dbmin=p.get("dbmin"),
            dstep=p.get("dstep"), stuck_factor=p.get("stuck_factor"),
            stuck_eps=p.get("stuck_eps"), beadlimit=p.get("beadlimit"))

    def sync_relax_state(self):
        if len(self.relax_state.velocities) != self.link.nbeads:
            self.relax_state = dynamics.RelaxState.for_link(
                self.link, self.next_seed())
            self.steps_since_check = 0

    def set_link(self, link):
        self.link = link
        self.sync_relax_state()
        if self.on_mutate is not None:
            self.on_mutate()

    def eps_options(self):
        return epsdiag.EpsOptions(
            psmode=self.params.get("psmode"),
            pserase=self.params.get("pserase"),
            bbox=self._ps_bbox,
            strand_width=2.0 * (self.params.get("sradius")
                                if self.display_mode == "s"
                                else self.params.get("cradius")),
            display_mode=self.display_mode,
            ncur=self.params.get("ncur"))

    def projection(self):
        return self.view if self.dowker_projection == "view" else "z"

    # -- file paths ---------------------------------------------------
    def read_file(self, name):
        for cand in (name,):
            path = os.path.join(self.cwd, cand)
            if os.path.isfile(path):
                with open(path, "rb") as fh:
                    return fh.read()
        return None

    def write_file(self, name, data):
        path = os.path.join(self.cwd, name)
        with open(path, "wb") as fh:
            fh.write(data)
        return path


def load_link_data(data):
    """Sniff native vs text payloads."""
    if data[:5] == fileio.MAGIC:
        return fileio.load_native(data)
    return fileio.load_text(data)


# ---------------------------------------------------------------------------
# dispatch

class _Complaint(Exception):
    pass


def _int(tok, what="argument"):
    try:
        return int(tok)
    except ValueError:
        raise _Complaint("%s must be an integer (got %r)" % (what, tok))


def _float(tok, what="argument"):
    try:
        return float(tok)
    except ValueError:
        raise _Complaint("%s must be a number (got %r)" % (what, tok))


def _comp_arg(tok, what="component"):
    if tok == "all":
        return "all"
    return _int(tok, what)


def _fmt(x):
    return "%.6g" % x


UNSUPPORTED = {
    "imgout": "raster output is the viewer's screenshot button",
    "diagram": "external diagram engine not bundled",
    "id": "polynomial lookup not bundled",
    "homfly-pt": "polynomial computation not bundled",
    "homfly": "polynomial computation not bundled",
    "homflypt": "polynomial computation not bundled",
    "flypmoth": "polynomial computation not bundled",
    "tangle": "tangle calculator out of scope",
    "celtic": "celtic generator out of scope",
    "mf": "metafont output out of scope",
    "lua": "no embedded language; use the native commands",
}


def dispatch(session, inv):
    """Execute one invocation; returns output lines (complaints included).

    Raises DieUponComplaint when duc is set, ScriptExit on exit/quit.
    """
    out = []

    def complain(message):
        out.append("*** %s" % message)
        if session.params.get("duc"):
            raise DieUponComplaint("\n".join(out))

    if inv.kind == "error":
        session.history.append(inv.raw)
        complain("parse error: %s (column %d)" % (inv.message, inv.column))
        return out

    if inv.kind == "assign":
        session.history.append(inv.raw)
        try:
            session.params.set(inv.name, inv.value)
            if inv.name == "vscale":
                session.view = polylink.set_vscale(
                    session.view, session.params.get("vscale"))
        except KnotforgeError as exc:
            complain(str(exc))
        return out

    if inv.kind == "include":
        data = session.read_file(inv.path)
        if data is None:
            session.history.append(inv.raw)
            complain("cannot read script %r" % inv.path)
            return out
        try:
            run_script(session, data.decode("utf-8", errors="replace"))
        except ScriptExit:
            pass
        return out

    # alias expansion (checked at dispatch, never a parse error)
    tokens = list(inv.tokens)
    if tokens and tokens[0] in session.aliases:
        template = session.aliases[tokens[0]]
        args = tokens[1:]
        for i in range(10):
            template = template.replace("$%d" % i,
                                        args[i] if i < len(args) else "")
        expanded, err = tokenize(template)
        if err is not None:
            session.history.append(inv.raw)
            complain("alias expansion: %s" % err[0])
            return out
        tokens = expanded
        if not tokens:
            return out

    session.history.append(inv.raw)

    try:
        text = _execute(session, tokens, out)
        if text:
            out.extend(text if isinstance(text, list) else [text])
    except _Complaint as exc:
        complain(str(exc))
    except ScriptExit:
        raise
    except KnotforgeError as exc:
        complain(str(exc))
    except (ValueError, IndexError, KeyError, OSError) as exc:
        complain("%s: %s" % (type(exc).__name__, exc))

    if inv.redirect and out:
        try:
            session.write_file(inv.redirect,
                               ("\n".join(out) + "\n").encode("utf-8"))
            return []
        except OSError as exc:
            complain("cannot write %r: %s" % (inv.redirect, exc))
    return out


def _mutate(session, new_link):
    """Store undo state and install the new link."""
    session.undo_slot = session.link
    session.set_link(new_link)


def _need_args(args, n, usage):
    if len(args) < n:
        raise _Complaint("usage: %s" % usage)


def _execute(session, tokens, out):
    cmd = tokens[0]
    args = tokens[1:]
    link = session.link

    if cmd in UNSUPPORTED:
        raise _Complaint("unsupported: %s" % UNSUPPORTED[cmd])

    # ---- embedding transforms ----
    if cmd == "about":
        _need_args(args, 2, "about x|y|z degrees")
        _mutate(session, polylink.about(link, args[0],
                                        _float(args[1], "angle")))
        return None
    if cmd == "translate":
        if args and args[0] == "to":
            _need_args(args, 4, "translate to x y z")
            _mutate(session, polylink.translate_to(
                link, [_float(a) for a in args[1:4]]))
            return None
        _need_args(args, 3, "translate dx dy dz [component]")
        comp = _int(args[3], "component") if len(args) > 3 else None
        _mutate(session, polylink.translate(
            link, _float(args[0]), _float(args[1]), _float(args[2]),
            comp=comp))
        return None
    if cmd == "scale":
        _need_args(args, 1, "scale s | scale sx sy sz")
        if len(args) >= 3:
            _mutate(session, polylink.scale(link, _float(args[0]),
                                            _float(args[1]),
                                            _float(args[2])))
        else:
            _mutate(session, polylink.scale(link, _float(args[0])))
        return None
    if cmd == "reflect":
        _need_args(args, 1, "reflect axes|r [component]")
        comp = _int(args[1], "component") if len(args) > 1 else None
        if args[0] in ("r", "random"):
            _mutate(session, polylink.reflect_random(link,
                                                     session.next_seed()))
        else:
            _mutate(session, polylink.reflect(link, args[0], comp=comp))
        return None
    if cmd == "project":
        _need_args(args, 1, "project random | project dx dy dz")
        if args[0] in ("r", "random"):
            _mutate(session, polylink.project_random(link,
                                                     session.next_seed()))
        else:
            _need_args(args, 3, "project dx dy dz")
            _mutate(session, polylink.project(
                link, [_float(a) for a in args[:3]]))
        return None
    if cmd == "fitto":
        _need_args(args, 1, "fitto [mindist|avlength|extent] value")
        if args[0] in ("mindist", "avlength", "extent"):
            _need_args(args, 2, "fitto %s value" % args[0])
            _mutate(session, polylink.fitto(link, args[0],
                                            _float(args[1], "value")))
        else:
            _mutate(session, polylink.fitto(link, "extent",
                                            _float(args[0], "value")))
        return None
    if cmd in ("centre", "center"):
        mode = "mass" if args and args[0] == "mass" else "bbox"
        _mutate(session, polylink.centre(link, mode))
        return None
    if cmd == "align":
        if args and args[0] == "axes":
            aligned, warning = polylink.align_axes(link)
            _mutate(session, aligned)
            return "note: %s" % warning if warning else None
        raise _Complaint("usage: align axes")

    # ---- view ----
    if cmd == "rotate":
        _need_args(args, 1, "rotate x|y|z|i|j|k degrees | rotate fix|unit")
        if args[0] == "fix":
            baked, view = polylink.rotate_fix(link, session.view)
            session.view = view
            _mutate(session, baked)
            return None
        if args[0] == "unit":
            session.view = polylink.view_unit(session.view)
            return None
        _need_args(args, 2, "rotate axis degrees")
        session.view = polylink.rotate_view(session.view, args[0],
                                            _float(args[1], "angle"))
        return None
    if cmd == "untran":
        session.view = polylink.view_untran(session.view)
        return None
    if cmd == "orthographic" or (cmd == "ortho" and not args):
        session.view = polylink.set_projection(session.view, "orthographic")
        return None
    if cmd == "perspective":
        session.view = polylink.set_projection(session.view, "perspective")
        return None

    # ---- bead edits ----
    if cmd == "split":
        _mutate(session, editing.split(link))
        return None
    if cmd == "nbeads":
        _need_args(args, 1, "nbeads +N|-N|N | nbeads mult K")
        if args[0] == "mult":
            _need_args(args, 2, "nbeads mult K")
            _mutate(session, editing.nbeads(link, "mult",
                                            _float(args[1], "multiplier")))
        elif args[0].startswith(("+", "-")):
            _mutate(session, editing.nbeads(link, "delta",
                                            _int(args[0], "delta")))
        else:
            _mutate(session, editing.nbeads(link, "absolute",
                                            _int(args[0], "count")))
        return None
    if cmd == "refine":
        _need_args(args, 1, "refine factor | refine equilateral length")
        if args[0] == "equilateral":
            _need_args(args, 2, "refine equilateral length")
            _mutate(session, editing.refine_equilateral(
                link, _float(args[1], "length")))
        else:
            _mutate(session, editing.refine(link, _float(args[0],
                                                         "factor")))
        return None
    if cmd == "jitter":
        _need_args(args, 1, "jitter magnitude")
        _mutate(session, editing.jitter(link, _float(args[0], "magnitude"),
                                        session.next_seed()))
        return None

    # ---- topology edits ----
    if cmd == "cut":
        _need_args(args, 1, "cut N | cut outside axis offset | cut pieces N")
        if args[0] == "outside":
            _need_args(args, 3, "cut outside axis offset")
            _mutate(session, editing.cut_outside(link, args[1],
                                                 _float(args[2], "offset")))
        elif args[0] == "pieces":
            _need_args(args, 2, "cut pieces N")
            _mutate(session, editing.cut_pieces(link,
                                                _int(args[1], "count")))
        else:
            _mutate(session, editing.cut(link, _int(args[0], "edge")))
        return None
    if cmd == "join":
        _need_args(args, 2, "join F0|L0 F1|L1")
        _mutate(session, editing.join(link, args[0], args[1]))
        return None
    if cmd == "open":
        _need_args(args, 1, "open N|all")
        _mutate(session, editing.open_component(link, _comp_arg(args[0])))
        return None
    if cmd == "close":
        _need_args(args, 1, "close N|all")
        _mutate(session, editing.close_component(link, _comp_arg(args[0])))
        return None
    if cmd == "shift":
        _need_args(args, 1, "shift N|maxx|minx|maxy|miny|maxz|minz")
        amount = args[0]
        if amount.lstrip("+-").isdigit():
            amount = int(amount)
        _mutate(session, editing.shift(link, amount))
        return None
    if cmd == "revbeads":
        which = _comp_arg(args[0]) if args else "all"
        _mutate(session, editing.revbeads(link, which))
        return None
    if cmd == "duplicate":
        which = _int(args[0], "component") if args else 0
        _mutate(session, editing.duplicate(link, which))
        return None
    if cmd == "delete":
        _need_args(args, 1, "delete N|all | delete downto N")
        if args[0] == "downto":
            _need_args(args, 2, "delete downto N")
            cfg = session.relax_config()
            _mutate(session, dynamics.delete_downto(
                link, cfg, _int(args[1], "target")))
            return "beads: %d" % session.link.nbeads
        _mutate(session, editing.delete_components(link,
                                                   _comp_arg(args[0])))
        return None
    if cmd == "dbeads":
        cfg = session.relax_config()
        _mutate(session, dynamics.delete_downto(link, cfg, 0))
        return "beads: %d" % session.link.nbeads
    if cmd == "keep":
        _need_args(args, 1, "keep N")
        _mutate(session, editing.keep_component(link,
                                                _int(args[0], "component")))
        return None
    if cmd == "swap":
        _need_args(args, 1, "swap I J | swap random")
        if args[0] == "random":
            _mutate(session, editing.swap_random(link, session.next_seed()))
        else:
            _need_args(args, 2, "swap I J")
            _mutate(session, editing.swap(link, _int(args[0]),
                                          _int(args[1])))
        return None

    # ---- visibility ----
    if cmd == "hide":
        _need_args(args, 1, "hide N|all")
        _mutate(session, polylink.hide(link, _comp_arg(args[0])))
        return None
    if cmd == "unhide":
        _need_args(args, 1, "unhide N|all")
        _mutate(session, polylink.unhide(link, _comp_arg(args[0])))
        return None
    if cmd == "head":
        _need_args(args, 1, "head N|off")
        _mutate(session, polylink.head(
            link, "off" if args[0] == "off" else _int(args[0], "count")))
        return None

    # ---- dynamics ----
    if cmd in ("go", "ago"):
        nsteps = 1000
        i = 0
        explicit = False
        while i < len(args):
            if args[i] == "beadlimit":
                _need_args(args, i + 2, "go [N] [beadlimit N]")
                session.params.set("beadlimit", args[i + 1])
                i += 2
            else:
                nsteps = _int(args[i], "step count")
                explicit = True
                i += 1
        atomic = cmd == "ago" or session.headless \
            or not session.interactive_go
        if atomic:
            cfg = session.relax_config()
            session.sync_relax_state()
            new_link, new_state = dynamics.run(link, cfg,
                                               session.relax_state, nsteps)
            session.undo_slot = session.link
            session.relax_state = new_state
            session.set_link(new_link)
            return None
        # interactive go: toggle the background relaxation
        session.relax_running = not session.relax_running
        if session.relax_running and explicit:
            session.relax_budget = nsteps
        else:
            session.relax_budget = None
        return "relaxation %s" % ("running" if session.relax_running
                                  else "stopped")
    if cmd == "stop":
        session.relax_running = False
        return "relaxation stopped"
    if cmd == "collision":
        _need_args(args, 1, "collision fast|allow")
        if args[0] not in ("fast", "allow"):
            raise _Complaint("collision mode must be fast or allow")
        session.collision = args[0]
        return None
    if cmd == "safe":
        report = dynamics.check_safe(link, session.params.get("close"))
        return "safe" if report.safe else \
            "NOT safe: min distance %s < close" % _fmt(report.min_distance)
    if cmd == "distance":
        dist, pair = polylink.min_nonadjacent_distance(link)
        return "min non-adjacent distance %s (component %d edge %d / " \
            "component %d edge %d)" % (_fmt(dist), pair[0][0], pair[0][1],
                                       pair[1][0], pair[1][1])
    if cmd == "until":
        if len(args) >= 2 and args[0] == "safe":
            close = session.params.get("close")
            for _ in range(10 ** 6):
                if dynamics.check_safe(session.link, close).safe:
                    return None
                for sub in parse_line(args[1]):
                    dispatch(session, sub)
            raise _Complaint("until safe: iteration limit reached")
        raise _Complaint('usage: until safe "command"')
    if cmd == "mass":
        if args and args[0] == "open":
            _mutate(session, dynamics.mass_open(link))
            session.params.set("anch", True)
            return None
        raise _Complaint("usage: mass open")

    # ---- measures ----
    if cmd == "acn":
        acn, writhe = measures.acn_writhe(link)
        return ["acn %s" % _fmt(acn), "writhe %s" % _fmt(writhe)]
    if cmd == "lnknum":
        mat = measures.lnknum(link)
        return [" ".join("%3d" % v for v in row) for row in mat]
    if cmd == "length":
        rows = measures.length_stats(link)
        return ["component %d: total %s min %s max %s ratio %s mean %s"
                % (i, _fmt(r["total"]), _fmt(r["min"]), _fmt(r["max"]),
                   _fmt(r["ratio"]), _fmt(r["mean"]))
                for i, r in enumerate(rows)]
    if cmd == "angle":
        turning = bool(args and args[0] == "turning")
        if turning:
            session.angle_turning = not session.angle_turning
        rows = measures.angle_stats(link, turning=session.angle_turning)
        label = "turning" if session.angle_turning else "internal"
        return ["component %d (%s): min %s max %s ratio %s mean %s"
                % (i, label, _fmt(r["min"]), _fmt(r["max"]),
                   _fmt(r["ratio"]), _fmt(r["mean"]))
                for i, r in enumerate(rows)]
    if cmd == "rog":
        return "radius of gyration %s" % _fmt(
            measures.radius_of_gyration(link))
    if cmd == "info":
        data = measures.info(link)
        if args and args[0] == "s":
            return "%d components, %d beads" % (data["components"],
                                                data["beads"])
        lines = ["components %d, beads %d, edges %d"
                 % (data["components"], data["beads"], data["edges"])]
        for i in range(data["components"]):
            lines.append("component %d: %d beads, %s%s"
                         % (i, data["bead_counts"][i],
                            "closed" if data["closed"][i] else "open",
                            ", hidden" if data["hidden"][i] else ""))
        return lines
    if cmd == "thickness":
        return "thickness %s" % _fmt(measures.thickness(link))
    if cmd == "energy":
        if args and args[0] == "model":
            if len(args) == 1:
                return ["energy models: MD symm nbeads",
                        "current: %s" % session.energy_model]
            if args[1] not in ("MD", "symm", "nbeads"):
                raise _Complaint("unknown energy model %r" % args[1])
            session.energy_model = args[1]
            return None
        model = session.energy_model
        return "energy (%s) %s" % (model, _fmt(measures.energy(link,
                                                               model)))

    # ---- codes ----
    if cmd == "xing":
        return "crossings %d" % codes.xing(link, session.projection())
    if cmd in ("dowker", "gauss"):
        if args and args[0] == "projection":
            _need_args(args, 2, "%s projection z|view" % cmd)
            if args[1] not in ("z", "view"):
                raise _Complaint("projection must be z or view")
            session.dowker_projection = args[1]
            return None
        if cmd == "dowker":
            code = codes.dowker(link, session.projection())
            return codes.format_dt(code) if code else "(no crossings)"
        tokens_per_comp = codes.gauss_extended(link, session.projection())
        return codes.format_egc(tokens_per_comp) or "(no crossings)"

    # ---- constructors ----
    if cmd == "unknot":
        n = _int(args[0], "beads") if args else session.params.get(
            "N-torus")
        radius = _float(args[1], "radius") if len(args) > 1 else 5.0
        _mutate(session, construct.unknot(n, radius))
        return None
    if cmd == "torus":
        _need_args(args, 2, "torus p q [n [R [r]]]")
        p = _int(args[0], "p")
        q = _int(args[1], "q")
        n = _int(args[2], "beads") if len(args) > 2 \
            else session.params.get("N-torus")
        R = _float(args[3], "R") if len(args) > 3 \
            else session.params.get("R-torus")
        r = _float(args[4], "r") if len(args) > 4 \
            else session.params.get("d-torus")
        _mutate(session, construct.torus(p, q, n, R, r))
        return None
    if cmd == "lissajous":
        _need_args(args, 3, "lissajous nx ny nz [px py pz [n]]")
        freq = [_int(a) for a in args[:3]]
        phases = [_float(a) for a in args[3:6]] if len(args) >= 6 \
            else [0.0, np.pi / 2, np.pi / 4]
        n = _int(args[6], "beads") if len(args) > 6 else 100
        link_new, report = construct.lissajous(
            *freq, *phases, n, close=session.params.get("close"))
        _mutate(session, link_new)
        return None if report.safe else \
            "note: embedding is not safe (min distance %s)" \
            % _fmt(report.min_distance)
    if cmd == "chain":
        _need_args(args, 1, "chain N [beads]")
        beads = _int(args[1], "beads") if len(args) > 1 else 16
        _mutate(session, construct.chain(_int(args[0], "components"),
                                         beads))
        return None
    if cmd == "braid":
        _need_args(args, 1, "braid WORD")
        word = construct.parse_braid(" ".join(args))
        _mutate(session, construct.braid_close(word))
        return "braid %s on %d strands, %d components" \
            % (word.render(), word.strands, session.link.ncomponents)
    if cmd == "conway":
        _need_args(args, 1, "conway p1,p2,...")
        _mutate(session, construct.conway_pretzel(" ".join(args)))
        return None
    if cmd == "line":
        vals = [a for a in args if a not in ("from", "to")]
        _need_args(vals, 6, "line [from] x y z [to] x y z")
        a = [_float(v) for v in vals[:3]]
        b = [_float(v) for v in vals[3:6]]
        n = _int(vals[6], "beads") if len(vals) > 6 else 2
        _mutate(session, construct.line(a, b, n))
        return None

    # ---- io ----
    if cmd == "load":
        _need_args(args, 1, "load [sum|combine] name [component]")
        mode = None
        rest = args
        if args[0] in ("sum", "combine"):
            mode = args[0]
            rest = args[1:]
            _need_args(rest, 1, "load %s name" % mode)
        name = rest[0]
        incoming = _load_by_name(session, name)
        if incoming is None:
            raise _Complaint("cannot find %r" % name)
        if mode is None:
            _mutate(session, incoming)
        elif mode == "combine":
            _mutate(session, PolyLink(list(link.components)
                                      + list(incoming.components)))
        else:
            comp = _int(rest[1], "component") if len(rest) > 1 else 0
            _mutate(session, _connect_sum(link, incoming, comp))
        return None
    if cmd == "save":
        _need_args(args, 1, "save name[.ext]")
        name, data = fileio.save_by_name(
            session.link, args[0],
            eps_fn=lambda lk: epsdiag.psout(lk, session.view,
                                            session.eps_options()),
            obj_kwargs={"radius": session.params.get("sradius"),
                        "nseg": session.params.get("nseg"),
                        "ncur": session.params.get("ncur")})
        path = session.write_file(name, data)
        session.last_save = path
        return "saved %s" % name
    if cmd == "export":
        _need_args(args, 1, "export name")
        name = args[0] if args[0].lower().endswith(".obj") \
            else args[0] + ".obj"
        data = fileio.save_obj(session.link,
                               radius=session.params.get("sradius"),
                               nseg=session.params.get("nseg"),
                               ncur=session.params.get("ncur"))
        session.write_file(name, data)
        return "exported %s" % name
    if cmd == "psout":
        _need_args(args, 1, "psout name")
        name = args[0] if args[0].lower().endswith(".eps") \
            else args[0] + ".eps"
        data = epsdiag.psout(session.link, session.view,
                             session.eps_options())
        session.write_file(name, data)
        return "wrote %s" % name
    if cmd == "psoption":
        if len(args) >= 2 and args[0] == "bbox":
            if args[1] not in ("tight", "square"):
                raise _Complaint("bbox must be tight or square")
            session._ps_bbox = args[1]
            return None
        raise _Complaint("usage: psoption bbox tight|square")
    if cmd == "twfix":
        if not link.components:
            raise _Complaint("nothing loaded")
        angle = fileio.twfix_angle(link.components[0],
                                   session.params.get("nseg"),
                                   session.params.get("ncur"))
        session.tube_twist = angle
        return "twist %s" % _fmt(angle)

    # ---- session / misc ----
    if cmd == "undo":
        if session.undo_slot is None:
            raise _Complaint("nothing to undo")
        session.undo_slot, new_link = session.link, session.undo_slot
        session.set_link(new_link)
        return None
    if cmd == "alias":
        _need_args(args, 2, 'alias name "template"')
        session.aliases[args[0]] = " ".join(args[1:]) \
            if len(args) > 2 else args[1]
        return None
    if cmd == "reset":
        everything = bool(args and args[0] == "all")
        session.view = ViewTransform()
        session.display_mode = "s"
        session.dowker_projection = "z"
        session.collision = "fast"
        session._ps_bbox = "tight"
        session.params.reset()
        session.relax_running = False
        session.aliases = {k: v for k, v in session.aliases.items()
                           if not k.startswith("~")}
        if everything:
            session.aliases = {}
            session.undo_slot = None
            session.set_link(PolyLink([]))
        else:
            session.sync_relax_state()
        return None
    if cmd == "version":
        from . import __version__
        return "knotforge %s" % __version__
    if cmd == "cwd":
        return session.cwd
    if cmd == "path":
        return ["read path: %s, bundled catalogue" % session.cwd,
                "write path: %s" % session.cwd,
                "execute path: %s" % session.cwd]
    if cmd == "knot":
        ncomp = _int(args[0], "components") if args else None
        g = rng.generator(session.next_seed())
        name = catalogue.random_name(g, ncomp)
        if name is None:
            raise _Complaint("no catalogue entry with %s components"
                             % args[0])
        _mutate(session, catalogue.build(name))
        return "loaded %s" % name
    if cmd == "nap":
        _need_args(args, 1, "nap seconds")
        if not session.headless:
            time.sleep(_float(args[0], "seconds"))
        return None
    if cmd == "timer":
        _need_args(args, 2, "timer start|check name")
        if args[0] == "start":
            session.timers[args[1]] = time.monotonic()
            return None
        if args[0] == "check":
            if args[1] not in session.timers:
                raise _Complaint("no timer %r" % args[1])
            return "timer %s: %.3f s" % (
                args[1], time.monotonic() - session.timers[args[1]])
        raise _Complaint("usage: timer start|check name")
    if cmd == "tfunction":
        _need_args(args, 2, "tfunction seconds command...")
        delay = _float(args[0], "seconds")
        session.delayed.append((time.monotonic() + delay,
                                " ".join(args[1:])))
        return None
    if cmd in ("exit", "quit"):
        raise ScriptExit()
    if cmd == "display":
        return None                      # frame-buffer hint; nothing here
    if cmd == "mode":
        _need_args(args, 1, "mode cb|s")
        if args[0] not in ("cb", "s"):
            raise _Complaint("mode must be cb or s")
        session.display_mode = args[0]
        return None
    if cmd == "luxo":
        session.params.set("ncur", 11)
        session.params.set("nseg", 24)
        return None
    if cmd == "cheapo":
        session.params.set("ncur", 3)
        session.params.set("nseg", 6)
        return None
    if cmd in ("colour", "color"):
        _need_args(args, 2, "colour N|all colorspec")
        spec = colors.parse_color(" ".join(args[1:]))
        which = _comp_arg(args[0])
        comps = list(link.components)
        idxs = range(len(comps)) if which == "all" else [which]
        for i in idxs:
            c = link.component(i)
            comps[i] = type(c)(c.vertices.copy(), closed=c.closed,
                               color=spec, hidden=c.hidden)
        _mutate(session, link.with_components(comps))
        return None
    if cmd == "matrgb":
        _need_args(args, 4, "matrgb bead|knot r g b")
        vals = tuple(_float(a) for a in args[1:4])
        if args[0] == "bead":
            session.bead_color = vals
            return None
        if args[0] == "knot":
            comps = []
            for c in link.components:
                comps.append(type(c)(c.vertices.copy(), closed=c.closed,
                                     color=vals, hidden=c.hidden))
            _mutate(session, link.with_components(comps))
            return None
        raise _Complaint("usage: matrgb bead|knot r g b")
    if cmd == "show":
        session.show_flags.symmetric_difference_update(args or ["labels"])
        return None
    if cmd == "draw":
        session.draw_style = args[0] if args else "normal"
        return None
    if cmd == "panel":
        return "note: no control panel in the headless engine"
    if cmd == "allocate":
        return "note: storage grows dynamically; nothing to allocate"
    if cmd == "parameters":
        prefix = args[0] if args else ""
        return session.params.listing(prefix)

    raise _Complaint("unknown command %r" % cmd)


def _load_by_name(session, name):
    data = session.read_file(name)
    if data is not None:
        return load_link_data(data)
    if catalogue.has(name):
        return catalogue.build(name)
    return None


def _connect_sum(link, other, comp_index):
    """Connected sum: splice `other` into the chosen component of link.

    The incoming link is placed beside the chosen component; the two
    nearest-facing edges are cut and cross-joined so orientations are
    preserved.  Extra components of `other` ride along unchanged.
    """
    from . import kernels
    if not link.components:
        return other
    target = link.component(comp_index)
    if not target.closed or not other.components \
            or not other.components[0].closed:
        raise _Complaint("load sum needs closed components")
    mover = other.components[0]
    # place the incoming link just outside the target along +x
    gap = 1.0
    off = np.array([target.vertices[:, 0].max() + gap
                    - mover.vertices[:, 0].min(), 0.0, 0.0])
    off = off + np.array([0.0,
                          target.vertices[:, 1].mean()
                          - mover.vertices[:, 1].mean(),
                          target.vertices[:, 2].mean()
                          - mover.vertices[:, 2].mean()])
    moved = other.map_vertices(lambda v: v + off)
    mover = moved.components[0]
    # nearest pair of edges between the two rings
    va, vb = target.vertices, mover.vertices
    na, nb = len(va), len(vb)
    best = (np.inf, 0, 0)
    for i in range(na):
        p0, p1 = va[i], va[(i + 1) % na]
        for j in range(nb):
            d = kernels.seg_dist(p0, p1, vb[j], vb[(j + 1) % nb])
            if d < best[0]:
                best = (d, i, j)
    _, i, j = best
    ring = np.concatenate([
        va[:i + 1],
        np.roll(vb, -(j + 1), axis=0),
        va[i + 1:],
    ])
    new_comp = type(target)(ring, closed=True, color=target.color,
                            hidden=target.hidden)
    comps = list(link.components)
    comps[comp_index] = new_comp
    comps.extend(moved.components[1:])
    return PolyLink(comps)


def run_line(session, text):
    """Parse and dispatch one line; returns output lines."""
    out = []
    # drain due delayed commands first
    now = time.monotonic()
    due = [cmd for when, cmd in session.delayed if when <= now]
    session.delayed = [(w, c) for w, c in session.delayed if w > now]
    for cmd in due:
        for inv in parse_line(cmd):
            out.extend(dispatch(session, inv))
    for inv in parse_line(text):
        out.extend(dispatch(session, inv))
    return out


def run_script(session, text, stop_on_exit=True, emit=print):
    """Execute a script (string of lines); exit stops at that line."""
    for line in text.splitlines():
        try:
            out = run_line(session, line)
        except ScriptExit:
            if stop_on_exit:
                return session
            raise
        for entry in out:
            emit(entry)
    return session


def replay(history, seed, cwd=None):
    """Fresh session re-running a recorded command history."""
    session = Session(seed=seed, cwd=cwd)
    for raw in list(history):
        for inv in parse_line(raw):
            try:
                dispatch(session, inv)
            except ScriptExit:
                break
    return session
