"""Web bridge: one session, one worker thread, many viewers.

Clients talk JSON over a websocket: they send commands, bead drags,
and sketched components; the server streams numbered snapshots (every
dstep relaxation steps and after every mutating command) plus command
output and complaints.  The worker thread owns the session; messages
arriving during a running relaxation apply between steps.
"""

import asyncio
import json
import os
import queue
import threading
from contextlib import asynccontextmanager
from dataclasses import replace

import numpy as np

from . import dynamics, kernels
from .colors import auto_color
from .interp import DieUponComplaint, ScriptExit, Session, run_line
from .polylink import Component, PolyLink, fitto

SNAPSHOT_PARAMS = ("stusplit", "close", "max-dir", "dstep")


class SessionServer:
    def __init__(self, session=None):
        self.session = session or Session()
        self.session.headless = False
        self.session.interactive_go = True
        self.session.on_mutate = self._mark_dirty
        self.mailbox = queue.Queue()
        self.subscribers = {}           # sid -> [queue, per-connection seq]
        self._next_sub = 0
        self._sub_lock = threading.Lock()
        self._dirty = False
        self.shutdown = threading.Event()
        self.worker = threading.Thread(target=self._loop, daemon=True)

    # -- lifecycle ----------------------------------------------------
    def start(self):
        if not self.worker.is_alive():
            self.worker.start()

    def stop(self):
        self.shutdown.set()
        if self.worker.is_alive():
            self.worker.join(timeout=2.0)
        with self._sub_lock:
            for entry in self.subscribers.values():
                entry[0].put(None)
            self.subscribers.clear()

    # -- subscriptions -------------------------------------------------
    def subscribe(self):
        """New outbound queue; a full snapshot always arrives first."""
        q = queue.Queue()
        snap = self._snapshot_body()
        with self._sub_lock:
            sid = self._next_sub
            self._next_sub += 1
            self.subscribers[sid] = [q, 1]
            q.put(dict(snap, seq=1))
        return sid, q

    def unsubscribe(self, sid):
        with self._sub_lock:
            entry = self.subscribers.pop(sid, None)
        if entry is not None:
            entry[0].put(None)

    def _broadcast(self, message):
        """Fan out; snapshots get a gapless per-connection sequence."""
        with self._sub_lock:
            for entry in self.subscribers.values():
                if message.get("type") == "snapshot":
                    entry[1] += 1
                    entry[0].put(dict(message, seq=entry[1]))
                else:
                    entry[0].put(message)

    # -- snapshots -----------------------------------------------------
    def _mark_dirty(self):
        self._dirty = True

    def _snapshot_body(self):
        s = self.session
        comps = []
        for i, c in enumerate(s.link.components):
            color = c.color if c.color is not None else auto_color(
                i, s.params.get("hstart"), s.params.get("hincr"),
                s.params.get("satur"), s.params.get("value"))
            comps.append({
                "vertices": [[float(x) for x in v] for v in c.vertices],
                "closed": bool(c.closed),
                "hidden": bool(c.hidden),
                "color": [float(x) for x in color],
            })
        flat = s.link.flatten()
        safe = True
        if len(flat.edges):
            safe = not kernels.any_below(flat.positions, flat.edges,
                                         s.params.get("close"))
        return {
            "type": "snapshot",
            "seq": 0,                    # per-connection, set on fanout
            "components": comps,
            "relax": "running" if s.relax_running else "stopped",
            "params": {name: s.params.get(name)
                       for name in SNAPSHOT_PARAMS},
            "safe": bool(safe),
            "head": s.link.head_visible,
        }

    def _emit_snapshot(self):
        self._dirty = False
        self._broadcast(self._snapshot_body())

    # -- the worker ----------------------------------------------------
    def submit(self, message):
        self.mailbox.put(message)

    def _loop(self):
        while not self.shutdown.is_set():
            busy = self.session.relax_running
            try:
                msg = self.mailbox.get(timeout=0.001 if busy else 0.05)
            except queue.Empty:
                msg = None
            if msg is not None:
                self._handle(msg)
                if self._dirty:
                    self._emit_snapshot()
            if self.session.relax_running:
                self._tick()

    def _tick(self):
        s = self.session
        try:
            cfg = s.relax_config()
        except Exception as exc:
            s.relax_running = False
            self._broadcast({"type": "complaint", "text": "*** %s" % exc})
            return
        chunk = cfg.dstep
        if s.relax_budget is not None:
            chunk = min(chunk, s.relax_budget)
        if chunk <= 0:
            s.relax_running = False
            self._emit_snapshot()
            return
        s.sync_relax_state()
        try:
            link, state = dynamics.run(s.link, replace(cfg, stusplit=0),
                                       s.relax_state, chunk)
        except Exception as exc:
            s.relax_running = False
            self._broadcast({"type": "complaint", "text": "*** %s" % exc})
            self._emit_snapshot()
            return
        s.link = link
        s.relax_state = state
        s.steps_since_check += chunk
        if s.relax_budget is not None:
            s.relax_budget -= chunk
            if s.relax_budget <= 0:
                s.relax_running = False
                s.relax_budget = None
        if cfg.stusplit > 0 and s.steps_since_check >= cfg.stusplit:
            s.link = dynamics.stuck_check(s.link, cfg, s.relax_state)
            s.steps_since_check = 0
        self._emit_snapshot()

    def _handle(self, message):
        kind = message.get("type")
        try:
            if kind == "command":
                self._handle_command(str(message.get("text", "")))
            elif kind == "drag":
                self._handle_drag(message)
            elif kind == "sketch_commit":
                self._handle_sketch(message)
            else:
                self._broadcast({"type": "complaint",
                                 "text": "*** unknown message type %r"
                                 % kind})
        except DieUponComplaint as exc:
            self.session.relax_running = False
            self._broadcast({"type": "complaint", "text": str(exc)})
        except ScriptExit:
            self.session.relax_running = False
        except Exception as exc:   # keep the session alive
            self._broadcast({"type": "complaint",
                             "text": "*** internal error: %s" % exc})

    def _handle_command(self, text):
        was_running = self.session.relax_running
        for line in run_line(self.session, text):
            msg_type = "complaint" if line.startswith("***") else "output"
            self._broadcast({"type": msg_type, "text": line})
        if self.session.relax_running != was_running:
            self._mark_dirty()          # status flips show up immediately

    def _handle_drag(self, message):
        s = self.session
        comp = int(message["component"])
        bead = int(message["bead"])
        target = np.asarray(message["position"], dtype=float).reshape(3)
        link = s.link
        c = link.component(comp)
        if not 0 <= bead < c.nbeads:
            raise ValueError("no bead %d in component %d" % (bead, comp))
        flat = link.flatten()
        gid = flat.offsets[comp] + bead
        cur = flat.positions[gid]
        delta = target - cur
        norm = float(np.linalg.norm(delta))
        max_dir = s.params.get("max-dir")
        if norm > max_dir:
            delta = delta * (max_dir / norm)
        moved = kernels.drag_move(flat.positions, flat.edges, flat.vedges,
                                  gid, cur + delta, s.params.get("close"),
                                  s.collision == "fast")
        if moved:
            s.link = flat.rebuild_link()
            self._mark_dirty()

    def _handle_sketch(self, message):
        s = self.session
        pts = [[float(x) for x in p] for p in message.get("points", [])]
        closed = bool(message.get("closed", False))
        cleaned = []
        for p in pts:
            if not cleaned or np.linalg.norm(
                    np.array(p) - np.array(cleaned[-1])) > 1e-9:
                cleaned.append(p)
        if closed and len(cleaned) > 2 and np.linalg.norm(
                np.array(cleaned[0]) - np.array(cleaned[-1])) <= 1e-9:
            cleaned.pop()
        if len(cleaned) < (3 if closed else 2):
            raise ValueError("sketch needs %d points"
                             % (3 if closed else 2))
        comp = Component(np.array(cleaned), closed=closed)
        new_link = PolyLink(list(s.link.components) + [comp],
                            head_visible=s.link.head_visible)
        close = s.params.get("close")
        if not dynamics.check_safe(new_link, close).safe:
            new_link = fitto(new_link, "mindist", max(2.0 * close, 0.5))
            self._broadcast({"type": "output",
                             "text": "sketch rescaled to a safe size"})
        s.undo_slot = s.link
        s.set_link(new_link)
        self._broadcast({"type": "output",
                         "text": "sketch committed (%d beads, %s)"
                         % (len(cleaned),
                            "closed" if closed else "open")})


def static_dir():
    """Directory holding the viewer assets (built frontend preferred)."""
    env = os.environ.get("KNOTFORGE_UI_DIR")
    if env and os.path.isdir(env):
        return env
    here = os.path.dirname(os.path.abspath(__file__))
    for cand in (
        os.path.join(here, "..", "..", "frontend", "dist"),
        os.path.join(here, "static"),
    ):
        cand = os.path.normpath(cand)
        if os.path.isdir(cand):
            return cand
    return None


def build_app(server):
    from fastapi import FastAPI, WebSocket, WebSocketDisconnect
    from fastapi.responses import HTMLResponse
    from fastapi.staticfiles import StaticFiles

    @asynccontextmanager
    async def lifespan(app):
        server.start()
        yield
        server.stop()

    app = FastAPI(lifespan=lifespan)
    assets = static_dir()

    if not assets or not os.path.isfile(os.path.join(assets,
                                                     "index.html")):
        @app.get("/")
        async def index():
            return HTMLResponse(
                "<html><body><h1>knotforge</h1>"
                "<p>No viewer build found; connect to /ws directly.</p>"
                "</body></html>")

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        sid, q = server.subscribe()
        loop = asyncio.get_event_loop()

        async def pump():
            while True:
                msg = await loop.run_in_executor(None, q.get)
                if msg is None:
                    break
                try:
                    await websocket.send_text(json.dumps(msg))
                except Exception:
                    break

        task = asyncio.create_task(pump())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    data = json.loads(text)
                except json.JSONDecodeError:
                    await websocket.send_text(json.dumps(
                        {"type": "complaint",
                         "text": "*** message is not valid JSON"}))
                    continue
                server.submit(data)
        except WebSocketDisconnect:
            pass
        finally:
            server.unsubscribe(sid)
            task.cancel()

    if assets and os.path.isfile(os.path.join(assets, "index.html")):
        # mounted last so /ws keeps priority; html=True serves index at /
        app.mount("/", StaticFiles(directory=assets, html=True),
                  name="viewer")

    return app


def serve(session, address):
    """Serve until interrupted; address is host:port or just a port."""
    import uvicorn
    if ":" in address:
        host, port = address.rsplit(":", 1)
    else:
        host, port = "127.0.0.1", address
    server = SessionServer(session)
    app = build_app(server)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port),
                log_level="warning")
