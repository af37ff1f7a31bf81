// Wire the widgets, the canvas, and the socket together.

import * as controls from "./controls.js";
import { connect } from "./net.js";
import { ClientMessage, dragMessage } from "./protocol.js";
import { drawFrame, nearestBead } from "./render.js";
import { appendLog, ClientState, ingestSnapshot, initialState, Mode }
  from "./state.js";
import { addPoint, cancel, commit, freshSketch, SketchState }
  from "./sketch.js";
import { apply, orbit, pan, unproject, zoom } from "./view.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

let state: ClientState = initialState();
let sketch: SketchState = freshSketch();
let dragTarget: { component: number; bead: number } | null = null;

const wsUrl = (location.protocol === "https:" ? "wss://" : "ws://")
  + location.host + "/ws";

const conn = connect(wsUrl, (msg) => {
  if (msg.type === "snapshot") {
    state = ingestSnapshot(state, msg);
    updateStatus();
  } else {
    state = appendLog(state, msg.text);
    renderLog();
  }
  requestDraw();
}, (up) => {
  state = { ...state, connected: up };
  updateStatus();
});

function send(message: ClientMessage | null) {
  if (message) conn.send(message);
}

// ---- rendering ----
let drawQueued = false;
function requestDraw() {
  if (drawQueued) return;
  drawQueued = true;
  requestAnimationFrame(() => {
    drawQueued = false;
    resizeCanvas();
    drawFrame(ctx, canvas.width, canvas.height, state.snapshot,
              state.view, state.mode === "sketch" ? sketch : null,
              (document.getElementById("beads") as HTMLInputElement)
                .checked);
  });
}

function resizeCanvas() {
  const rect = canvas.getBoundingClientRect();
  if (canvas.width !== rect.width || canvas.height !== rect.height) {
    canvas.width = rect.width;
    canvas.height = rect.height;
  }
}

function updateStatus() {
  const el = document.getElementById("status")!;
  const snap = state.snapshot;
  const bits = [state.connected ? "connected" : "offline"];
  if (snap) {
    const beads = snap.components.reduce(
      (n, c) => n + c.vertices.length, 0);
    bits.push(`${snap.components.length} comp / ${beads} beads`);
    bits.push(snap.relax);
    bits.push(snap.safe ? "safe" : "UNSAFE");
  }
  el.textContent = bits.join(" | ");
  const goBtn = document.getElementById("go") as HTMLButtonElement;
  goBtn.textContent = snap?.relax === "running" ? "stop" : "go";
  goBtn.classList.toggle("running", snap?.relax === "running");
}

function renderLog() {
  const el = document.getElementById("log")!;
  el.textContent = state.log.slice(-8).join("\n");
}

// ---- pointer interaction ----
let pointerDown = false;
let lastX = 0;
let lastY = 0;

canvas.addEventListener("contextmenu", (e) => e.preventDefault());

canvas.addEventListener("pointerdown", (e) => {
  pointerDown = true;
  lastX = e.offsetX;
  lastY = e.offsetY;
  canvas.setPointerCapture(e.pointerId);
  if (state.mode === "sketch") {
    sketch = addPoint(sketch, state.view, {
      x: e.offsetX, y: e.offsetY,
      over: e.button === 2 || e.shiftKey, dragging: false,
    }, canvas.width, canvas.height);
    requestDraw();
  } else if (state.mode === "drag" && state.snapshot) {
    dragTarget = nearestBead(state.snapshot, state.view, e.offsetX,
                             e.offsetY, canvas.width, canvas.height);
  }
});

canvas.addEventListener("pointermove", (e) => {
  if (!pointerDown) return;
  const dx = e.offsetX - lastX;
  const dy = e.offsetY - lastY;
  if (state.mode === "view") {
    // left drag rotates; shift-drag scales; middle or alt/ctrl pans
    if (e.buttons === 1 && e.shiftKey) {
      state = { ...state, view: zoom(state.view, Math.exp(-dy * 0.01)) };
    } else if (e.buttons === 4 || e.altKey || e.ctrlKey) {
      state = { ...state, view: pan(state.view, dx, dy) };
    } else if (e.buttons === 1) {
      state = { ...state, view: orbit(state.view, dx, dy) };
    }
    requestDraw();
  } else if (state.mode === "sketch") {
    sketch = addPoint(sketch, state.view, {
      x: e.offsetX, y: e.offsetY,
      over: (e.buttons & 2) !== 0 || e.shiftKey, dragging: true,
    }, canvas.width, canvas.height);
    requestDraw();
  } else if (state.mode === "drag" && dragTarget && state.snapshot) {
    const comp = state.snapshot.components[dragTarget.component];
    const current = comp.vertices[dragTarget.bead];
    const depth = apply(state.view.rotation, current)[2];
    const target = unproject(state.view, e.offsetX, e.offsetY, depth,
                             canvas.width, canvas.height);
    send(dragMessage(dragTarget.component, dragTarget.bead, target));
  }
  lastX = e.offsetX;
  lastY = e.offsetY;
});

canvas.addEventListener("pointerup", (e) => {
  pointerDown = false;
  dragTarget = null;
  canvas.releasePointerCapture(e.pointerId);
});

canvas.addEventListener("wheel", (e) => {
  e.preventDefault();
  state = { ...state, view: zoom(state.view, Math.exp(-e.deltaY * 0.001)) };
  requestDraw();
});

// ---- widgets ----
function on(id: string, event: string, fn: (e: Event) => void) {
  document.getElementById(id)!.addEventListener(event, fn);
}

on("go", "click", () => send(controls.goToggle()));
on("dbeads", "click", () => send(controls.dbeadsCommand()));
on("split", "click", () => send(controls.splitCommand()));
on("stusplit", "input", (e) => {
  const v = Number((e.target as HTMLInputElement).value);
  document.getElementById("stusplit-value")!.textContent = String(v);
  send(controls.stusplitCommand(v));
});
on("load", "click", () => {
  const name = (document.getElementById("name") as HTMLInputElement)
    .value;
  if (name.trim()) send(controls.loadCommand(name));
});
on("save", "click", () => {
  const name = (document.getElementById("name") as HTMLInputElement)
    .value;
  if (name.trim()) send(controls.saveCommand(name));
});
on("colour", "input", (e) => {
  const hex = (e.target as HTMLInputElement).value;
  const comp = Number(
    (document.getElementById("colour-comp") as HTMLInputElement).value);
  send(controls.colourCommand(comp, controls.hexToRgb(hex)));
});
on("command", "keydown", (e) => {
  const kb = e as KeyboardEvent;
  if (kb.key === "Enter") {
    const input = e.target as HTMLInputElement;
    send(controls.rawCommand(input.value));
    input.value = "";
  }
});
on("vscale", "input", (e) => {
  // screen-space scale only; no command goes out
  const v = Number((e.target as HTMLInputElement).value);
  state = { ...state, view: { ...state.view, scale: v } };
  requestDraw();
});
on("screenshot", "click", () => {
  canvas.toBlob((blob) => {
    if (!blob) return;
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "knot.png";
    a.click();
    URL.revokeObjectURL(a.href);
  });
});

for (const mode of ["view", "drag", "sketch"] as Mode[]) {
  on(`mode-${mode}`, "change", () => {
    state = { ...state, mode };
    if (mode !== "sketch") sketch = cancel(sketch);
    document.getElementById("sketch-tools")!.classList.toggle(
      "hidden", mode !== "sketch");
    requestDraw();
  });
}

on("sketch-threshold", "input", (e) => {
  sketch = { ...sketch,
             threshold: Number((e.target as HTMLInputElement).value) };
});
on("sketch-open", "click", () => {
  send(commit(sketch, false));
  sketch = cancel(sketch);
  requestDraw();
});
on("sketch-closed", "click", () => {
  send(commit(sketch, true));
  sketch = cancel(sketch);
  requestDraw();
});
on("sketch-cancel", "click", () => {
  sketch = cancel(sketch);
  requestDraw();
});

window.addEventListener("resize", requestDraw);
requestDraw();
