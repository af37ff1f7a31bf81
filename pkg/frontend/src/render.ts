// Canvas renderer: strands as depth-sorted polyline segments with a
// simple depth cue, beads as circles, plus axes/grid when nothing is
// loaded and the in-progress sketch overlay.

import type { Snapshot, SnapshotComponent } from "./protocol.js";
import type { SketchState } from "./sketch.js";
import { project, ViewState } from "./view.js";

interface Segment {
  x0: number; y0: number; x1: number; y1: number;
  depth: number;
  color: string;
  width: number;
}

function css(color: [number, number, number], shade: number): string {
  const f = (v: number) =>
    Math.round(255 * Math.min(1, Math.max(0, v * shade)));
  return `rgb(${f(color[0])},${f(color[1])},${f(color[2])})`;
}

export function drawFrame(ctx: CanvasRenderingContext2D,
                          width: number, height: number,
                          snap: Snapshot | null, view: ViewState,
                          sketch: SketchState | null,
                          showBeads: boolean): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#181c22";
  ctx.fillRect(0, 0, width, height);
  drawAxes(ctx, width, height, view);
  if (snap) drawSnapshot(ctx, width, height, snap, view, showBeads);
  if (sketch) drawSketch(ctx, sketch);
}

function drawAxes(ctx: CanvasRenderingContext2D, width: number,
                  height: number, view: ViewState): void {
  const origin = project(view, [0, 0, 0], width, height);
  const axes: [string, [number, number, number]][] = [
    ["#a33", [1, 0, 0]], ["#3a3", [0, 1, 0]], ["#36a", [0, 0, 1]]];
  ctx.lineWidth = 1;
  for (const [colorStr, dir] of axes) {
    const tip = project(view, dir, width, height);
    ctx.strokeStyle = colorStr;
    ctx.beginPath();
    ctx.moveTo(origin.x, origin.y);
    ctx.lineTo(tip.x, tip.y);
    ctx.stroke();
  }
}

function drawSnapshot(ctx: CanvasRenderingContext2D, width: number,
                      height: number, snap: Snapshot, view: ViewState,
                      showBeads: boolean): void {
  const segments: Segment[] = [];
  const beads: { x: number; y: number; depth: number;
                 color: string }[] = [];
  let depthMin = Infinity;
  let depthMax = -Infinity;
  let budget = snap.head === null ? Infinity : snap.head;

  for (const comp of snap.components) {
    if (comp.hidden) continue;
    const pts = comp.vertices.map(
      (v) => project(view, v, width, height));
    for (const p of pts) {
      depthMin = Math.min(depthMin, p.depth);
      depthMax = Math.max(depthMax, p.depth);
    }
    const visible = Math.min(pts.length, budget);
    budget -= visible;
    const nseg = comp.closed && visible === pts.length
      ? pts.length : visible - 1;
    for (let k = 0; k < nseg; k++) {
      const a = pts[k];
      const b = pts[(k + 1) % pts.length];
      segments.push({
        x0: a.x, y0: a.y, x1: b.x, y1: b.y,
        depth: (a.depth + b.depth) / 2,
        color: "", width: 0,
      });
      (segments[segments.length - 1] as Segment & {
        raw?: [number, number, number] }).raw = comp.color;
    }
    for (let k = 0; k < visible; k++) {
      beads.push({ x: pts[k].x, y: pts[k].y, depth: pts[k].depth,
                   color: css(comp.color, 1.1) });
    }
  }
  const span = depthMax - depthMin || 1;
  for (const seg of segments) {
    const t = (seg.depth - depthMin) / span;       // 0 far, 1 near
    const raw = (seg as Segment & {
      raw?: [number, number, number] }).raw ?? [1, 1, 1];
    seg.color = css(raw, 0.5 + 0.6 * t);
    seg.width = 2 + 3 * t;
  }
  segments.sort((a, b) => a.depth - b.depth);
  ctx.lineCap = "round";
  for (const seg of segments) {
    ctx.strokeStyle = seg.color;
    ctx.lineWidth = seg.width;
    ctx.beginPath();
    ctx.moveTo(seg.x0, seg.y0);
    ctx.lineTo(seg.x1, seg.y1);
    ctx.stroke();
  }
  if (showBeads) {
    beads.sort((a, b) => a.depth - b.depth);
    for (const bead of beads) {
      const t = (bead.depth - depthMin) / span;
      ctx.fillStyle = bead.color;
      ctx.beginPath();
      ctx.arc(bead.x, bead.y, 2 + 2.5 * t, 0, Math.PI * 2);
      ctx.fill();
    }
  }
}

function drawSketch(ctx: CanvasRenderingContext2D,
                    sketch: SketchState): void {
  if (sketch.screen.length === 0) return;
  ctx.strokeStyle = "#eee";
  ctx.setLineDash([6, 4]);
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(sketch.screen[0].x, sketch.screen[0].y);
  for (const p of sketch.screen.slice(1)) ctx.lineTo(p.x, p.y);
  ctx.stroke();
  ctx.setLineDash([]);
  sketch.points.forEach((p, i) => {
    const s = sketch.screen[i];
    ctx.fillStyle = p[2] > 0 ? "#ffd24d" : "#4da3ff";
    ctx.beginPath();
    ctx.arc(s.x, s.y, 4, 0, Math.PI * 2);
    ctx.fill();
  });
}

export function nearestBead(snap: Snapshot, view: ViewState, x: number,
                            y: number, width: number, height: number,
                            radiusPx = 14):
    { component: number; bead: number } | null {
  let best: { component: number; bead: number } | null = null;
  let bestDist = radiusPx;
  snap.components.forEach((comp: SnapshotComponent, ci: number) => {
    if (comp.hidden) return;
    comp.vertices.forEach((v, k) => {
      const p = project(view, v, width, height);
      const d = Math.hypot(p.x - x, p.y - y);
      if (d <= bestDist) {
        best = { component: ci, bead: k };
        bestDist = d;
      }
    });
  });
  return best;
}
