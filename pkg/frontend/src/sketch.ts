// Sketch buffer: lay down 3D points from canvas clicks.  The primary
// button goes under (depth -d), the secondary (or shift-click) goes
// over (+d); dragging appends points once the pointer travels past the
// threshold.  Commit turns the buffer into a sketch_commit message.

import { sketchCommitMessage, SketchCommitMessage, Vec3 }
  from "./protocol.js";
import { unproject, ViewState } from "./view.js";

export const DEPTH_STEP = 1.0;    // model units

export interface SketchState {
  points: Vec3[];
  screen: { x: number; y: number }[];
  threshold: number;              // px between dragged points
  lastOver: boolean;
}

export function freshSketch(threshold = 24): SketchState {
  return { points: [], screen: [], threshold, lastOver: false };
}

export interface ClickInfo {
  x: number;
  y: number;
  over: boolean;                  // secondary button / shift
  dragging: boolean;
}

export function addPoint(sketch: SketchState, view: ViewState,
                         click: ClickInfo, width: number,
                         height: number): SketchState {
  if (click.dragging && sketch.screen.length > 0) {
    const last = sketch.screen[sketch.screen.length - 1];
    const dist = Math.hypot(click.x - last.x, click.y - last.y);
    if (dist < sketch.threshold) return sketch;
  }
  const depth = click.over ? DEPTH_STEP : -DEPTH_STEP;
  const p = unproject(view, click.x, click.y, depth, width, height);
  return {
    ...sketch,
    points: [...sketch.points, p],
    screen: [...sketch.screen, { x: click.x, y: click.y }],
    lastOver: click.over,
  };
}

export function canCommit(sketch: SketchState, closed: boolean): boolean {
  return sketch.points.length >= (closed ? 3 : 2);
}

export function commit(sketch: SketchState,
                       closed: boolean): SketchCommitMessage | null {
  if (!canCommit(sketch, closed)) return null;
  return sketchCommitMessage(sketch.points, closed);
}

export function cancel(sketch: SketchState): SketchState {
  return freshSketch(sketch.threshold);
}
