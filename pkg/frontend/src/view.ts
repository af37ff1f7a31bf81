// Client-side orbit view: rotation + scale + pan applied at render
// time only.  Nothing here ever talks to the server; the camera is a
// purely local affair.

import type { Vec3 } from "./protocol.js";

export type Mat3 = [Vec3, Vec3, Vec3];

export const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out: number[][] = [[0, 0, 0], [0, 0, 0], [0, 0, 0]];
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] +
        a[i][2] * b[2][j];
    }
  }
  return out as Mat3;
}

export function apply(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
    m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
    m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
  ];
}

export function transpose(m: Mat3): Mat3 {
  return [
    [m[0][0], m[1][0], m[2][0]],
    [m[0][1], m[1][1], m[2][1]],
    [m[0][2], m[1][2], m[2][2]],
  ];
}

function axisRotation(axis: 0 | 1, angle: number): Mat3 {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  if (axis === 0) {
    return [[1, 0, 0], [0, c, -s], [0, s, c]];
  }
  return [[c, 0, s], [0, 1, 0], [-s, 0, c]];
}

export interface ViewState {
  rotation: Mat3;
  scale: number;
  panX: number;
  panY: number;
}

export function freshView(): ViewState {
  return { rotation: IDENTITY, scale: 60, panX: 0, panY: 0 };
}

// mouse orbit: dx spins about the screen y axis, dy about screen x
export function orbit(view: ViewState, dx: number, dy: number): ViewState {
  const ry = axisRotation(1, dx * 0.01);
  const rx = axisRotation(0, dy * 0.01);
  return { ...view, rotation: matMul(matMul(rx, ry), view.rotation) };
}

export function zoom(view: ViewState, factor: number): ViewState {
  const scale = Math.min(Math.max(view.scale * factor, 1), 5000);
  return { ...view, scale };
}

export function pan(view: ViewState, dx: number, dy: number): ViewState {
  return { ...view, panX: view.panX + dx, panY: view.panY + dy };
}

export interface Projected {
  x: number;   // canvas px
  y: number;
  depth: number;
}

export function project(view: ViewState, v: Vec3, width: number,
                        height: number): Projected {
  const r = apply(view.rotation, v);
  return {
    x: width / 2 + view.panX + r[0] * view.scale,
    y: height / 2 + view.panY - r[1] * view.scale,
    depth: r[2],
  };
}

// canvas position + depth back to model space (used by sketching)
export function unproject(view: ViewState, x: number, y: number,
                          depth: number, width: number,
                          height: number): Vec3 {
  const rx = (x - width / 2 - view.panX) / view.scale;
  const ry = -(y - height / 2 - view.panY) / view.scale;
  return apply(transpose(view.rotation), [rx, ry, depth]);
}
