import { describe, expect, it } from "vitest";
import { apply, freshView, matMul, orbit, pan, project, transpose,
         unproject, zoom } from "./view.js";

function isOrthonormal(m: number[][]): boolean {
  const t = transpose(m as never);
  const p = matMul(m as never, t);
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      if (Math.abs(p[i][j] - (i === j ? 1 : 0)) > 1e-9) return false;
    }
  }
  return true;
}

describe("view math", () => {
  it("orbit keeps the rotation orthonormal", () => {
    let view = freshView();
    for (let i = 0; i < 200; i++) {
      view = orbit(view, (i * 7) % 13 - 6, (i * 5) % 11 - 5);
    }
    expect(isOrthonormal(view.rotation)).toBe(true);
  });

  it("project/unproject round trips", () => {
    let view = orbit(pan(zoom(freshView(), 1.7), 12, -8), 40, 25);
    const p: [number, number, number] = [0.3, -1.2, 2.5];
    const proj = project(view, p, 800, 600);
    const back = unproject(view, proj.x, proj.y, proj.depth, 800, 600);
    for (let k = 0; k < 3; k++) {
      expect(back[k]).toBeCloseTo(p[k], 9);
    }
  });

  it("zoom clamps to a sane range", () => {
    let view = freshView();
    for (let i = 0; i < 60; i++) view = zoom(view, 10);
    expect(view.scale).toBeLessThanOrEqual(5000);
    for (let i = 0; i < 120; i++) view = zoom(view, 0.01);
    expect(view.scale).toBeGreaterThanOrEqual(1);
  });

  it("view operations never build protocol messages", () => {
    // the no-server-mutation rule: view handling is pure local state
    const view = orbit(freshView(), 5, 5);
    expect("type" in view).toBe(false);
    expect(Object.keys(view).sort())
      .toEqual(["panX", "panY", "rotation", "scale"]);
  });

  it("apply matches manual multiplication", () => {
    const m = orbit(freshView(), 31, -17).rotation;
    const v: [number, number, number] = [1, 2, 3];
    const got = apply(m, v);
    for (let i = 0; i < 3; i++) {
      const want = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
      expect(got[i]).toBeCloseTo(want, 12);
    }
  });
});
