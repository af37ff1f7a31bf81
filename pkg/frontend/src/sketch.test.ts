import { describe, expect, it } from "vitest";
import { z } from "zod";
import { addPoint, canCommit, cancel, commit, DEPTH_STEP, freshSketch }
  from "./sketch.js";
import { freshView } from "./view.js";

const W = 800;
const H = 600;

function click(x: number, y: number, over = false, dragging = false) {
  return { x, y, over, dragging };
}

describe("sketch buffer", () => {
  it("primary click goes under, secondary goes over", () => {
    const view = freshView();
    let s = freshSketch();
    s = addPoint(s, view, click(400, 300, false), W, H);
    s = addPoint(s, view, click(500, 300, true), W, H);
    // identity view: depth maps straight onto z
    expect(s.points[0][2]).toBeCloseTo(-DEPTH_STEP, 9);
    expect(s.points[1][2]).toBeCloseTo(+DEPTH_STEP, 9);
  });

  it("drag respects the threshold spacing", () => {
    const view = freshView();
    let s = freshSketch(30);
    s = addPoint(s, view, click(100, 100), W, H);
    s = addPoint(s, view, click(110, 100, false, true), W, H);  // too close
    expect(s.points.length).toBe(1);
    s = addPoint(s, view, click(140, 100, false, true), W, H);
    expect(s.points.length).toBe(2);
  });

  it("commit needs enough points", () => {
    const view = freshView();
    let s = freshSketch();
    s = addPoint(s, view, click(10, 10), W, H);
    s = addPoint(s, view, click(60, 10), W, H);
    expect(canCommit(s, true)).toBe(false);      // closed needs 3
    expect(commit(s, true)).toBeNull();
    expect(canCommit(s, false)).toBe(true);
    const msg = commit(s, false);
    expect(msg?.type).toBe("sketch_commit");
    expect(msg?.closed).toBe(false);
  });

  it("commit message validates against the wire schema", () => {
    const vec3 = z.tuple([z.number(), z.number(), z.number()]);
    const schema = z.object({
      type: z.literal("sketch_commit"),
      points: z.array(vec3).min(3),
      closed: z.literal(true),
    }).strict();
    const view = freshView();
    let s = freshSketch();
    for (let k = 0; k < 6; k++) {
      const angle = (k * Math.PI) / 3;
      s = addPoint(s, view, click(400 + 100 * Math.cos(angle),
                                  300 + 100 * Math.sin(angle),
                                  k % 2 === 0), W, H);
    }
    const msg = commit(s, true);
    expect(() => schema.parse(msg)).not.toThrow();
    // alternating over/under shows up as alternating depth signs
    const signs = msg!.points.map((p) => Math.sign(p[2]));
    expect(signs).toEqual([1, -1, 1, -1, 1, -1]);
  });

  it("cancel clears the buffer and keeps the threshold", () => {
    const view = freshView();
    let s = freshSketch(42);
    s = addPoint(s, view, click(10, 10), W, H);
    s = cancel(s);
    expect(s.points.length).toBe(0);
    expect(s.threshold).toBe(42);
  });
});
