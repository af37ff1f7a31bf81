import { describe, expect, it } from "vitest";
import type { Snapshot } from "./protocol.js";
import { appendLog, ingestSnapshot, initialState, visibleBeadBudget }
  from "./state.js";

function snap(seq: number, nverts = 3): Snapshot {
  return {
    type: "snapshot", seq,
    components: [{
      vertices: Array.from({ length: nverts }, (_, i) => [i, 0, 0]),
      closed: true, hidden: false, color: [1, 1, 1],
    }],
    relax: "stopped", params: {}, safe: true, head: null,
  };
}

describe("client state", () => {
  it("latest snapshot wins, stale ones are dropped", () => {
    let state = initialState();
    state = ingestSnapshot(state, snap(5, 4));
    state = ingestSnapshot(state, snap(3, 9));   // stale
    expect(state.snapshot?.seq).toBe(5);
    expect(state.snapshot?.components[0].vertices.length).toBe(4);
    state = ingestSnapshot(state, snap(6, 7));
    expect(state.snapshot?.seq).toBe(6);
  });

  it("log is capped", () => {
    let state = initialState();
    for (let i = 0; i < 300; i++) state = appendLog(state, `line ${i}`);
    expect(state.log.length).toBe(200);
    expect(state.log[state.log.length - 1]).toBe("line 299");
  });

  it("head caps the visible bead budget", () => {
    const s = snap(1, 50);
    expect(visibleBeadBudget(s)).toBe(50);
    expect(visibleBeadBudget({ ...s, head: 22 })).toBe(22);
    const hidden = {
      ...s,
      components: [{ ...s.components[0], hidden: true }],
    };
    expect(visibleBeadBudget(hidden)).toBe(0);
  });
});
