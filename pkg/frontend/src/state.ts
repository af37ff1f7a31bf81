// Client state: the latest snapshot wins, plus the local view and the
// current interaction mode.

import type { Snapshot } from "./protocol.js";
import { freshView, ViewState } from "./view.js";

export type Mode = "view" | "drag" | "sketch";

export interface ClientState {
  snapshot: Snapshot | null;
  view: ViewState;
  mode: Mode;
  connected: boolean;
  log: string[];
}

export function initialState(): ClientState {
  return { snapshot: null, view: freshView(), mode: "view",
           connected: false, log: [] };
}

export function ingestSnapshot(state: ClientState,
                               snap: Snapshot): ClientState {
  if (state.snapshot && snap.seq <= state.snapshot.seq) {
    return state;              // stale or duplicate: latest wins
  }
  return { ...state, snapshot: snap };
}

export function appendLog(state: ClientState, line: string,
                          cap = 200): ClientState {
  const log = [...state.log, line];
  if (log.length > cap) log.splice(0, log.length - cap);
  return { ...state, log };
}

export function visibleBeadBudget(snap: Snapshot): number {
  const total = snap.components.reduce(
    (n, c) => n + (c.hidden ? 0 : c.vertices.length), 0);
  return snap.head === null ? total : Math.min(snap.head, total);
}
