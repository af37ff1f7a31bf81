// Wire protocol shared with the engine service.  Field names must match
// the server byte for byte, so everything outgoing funnels through the
// builders here.

export type Vec3 = [number, number, number];

export interface SnapshotComponent {
  vertices: Vec3[];
  closed: boolean;
  hidden: boolean;
  color: [number, number, number];
}

export interface Snapshot {
  type: "snapshot";
  seq: number;
  components: SnapshotComponent[];
  relax: "running" | "stopped";
  params: Record<string, number>;
  safe: boolean;
  head: number | null;
}

export interface OutputMessage {
  type: "output" | "complaint";
  text: string;
}

export type ServerMessage = Snapshot | OutputMessage;

export interface CommandMessage {
  type: "command";
  text: string;
}

export interface DragMessage {
  type: "drag";
  component: number;
  bead: number;
  position: Vec3;
}

export interface SketchCommitMessage {
  type: "sketch_commit";
  points: Vec3[];
  closed: boolean;
}

export type ClientMessage = CommandMessage | DragMessage |
  SketchCommitMessage;

export function commandMessage(text: string): CommandMessage {
  return { type: "command", text };
}

export function dragMessage(component: number, bead: number,
                            position: Vec3): DragMessage {
  return { type: "drag", component, bead, position };
}

export function sketchCommitMessage(points: Vec3[],
                                    closed: boolean): SketchCommitMessage {
  return { type: "sketch_commit", points, closed };
}

function isVec3(x: unknown): x is Vec3 {
  return Array.isArray(x) && x.length === 3 &&
    x.every((v) => typeof v === "number" && Number.isFinite(v));
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  if (msg.type === "output" || msg.type === "complaint") {
    return typeof msg.text === "string"
      ? { type: msg.type, text: msg.text } : null;
  }
  if (msg.type !== "snapshot") return null;
  if (typeof msg.seq !== "number" || !Array.isArray(msg.components)) {
    return null;
  }
  for (const comp of msg.components) {
    const c = comp as Record<string, unknown>;
    if (!Array.isArray(c.vertices) || !c.vertices.every(isVec3)) {
      return null;
    }
    if (typeof c.closed !== "boolean" ||
        typeof c.hidden !== "boolean") {
      return null;
    }
  }
  return data as Snapshot;
}
