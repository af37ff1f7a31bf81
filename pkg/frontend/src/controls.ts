// Steering controls: every widget maps to a command message.  Pure
// builders so tests can check the exact command text.

import { CommandMessage, commandMessage } from "./protocol.js";

export function goToggle(): CommandMessage {
  return commandMessage("go");
}

export function stusplitCommand(value: number): CommandMessage {
  return commandMessage(`stusplit = ${Math.max(0, Math.round(value))}`);
}

export function dbeadsCommand(): CommandMessage {
  return commandMessage("delete downto 0");
}

export function splitCommand(): CommandMessage {
  return commandMessage("split");
}

export function loadCommand(name: string): CommandMessage {
  return commandMessage(`load ${name.trim()}`);
}

export function saveCommand(name: string): CommandMessage {
  return commandMessage(`save ${name.trim()}`);
}

export function colourCommand(component: number,
                              rgb: [number, number, number]): CommandMessage {
  const fmt = (v: number) => (Math.round(v * 1000) / 1000).toString();
  return commandMessage(
    `colour ${component} rgb:${fmt(rgb[0])}/${fmt(rgb[1])}/${fmt(rgb[2])}`);
}

export function rawCommand(text: string): CommandMessage | null {
  const trimmed = text.trim();
  return trimmed ? commandMessage(trimmed) : null;
}

export function hexToRgb(hex: string): [number, number, number] {
  const m = /^#?([0-9a-f]{6})$/i.exec(hex.trim());
  if (!m) return [1, 1, 1];
  const n = parseInt(m[1], 16);
  return [((n >> 16) & 255) / 255, ((n >> 8) & 255) / 255,
          (n & 255) / 255];
}
