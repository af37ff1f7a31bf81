// Websocket wrapper with automatic reconnect; the latest snapshot
// always wins, so dropping messages during a reconnect is harmless.

import { ClientMessage, parseServerMessage, ServerMessage }
  from "./protocol.js";

export interface Connection {
  send(message: ClientMessage): boolean;
  close(): void;
}

export function connect(url: string,
                        onMessage: (msg: ServerMessage) => void,
                        onStatus: (up: boolean) => void): Connection {
  let socket: WebSocket | null = null;
  let closed = false;

  function open() {
    socket = new WebSocket(url);
    socket.onopen = () => onStatus(true);
    socket.onmessage = (evt) => {
      const msg = parseServerMessage(String(evt.data));
      if (msg) onMessage(msg);
    };
    socket.onclose = () => {
      onStatus(false);
      socket = null;
      if (!closed) setTimeout(open, 1000);
    };
    socket.onerror = () => {
      socket?.close();
    };
  }
  open();

  return {
    send(message: ClientMessage): boolean {
      if (!socket || socket.readyState !== WebSocket.OPEN) return false;
      socket.send(JSON.stringify(message));
      return true;
    },
    close() {
      closed = true;
      socket?.close();
    },
  };
}
