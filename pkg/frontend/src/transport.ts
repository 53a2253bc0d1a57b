// Transport implementations. The browser talks to the service through the
// /ws websocket bridge; tests drive the same session logic over raw TCP.

import { Transport } from "./session.js";

export class WebSocketTransport implements Transport {
  private ws: WebSocket;
  private open = false;

  constructor(
    url: string,
    onData: (data: Uint8Array) => void,
    onStateChange: (connected: boolean) => void = () => {},
  ) {
    this.ws = new WebSocket(url);
    this.ws.binaryType = "arraybuffer";
    this.ws.onopen = () => {
      this.open = true;
      onStateChange(true);
    };
    this.ws.onclose = () => {
      this.open = false;
      onStateChange(false);
    };
    this.ws.onerror = () => {
      this.open = false;
      onStateChange(false);
    };
    this.ws.onmessage = (ev) => {
      onData(new Uint8Array(ev.data as ArrayBuffer));
    };
  }

  get connected(): boolean {
    return this.open;
  }

  send(data: Uint8Array): void {
    if (this.open) this.ws.send(data);
  }

  close(): void {
    this.ws.close();
  }
}
