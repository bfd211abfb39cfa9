/**
 * Content-Length framed JSON-RPC over Node streams.
 */

import type { Readable, Writable } from "node:stream";

export interface RpcMessage {
  jsonrpc: "2.0";
  id?: number | string | null;
  method?: string;
  params?: unknown;
  result?: unknown;
  error?: { code: number; message: string };
}

export function frame(message: RpcMessage): Buffer {
  const payload = Buffer.from(JSON.stringify(message), "utf8");
  return Buffer.concat([
    Buffer.from(`Content-Length: ${payload.length}\r\n\r\n`, "ascii"),
    payload,
  ]);
}

/** Incremental deframer: feed chunks, emit parsed messages. */
export class FrameReader {
  private buffer = Buffer.alloc(0);

  constructor(private readonly onMessage: (message: RpcMessage) => void) {}

  feed(chunk: Buffer): void {
    this.buffer = Buffer.concat([this.buffer, chunk]);
    for (;;) {
      const headerEnd = this.buffer.indexOf("\r\n\r\n");
      if (headerEnd < 0) {
        return;
      }
      const header = this.buffer.subarray(0, headerEnd).toString("ascii");
      const match = /content-length:\s*(\d+)/i.exec(header);
      if (!match) {
        throw new Error("missing Content-Length header");
      }
      const length = Number(match[1]);
      const start = headerEnd + 4;
      if (this.buffer.length < start + length) {
        return;
      }
      const payload = this.buffer.subarray(start, start + length).toString("utf8");
      this.buffer = this.buffer.subarray(start + length);
      this.onMessage(JSON.parse(payload) as RpcMessage);
    }
  }
}

export function attach(
  input: Readable,
  output: Writable,
  onMessage: (message: RpcMessage) => void
): (message: RpcMessage) => void {
  const reader = new FrameReader(onMessage);
  input.on("data", (chunk: Buffer) => reader.feed(chunk));
  return (message) => {
    output.write(frame(message));
  };
}
