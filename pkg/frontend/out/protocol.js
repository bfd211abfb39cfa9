"use strict";
/**
 * Content-Length framed JSON-RPC over Node streams.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.FrameReader = void 0;
exports.frame = frame;
exports.attach = attach;
function frame(message) {
    const payload = Buffer.from(JSON.stringify(message), "utf8");
    return Buffer.concat([
        Buffer.from(`Content-Length: ${payload.length}\r\n\r\n`, "ascii"),
        payload,
    ]);
}
/** Incremental deframer: feed chunks, emit parsed messages. */
class FrameReader {
    onMessage;
    buffer = Buffer.alloc(0);
    constructor(onMessage) {
        this.onMessage = onMessage;
    }
    feed(chunk) {
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
            this.onMessage(JSON.parse(payload));
        }
    }
}
exports.FrameReader = FrameReader;
function attach(input, output, onMessage) {
    const reader = new FrameReader(onMessage);
    input.on("data", (chunk) => reader.feed(chunk));
    return (message) => {
        output.write(frame(message));
    };
}
//# sourceMappingURL=protocol.js.map