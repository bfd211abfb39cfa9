"use strict";
/**
 * What the language client needs from the surrounding editor. The VS Code
 * adapter in extension.ts implements this against real editor APIs; tests
 * implement it against in-memory buffers. Keeping the boundary this narrow
 * keeps every bit of protocol behavior testable outside an editor process.
 */
Object.defineProperty(exports, "__esModule", { value: true });
//# sourceMappingURL=host.js.map