"use strict";
/**
 * The slice of LSP shapes this client consumes, plus the diagnostic payload
 * the cryptomate server attaches under `data`.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.DEFAULT_OPTIONS = void 0;
exports.DEFAULT_OPTIONS = {
    serverPath: "cryptomate",
    rulesDir: null,
    feedbackStore: null,
    budgetMs: 500,
    minConfidence: 0.5,
};
//# sourceMappingURL=types.js.map