"use strict";
/**
 * Minimal language client: spawns `cryptomate serve --stdio`, keeps
 * documents in sync (full text), relays diagnostics and quiet-mode
 * notifications to the host, and wraps the code-action/feedback requests.
 * No analysis logic lives on this side of the wire.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.LanguageClient = void 0;
const node_child_process_1 = require("node:child_process");
const protocol_1 = require("./protocol");
class LanguageClient {
    host;
    options;
    child = null;
    send = null;
    nextId = 1;
    pending = new Map();
    versions = new Map();
    constructor(host, options) {
        this.host = host;
        this.options = options;
    }
    get running() {
        return this.child !== null;
    }
    async start(rootUri) {
        let child;
        try {
            child = (0, node_child_process_1.spawn)(this.options.serverPath, ["serve", "--stdio"], {
                stdio: ["pipe", "pipe", "pipe"],
            });
        }
        catch (error) {
            this.failToSpawn(error);
            throw error;
        }
        child.on("error", (error) => {
            this.failToSpawn(error);
            this.child = null;
            this.rejectAllPending(error instanceof Error ? error : new Error(String(error)));
        });
        child.on("exit", (code) => {
            if (this.child === child) {
                this.child = null;
                this.rejectAllPending(new Error(`server exited with code ${code}`));
            }
        });
        child.stderr.on("data", (chunk) => {
            this.host.log(`server: ${chunk.toString("utf8").trimEnd()}`);
        });
        this.child = child;
        this.send = (0, protocol_1.attach)(child.stdout, child.stdin, (message) => {
            this.dispatch(message);
        });
        await this.request("initialize", {
            processId: process.pid,
            rootUri,
            capabilities: {},
            initializationOptions: {
                rules_dir: this.options.rulesDir,
                feedback_store: this.options.feedbackStore,
                budget_ms: this.options.budgetMs,
                min_confidence: this.options.minConfidence,
            },
        });
        this.notify("initialized", {});
    }
    failToSpawn(error) {
        const detail = error instanceof Error ? error.message : String(error);
        this.host.showError(`Cryptomate server failed to start (${detail}). Install the analyzer ` +
            `with "pip install cryptomate" or point cryptomate.serverPath at the executable.`);
    }
    rejectAllPending(error) {
        const waiting = [...this.pending.values()];
        this.pending.clear();
        for (const entry of waiting) {
            entry.reject(error);
        }
    }
    async stop() {
        if (!this.child) {
            return;
        }
        try {
            await this.request("shutdown", null);
            this.notify("exit", null);
        }
        catch {
            this.child.kill();
        }
        this.child = null;
        this.send = null;
    }
    // -- document sync ------------------------------------------------------
    openDocument(uri, text) {
        this.versions.set(uri, 1);
        this.notify("textDocument/didOpen", {
            textDocument: { uri, languageId: "minijava-cf", version: 1, text },
        });
    }
    changeDocument(uri, text) {
        const version = (this.versions.get(uri) ?? 0) + 1;
        this.versions.set(uri, version);
        this.notify("textDocument/didChange", {
            textDocument: { uri, version },
            contentChanges: [{ text }],
        });
    }
    saveDocument(uri) {
        this.notify("textDocument/didSave", { textDocument: { uri } });
    }
    // -- requests -------------------------------------------------------------
    async codeActions(uri, range, diagnostics) {
        const result = await this.request("textDocument/codeAction", {
            textDocument: { uri },
            range,
            context: { diagnostics },
        });
        return result ?? [];
    }
    async sendFeedback(fingerprint, verdict, ruleId, strategy) {
        await this.request("workspace/executeCommand", {
            command: "cryptomate.feedback",
            arguments: [fingerprint, verdict, ruleId, strategy],
        });
    }
    /** Apply a server-proposed action: either a workspace edit or a command. */
    async applyAction(action) {
        if (action.edit) {
            for (const [uri, edits] of Object.entries(action.edit.changes)) {
                await this.host.applyEdit(uri, edits);
            }
        }
        if (action.command && action.command.command === "cryptomate.feedback") {
            const [fingerprint, verdict, ruleId, strategy] = action.command.arguments;
            await this.sendFeedback(fingerprint, verdict, ruleId, strategy);
        }
    }
    // -- wiring -----------------------------------------------------------------
    request(method, params) {
        if (!this.send) {
            return Promise.reject(new Error("client not started"));
        }
        const id = this.nextId++;
        const promise = new Promise((resolve, reject) => {
            this.pending.set(id, { resolve, reject });
        });
        this.send({ jsonrpc: "2.0", id, method, params });
        return promise;
    }
    notify(method, params) {
        this.send?.({ jsonrpc: "2.0", method, params });
    }
    dispatch(message) {
        if (message.id !== undefined && message.method === undefined) {
            const pending = this.pending.get(message.id);
            if (!pending) {
                return;
            }
            this.pending.delete(message.id);
            if (message.error) {
                pending.reject(new Error(`${message.error.code}: ${message.error.message}`));
            }
            else {
                pending.resolve(message.result);
            }
            return;
        }
        switch (message.method) {
            case "textDocument/publishDiagnostics": {
                const params = message.params;
                this.host.publishDiagnostics(params.uri, params.version, params.diagnostics);
                break;
            }
            case "cryptomate/quietMode": {
                const params = message.params;
                this.host.quietModeChanged(params.uri, params.mode);
                break;
            }
            case "window/logMessage":
            case "window/showMessage": {
                const params = message.params;
                if (message.method === "window/showMessage" && params.type <= 2) {
                    this.host.showError(params.message);
                }
                else {
                    this.host.log(params.message);
                }
                break;
            }
            default:
                break;
        }
    }
}
exports.LanguageClient = LanguageClient;
//# sourceMappingURL=client.js.map