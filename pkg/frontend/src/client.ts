/**
 * Minimal language client: spawns `cryptomate serve --stdio`, keeps
 * documents in sync (full text), relays diagnostics and quiet-mode
 * notifications to the host, and wraps the code-action/feedback requests.
 * No analysis logic lives on this side of the wire.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";

import type { EditorHost } from "./host";
import { attach, type RpcMessage } from "./protocol";
import type {
  CodeAction,
  Diagnostic,
  PublishDiagnosticsParams,
  QuietModeParams,
  Range,
  ServerOptions,
} from "./types";

interface Pending {
  resolve: (value: unknown) => void;
  reject: (error: Error) => void;
}

export class LanguageClient {
  private child: ChildProcessWithoutNullStreams | null = null;
  private send: ((message: RpcMessage) => void) | null = null;
  private nextId = 1;
  private readonly pending = new Map<number, Pending>();
  private readonly versions = new Map<string, number>();

  constructor(
    private readonly host: EditorHost,
    private readonly options: ServerOptions
  ) {}

  get running(): boolean {
    return this.child !== null;
  }

  async start(rootUri: string | null): Promise<void> {
    let child: ChildProcessWithoutNullStreams;
    try {
      child = spawn(this.options.serverPath, ["serve", "--stdio"], {
        stdio: ["pipe", "pipe", "pipe"],
      });
    } catch (error) {
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
    child.stderr.on("data", (chunk: Buffer) => {
      this.host.log(`server: ${chunk.toString("utf8").trimEnd()}`);
    });
    this.child = child;
    this.send = attach(child.stdout, child.stdin, (message) => {
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

  private failToSpawn(error: unknown): void {
    const detail = error instanceof Error ? error.message : String(error);
    this.host.showError(
      `Cryptomate server failed to start (${detail}). Install the analyzer ` +
        `with "pip install cryptomate" or point cryptomate.serverPath at the executable.`
    );
  }

  private rejectAllPending(error: Error): void {
    const waiting = [...this.pending.values()];
    this.pending.clear();
    for (const entry of waiting) {
      entry.reject(error);
    }
  }

  async stop(): Promise<void> {
    if (!this.child) {
      return;
    }
    try {
      await this.request("shutdown", null);
      this.notify("exit", null);
    } catch {
      this.child.kill();
    }
    this.child = null;
    this.send = null;
  }

  // -- document sync ------------------------------------------------------

  openDocument(uri: string, text: string): void {
    this.versions.set(uri, 1);
    this.notify("textDocument/didOpen", {
      textDocument: { uri, languageId: "minijava-cf", version: 1, text },
    });
  }

  changeDocument(uri: string, text: string): void {
    const version = (this.versions.get(uri) ?? 0) + 1;
    this.versions.set(uri, version);
    this.notify("textDocument/didChange", {
      textDocument: { uri, version },
      contentChanges: [{ text }],
    });
  }

  saveDocument(uri: string): void {
    this.notify("textDocument/didSave", { textDocument: { uri } });
  }

  // -- requests -------------------------------------------------------------

  async codeActions(uri: string, range: Range, diagnostics: Diagnostic[]): Promise<CodeAction[]> {
    const result = await this.request("textDocument/codeAction", {
      textDocument: { uri },
      range,
      context: { diagnostics },
    });
    return (result as CodeAction[]) ?? [];
  }

  async sendFeedback(
    fingerprint: string,
    verdict: "fp" | "tp",
    ruleId: string,
    strategy: string
  ): Promise<void> {
    await this.request("workspace/executeCommand", {
      command: "cryptomate.feedback",
      arguments: [fingerprint, verdict, ruleId, strategy],
    });
  }

  /** Apply a server-proposed action: either a workspace edit or a command. */
  async applyAction(action: CodeAction): Promise<void> {
    if (action.edit) {
      for (const [uri, edits] of Object.entries(action.edit.changes)) {
        await this.host.applyEdit(uri, edits);
      }
    }
    if (action.command && action.command.command === "cryptomate.feedback") {
      const [fingerprint, verdict, ruleId, strategy] = action.command.arguments as [
        string,
        "fp" | "tp",
        string,
        string
      ];
      await this.sendFeedback(fingerprint, verdict, ruleId, strategy);
    }
  }

  // -- wiring -----------------------------------------------------------------

  private request(method: string, params: unknown): Promise<unknown> {
    if (!this.send) {
      return Promise.reject(new Error("client not started"));
    }
    const id = this.nextId++;
    const promise = new Promise<unknown>((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
    });
    this.send({ jsonrpc: "2.0", id, method, params });
    return promise;
  }

  private notify(method: string, params: unknown): void {
    this.send?.({ jsonrpc: "2.0", method, params });
  }

  private dispatch(message: RpcMessage): void {
    if (message.id !== undefined && message.method === undefined) {
      const pending = this.pending.get(message.id as number);
      if (!pending) {
        return;
      }
      this.pending.delete(message.id as number);
      if (message.error) {
        pending.reject(new Error(`${message.error.code}: ${message.error.message}`));
      } else {
        pending.resolve(message.result);
      }
      return;
    }
    switch (message.method) {
      case "textDocument/publishDiagnostics": {
        const params = message.params as PublishDiagnosticsParams;
        this.host.publishDiagnostics(params.uri, params.version, params.diagnostics);
        break;
      }
      case "cryptomate/quietMode": {
        const params = message.params as QuietModeParams;
        this.host.quietModeChanged(params.uri, params.mode);
        break;
      }
      case "window/logMessage":
      case "window/showMessage": {
        const params = message.params as { type: number; message: string };
        if (message.method === "window/showMessage" && params.type <= 2) {
          this.host.showError(params.message);
        } else {
          this.host.log(params.message);
        }
        break;
      }
      default:
        break;
    }
  }
}
