/**
 * What the language client needs from the surrounding editor. The VS Code
 * adapter in extension.ts implements this against real editor APIs; tests
 * implement it against in-memory buffers. Keeping the boundary this narrow
 * keeps every bit of protocol behavior testable outside an editor process.
 */

import type { Diagnostic, TextEdit } from "./types";

export interface EditorHost {
  publishDiagnostics(uri: string, version: number | undefined, diagnostics: Diagnostic[]): void;
  quietModeChanged(uri: string, mode: "normal" | "quiet"): void;
  applyEdit(uri: string, edits: TextEdit[]): Promise<boolean>;
  showError(message: string): void;
  log(message: string): void;
}
