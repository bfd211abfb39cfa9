/**
 * The slice of LSP shapes this client consumes, plus the diagnostic payload
 * the cryptomate server attaches under `data`.
 */

export interface Position {
  line: number;
  character: number;
}

export interface Range {
  start: Position;
  end: Position;
}

export interface TextEdit {
  range: Range;
  newText: string;
}

export interface FindingData {
  fingerprint: string;
  rule_id: string;
  strategy: string;
  certainty: string;
  kind: string;
  suppressed: boolean;
  suppression_reason: string | null;
  explanation: string;
  noncompliant_example: string;
  compliant_example: string;
  quickfix: { line: number; col: number; new_text: string } | null;
  finding: Record<string, unknown>;
}

export interface Diagnostic {
  range: Range;
  severity: number;
  source?: string;
  message: string;
  tags?: number[];
  data?: FindingData;
}

export interface PublishDiagnosticsParams {
  uri: string;
  version?: number;
  diagnostics: Diagnostic[];
}

export interface CodeAction {
  title: string;
  kind?: string;
  diagnostics?: Diagnostic[];
  edit?: { changes: Record<string, TextEdit[]> };
  command?: { title: string; command: string; arguments?: unknown[] };
}

export interface QuietModeParams {
  uri: string;
  mode: "normal" | "quiet";
}

export interface ServerOptions {
  serverPath: string;
  rulesDir: string | null;
  feedbackStore: string | null;
  budgetMs: number;
  minConfidence: number;
}

export const DEFAULT_OPTIONS: ServerOptions = {
  serverPath: "cryptomate",
  rulesDir: null,
  feedbackStore: null,
  budgetMs: 500,
  minConfidence: 0.5,
};
