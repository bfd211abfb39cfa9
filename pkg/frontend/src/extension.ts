/**
 * VS Code glue: spawns the analyzer per workspace, forwards document events,
 * renders diagnostics natively, serves hover details from diagnostic data,
 * exposes the server's code actions, and shows the quiet-mode indicator.
 */

import * as vscode from "vscode";

import { LanguageClient } from "./client";
import type { EditorHost } from "./host";
import { buildHoverMarkdown } from "./hover";
import { QuietModeIndicator } from "./statusBar";
import type { CodeAction, Diagnostic, FindingData, ServerOptions, TextEdit } from "./types";

const LANGUAGE_ID = "minijava-cf";

let client: LanguageClient | null = null;

interface StoredDiagnostic {
  diagnostic: Diagnostic;
  vscodeDiagnostic: vscode.Diagnostic;
}

const published = new Map<string, StoredDiagnostic[]>();

function configuredOptions(): ServerOptions {
  const config = vscode.workspace.getConfiguration("cryptomate");
  return {
    serverPath: config.get<string>("serverPath", "cryptomate"),
    rulesDir: config.get<string | null>("rulesDir", null),
    feedbackStore: config.get<string | null>("feedbackStore", null),
    budgetMs: config.get<number>("budgetMs", 500),
    minConfidence: config.get<number>("minConfidence", 0.5),
  };
}

function toVscodeRange(range: Diagnostic["range"]): vscode.Range {
  return new vscode.Range(
    range.start.line,
    range.start.character,
    range.end.line,
    range.end.character
  );
}

function toVscodeDiagnostic(diagnostic: Diagnostic): vscode.Diagnostic {
  const severityMap: Record<number, vscode.DiagnosticSeverity> = {
    1: vscode.DiagnosticSeverity.Error,
    2: vscode.DiagnosticSeverity.Warning,
    3: vscode.DiagnosticSeverity.Information,
    4: vscode.DiagnosticSeverity.Hint,
  };
  const converted = new vscode.Diagnostic(
    toVscodeRange(diagnostic.range),
    diagnostic.message,
    severityMap[diagnostic.severity] ?? vscode.DiagnosticSeverity.Warning
  );
  converted.source = diagnostic.source ?? "cryptomate";
  if (diagnostic.tags?.includes(1)) {
    converted.tags = [vscode.DiagnosticTag.Unnecessary];
  }
  return converted;
}

export async function activate(context: vscode.ExtensionContext): Promise<void> {
  const collection = vscode.languages.createDiagnosticCollection("cryptomate");
  const output = vscode.window.createOutputChannel("Cryptomate");
  const statusItem = vscode.window.createStatusBarItem(vscode.StatusBarAlignment.Right, 100);
  statusItem.show();
  const indicator = new QuietModeIndicator((text) => {
    statusItem.text = text;
  });
  context.subscriptions.push(collection, output, statusItem);

  const host: EditorHost = {
    publishDiagnostics(uri, _version, diagnostics) {
      const stored = diagnostics.map((diagnostic) => ({
        diagnostic,
        vscodeDiagnostic: toVscodeDiagnostic(diagnostic),
      }));
      published.set(uri, stored);
      collection.set(
        vscode.Uri.parse(uri),
        stored.map((entry) => entry.vscodeDiagnostic)
      );
    },
    quietModeChanged(uri, mode) {
      indicator.update(uri, mode);
    },
    async applyEdit(uri, edits) {
      return applyServerEdits(uri, edits);
    },
    showError(message) {
      void vscode.window.showErrorMessage(message);
    },
    log(message) {
      output.appendLine(message);
    },
  };

  client = new LanguageClient(host, configuredOptions());
  const rootUri = vscode.workspace.workspaceFolders?.[0]?.uri.toString() ?? null;
  try {
    await client.start(rootUri);
  } catch {
    return; // the host already showed a remediation hint
  }

  for (const document of vscode.workspace.textDocuments) {
    if (document.languageId === LANGUAGE_ID) {
      client.openDocument(document.uri.toString(), document.getText());
    }
  }

  context.subscriptions.push(
    vscode.workspace.onDidOpenTextDocument((document) => {
      if (document.languageId === LANGUAGE_ID) {
        client?.openDocument(document.uri.toString(), document.getText());
      }
    }),
    vscode.workspace.onDidChangeTextDocument((event) => {
      if (event.document.languageId === LANGUAGE_ID) {
        client?.changeDocument(event.document.uri.toString(), event.document.getText());
      }
    }),
    vscode.workspace.onDidSaveTextDocument((document) => {
      if (document.languageId === LANGUAGE_ID) {
        client?.saveDocument(document.uri.toString());
      }
    }),
    vscode.window.onDidChangeActiveTextEditor((editor) => {
      indicator.setActiveDocument(editor?.document.uri.toString() ?? null);
    }),
    vscode.languages.registerHoverProvider(LANGUAGE_ID, {
      provideHover(document, position) {
        const entry = diagnosticAt(document.uri.toString(), position);
        if (!entry?.diagnostic.data) {
          return undefined;
        }
        const markdown = new vscode.MarkdownString(
          buildHoverMarkdown(entry.diagnostic.message, entry.diagnostic.data)
        );
        return new vscode.Hover(markdown, toVscodeRange(entry.diagnostic.range));
      },
    }),
    vscode.languages.registerCodeActionsProvider(LANGUAGE_ID, {
      async provideCodeActions(document, range) {
        const uri = document.uri.toString();
        const overlapping = (published.get(uri) ?? [])
          .filter((entry) => range.intersection(toVscodeRange(entry.diagnostic.range)))
          .map((entry) => entry.diagnostic);
        if (!client || overlapping.length === 0) {
          return [];
        }
        const actions = await client.codeActions(
          uri,
          {
            start: { line: range.start.line, character: range.start.character },
            end: { line: range.end.line, character: range.end.character },
          },
          overlapping
        );
        return actions.map((action) => toVscodeAction(action));
      },
    }),
    vscode.commands.registerCommand("cryptomate.applyAction", (action: CodeAction) =>
      client?.applyAction(action)
    ),
    vscode.commands.registerCommand("cryptomate.markFalsePositive", () => sendVerdict("fp")),
    vscode.commands.registerCommand("cryptomate.markTruePositive", () => sendVerdict("tp"))
  );
}

export async function deactivate(): Promise<void> {
  await client?.stop();
  client = null;
}

function diagnosticAt(uri: string, position: vscode.Position): StoredDiagnostic | undefined {
  return (published.get(uri) ?? []).find((entry) =>
    toVscodeRange(entry.diagnostic.range).contains(position)
  );
}

function toVscodeAction(action: CodeAction): vscode.CodeAction {
  const kind = action.kind === "quickfix" ? vscode.CodeActionKind.QuickFix : vscode.CodeActionKind.Empty;
  const converted = new vscode.CodeAction(action.title, kind);
  converted.command = {
    title: action.title,
    command: "cryptomate.applyAction",
    arguments: [action],
  };
  return converted;
}

/** Insert server edits; snippet placeholders become live tabstops when the
 * target document is open in the active editor. */
async function applyServerEdits(uri: string, edits: TextEdit[]): Promise<boolean> {
  const target = vscode.Uri.parse(uri);
  const active = vscode.window.activeTextEditor;
  if (
    active &&
    active.document.uri.toString() === uri &&
    edits.length === 1 &&
    edits[0].newText.includes("${")
  ) {
    const edit = edits[0];
    const position = new vscode.Position(edit.range.start.line, edit.range.start.character);
    return active.insertSnippet(new vscode.SnippetString(edit.newText), position);
  }
  const workspaceEdit = new vscode.WorkspaceEdit();
  for (const edit of edits) {
    workspaceEdit.replace(target, toVscodeRange(edit.range), edit.newText);
  }
  return vscode.workspace.applyEdit(workspaceEdit);
}

function sendVerdict(verdict: "fp" | "tp"): void {
  const editor = vscode.window.activeTextEditor;
  if (!editor || !client) {
    return;
  }
  const entry = diagnosticAt(editor.document.uri.toString(), editor.selection.active);
  const data: FindingData | undefined = entry?.diagnostic.data;
  if (!data) {
    void vscode.window.showErrorMessage("Place the cursor on a Cryptomate finding first.");
    return;
  }
  void client.sendFeedback(data.fingerprint, verdict, data.rule_id, data.strategy);
}
