/**
 * Quiet-mode indicator state. Pure so the flip logic is unit-testable; the
 * extension binds `text` onto a real status bar item.
 */

export const LIVE_TEXT = "CM: live";
export const QUIET_TEXT = "CM: quiet";

export class QuietModeIndicator {
  private readonly modes = new Map<string, "normal" | "quiet">();
  private activeUri: string | null = null;

  constructor(private readonly render: (text: string) => void) {
    this.render(LIVE_TEXT);
  }

  /** The editor switched to another document. */
  setActiveDocument(uri: string | null): void {
    this.activeUri = uri;
    this.refresh();
  }

  /** The server reported a mode change for some document. */
  update(uri: string, mode: "normal" | "quiet"): void {
    this.modes.set(uri, mode);
    this.refresh();
  }

  textFor(uri: string | null): string {
    const mode = uri ? this.modes.get(uri) ?? "normal" : "normal";
    return mode === "quiet" ? QUIET_TEXT : LIVE_TEXT;
  }

  private refresh(): void {
    this.render(this.textFor(this.activeUri));
  }
}
