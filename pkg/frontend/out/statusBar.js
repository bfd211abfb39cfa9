"use strict";
/**
 * Quiet-mode indicator state. Pure so the flip logic is unit-testable; the
 * extension binds `text` onto a real status bar item.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.QuietModeIndicator = exports.QUIET_TEXT = exports.LIVE_TEXT = void 0;
exports.LIVE_TEXT = "CM: live";
exports.QUIET_TEXT = "CM: quiet";
class QuietModeIndicator {
    render;
    modes = new Map();
    activeUri = null;
    constructor(render) {
        this.render = render;
        this.render(exports.LIVE_TEXT);
    }
    /** The editor switched to another document. */
    setActiveDocument(uri) {
        this.activeUri = uri;
        this.refresh();
    }
    /** The server reported a mode change for some document. */
    update(uri, mode) {
        this.modes.set(uri, mode);
        this.refresh();
    }
    textFor(uri) {
        const mode = uri ? this.modes.get(uri) ?? "normal" : "normal";
        return mode === "quiet" ? exports.QUIET_TEXT : exports.LIVE_TEXT;
    }
    refresh() {
        this.render(this.textFor(this.activeUri));
    }
}
exports.QuietModeIndicator = QuietModeIndicator;
//# sourceMappingURL=statusBar.js.map