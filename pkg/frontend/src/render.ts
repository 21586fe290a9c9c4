/**
 * DOM rendering of the two-level keyboard.
 *
 * Level 1 shows the seven character-group tiles plus the delete tile around
 * a central column (typed text, small go-back box, remaining text). Level 2
 * shows the active group's eight characters on the periphery with "go back"
 * in the center. Every peripheral tile carries a mini-box underneath with
 * the last five letters typed. Tile letters are deliberately fanned at
 * different angles to keep visual gaps between neighbouring commands.
 *
 * Rendering targets a minimal structural slice of the DOM so the same code
 * runs against the real document and the test stub.
 */

import { GROUP_COMMANDS, GO_BACK, PERIPHERAL_COMMANDS, groupChars } from "./protocol.js";
import { UiState, lastFive, remainingText } from "./state.js";

export interface ElementLike {
  textContent: string | null;
  className: string;
  // Child parameters stay loose so both HTMLElement and the test stub
  // satisfy this structurally (HTMLElement.appendChild wants a Node).
  appendChild(child: any): unknown;
  replaceChildren(...children: any[]): void;
  setAttribute(name: string, value: string): void;
}

export interface DocumentLike {
  createElement(tag: string): ElementLike;
}

/** Grid order of the nine commands, row-major NW..SE. */
const GRID_COMMANDS = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/** Space is shown as a hyphen on tiles and mini-boxes. */
export function displayChar(ch: string): string {
  return ch === " " ? "-" : ch;
}

export class KeyboardRenderer {
  private doc: DocumentLike;
  private root: ElementLike;
  readonly tiles = new Map<number, ElementLike>();
  private labels = new Map<number, ElementLike>();
  private miniBoxes = new Map<number, ElementLike>();
  private typedBox: ElementLike;
  private remainingBox: ElementLike;
  private centerBox: ElementLike;
  private statusMode: ElementLike;
  private statusProgress: ElementLike;
  private overlay: ElementLike;

  constructor(doc: DocumentLike, root: ElementLike) {
    this.doc = doc;
    this.root = root;
    this.typedBox = doc.createElement("div");
    this.remainingBox = doc.createElement("div");
    this.centerBox = doc.createElement("div");
    this.statusMode = doc.createElement("span");
    this.statusProgress = doc.createElement("div");
    this.overlay = doc.createElement("div");
    this.build();
  }

  private build(): void {
    const status = this.doc.createElement("div");
    status.className = "status-bar";
    this.statusMode.className = "status-mode";
    this.statusProgress.className = "status-progress";
    const progressTrack = this.doc.createElement("div");
    progressTrack.className = "status-progress-track";
    progressTrack.appendChild(this.statusProgress);
    status.replaceChildren(this.statusMode, progressTrack);

    const grid = this.doc.createElement("div");
    grid.className = "grid";
    for (const command of GRID_COMMANDS) {
      if (command === GO_BACK) {
        this.centerBox.className = "center-cell";
        this.typedBox.className = "text-box typed";
        this.remainingBox.className = "text-box remaining";
        const goBack = this.doc.createElement("div");
        goBack.className = "go-back-box";
        goBack.textContent = "";
        this.tiles.set(GO_BACK, goBack);
        this.labels.set(GO_BACK, goBack);
        this.centerBox.replaceChildren(this.typedBox, goBack, this.remainingBox);
        grid.appendChild(this.centerBox);
        continue;
      }
      const cell = this.doc.createElement("div");
      cell.className = "cell";
      const tile = this.doc.createElement("div");
      tile.className = "tile";
      tile.setAttribute("data-command", String(command));
      const label = this.doc.createElement("div");
      label.className = "tile-label";
      tile.appendChild(label);
      const mini = this.doc.createElement("div");
      mini.className = "mini-box";
      cell.appendChild(tile);
      cell.appendChild(mini);
      grid.appendChild(cell);
      this.tiles.set(command, tile);
      this.labels.set(command, label);
      this.miniBoxes.set(command, mini);
    }

    this.overlay.className = "overlay hidden";
    this.overlay.textContent = "disconnected";
    this.root.replaceChildren(status, grid, this.overlay);
  }

  /** Fanned multi-character label for a level-1 group tile. */
  private groupLabel(chars: string[]): ElementLike {
    const wrap = this.doc.createElement("div");
    wrap.className = "fan";
    chars.forEach((ch, i) => {
      const span = this.doc.createElement("span");
      span.className = `fan-char rot${i % 8}`;
      span.textContent = displayChar(ch);
      wrap.appendChild(span);
    });
    return wrap;
  }

  render(state: UiState): void {
    this.statusMode.textContent = state.layout
      ? `${state.mode} mode${state.sessionDone ? " - done" : ""}`
      : "connecting";
    this.statusProgress.setAttribute("style", `width: ${Math.round(state.progress * 100)}%`);

    this.overlay.className = state.connected ? "overlay hidden" : "overlay";

    this.typedBox.textContent = state.typed;
    this.remainingBox.textContent = remainingText(state);

    const five = [...lastFive(state)].map(displayChar).join("");
    for (const mini of this.miniBoxes.values()) {
      mini.textContent = five;
    }

    if (state.layout) {
      if (state.level === 1) {
        for (const g of GROUP_COMMANDS) {
          const label = this.labels.get(g)!;
          label.replaceChildren(this.groupLabel(groupChars(state.layout, g)));
        }
        this.labels.get(9)!.replaceChildren(this.makeText("delete", "tile-word"));
        this.labels.get(GO_BACK)!.textContent = "";
      } else if (state.activeGroup !== null) {
        const chars = groupChars(state.layout, state.activeGroup);
        PERIPHERAL_COMMANDS.forEach((command, i) => {
          const label = this.labels.get(command)!;
          label.replaceChildren(this.makeText(displayChar(chars[i]), "tile-char"));
        });
        this.labels.get(GO_BACK)!.textContent = "go back";
      }
    }

    for (const [command, tile] of this.tiles) {
      const base = command === GO_BACK ? "go-back-box" : "tile";
      tile.className = command === state.highlight ? `${base} highlight` : base;
    }
  }

  private makeText(text: string, className: string): ElementLike {
    const el = this.doc.createElement("span");
    el.className = className;
    el.textContent = text;
    return el;
  }

  typedText(): string {
    return this.typedBox.textContent ?? "";
  }

  remainingTextShown(): string {
    return this.remainingBox.textContent ?? "";
  }

  miniBoxText(command: number): string {
    return this.miniBoxes.get(command)?.textContent ?? "";
  }
}
