// Sidebar list view: label filter chips on top, captured notes grouped
// under their thread headers below.

import { ALL_LABELS, LABEL_TITLES } from "./protocol.js";
import type { NotePayload, ProcessLabel } from "./protocol.js";
import type { SessionStore } from "./state.js";

export interface ExplorerHandlers {
  /** Chip toggles change the server-side filter (and are logged there). */
  onFilterChange: (labels: Set<ProcessLabel>) => void;
  /** Selecting an entry behaves like selecting the note on the canvas. */
  onEntrySelect: (noteId: string) => void;
}

export interface ExplorerInstance {
  element: HTMLElement;
  update: () => void;
  destroy: () => void;
}

function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function createExplorer(
  root: HTMLElement,
  store: SessionStore,
  handlers: ExplorerHandlers,
): ExplorerInstance {
  const container = document.createElement("aside");
  container.className = "explorer";
  const chipRow = document.createElement("div");
  chipRow.className = "filter-chips";
  const list = document.createElement("div");
  list.className = "thread-list";
  container.append(chipRow, list);
  root.appendChild(container);

  for (const label of ALL_LABELS) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = `chip chip-${label}`;
    chip.dataset.label = label;
    chip.textContent = LABEL_TITLES[label];
    chip.addEventListener("click", () => {
      const filter = new Set(store.state.filter);
      if (filter.has(label)) filter.delete(label);
      else filter.add(label);
      handlers.onFilterChange(filter);
    });
    chipRow.appendChild(chip);
  }

  function entryFor(note: NotePayload): HTMLElement {
    const entry = document.createElement("div");
    entry.className = "note-entry";
    entry.dataset.noteId = note.id;
    if (note.id === store.state.selectedNoteId) entry.classList.add("selected");
    const labels = note.labels
      .map((label) => `<span class="chip chip-${label}">${LABEL_TITLES[label]}</span>`)
      .join("");
    const minutes = Math.floor(note.t_start / 60000);
    const seconds = Math.floor((note.t_start % 60000) / 1000);
    entry.innerHTML = `
      <span class="entry-time">${minutes}:${String(seconds).padStart(2, "0")}</span>
      <span class="entry-text">${escapeHtml(note.summary ?? note.transcript)}</span>
      <span class="entry-labels">${labels}</span>
    `;
    entry.addEventListener("click", () => handlers.onEntrySelect(note.id));
    return entry;
  }

  function update(): void {
    for (const chip of chipRow.querySelectorAll<HTMLElement>(".chip")) {
      chip.classList.toggle(
        "active",
        store.state.filter.has(chip.dataset.label as ProcessLabel),
      );
    }
    list.textContent = "";
    const visible = store.visibleNotes();
    const byThread = new Map<string, NotePayload[]>();
    const orphans: NotePayload[] = [];
    for (const note of visible) {
      if (note.thread_id) {
        const bucket = byThread.get(note.thread_id) ?? [];
        bucket.push(note);
        byThread.set(note.thread_id, bucket);
      } else {
        orphans.push(note);
      }
    }
    for (const threadId of store.state.threadOrder) {
      const bucket = byThread.get(threadId);
      if (!bucket || bucket.length === 0) continue;
      const thread = store.state.threads.get(threadId);
      const section = document.createElement("section");
      section.className = "thread";
      section.dataset.threadId = threadId;
      const header = document.createElement("h3");
      header.className = "thread-title";
      header.textContent = thread?.title ?? threadId;
      section.appendChild(header);
      for (const note of bucket) section.appendChild(entryFor(note));
      list.appendChild(section);
    }
    for (const note of orphans) list.appendChild(entryFor(note));
  }

  return {
    element: container,
    update,
    destroy: () => container.remove(),
  };
}
