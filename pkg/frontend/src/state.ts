// Client-side session store. Holds no authoritative state: everything here
// is rebuilt from server messages (or a notes/threads refetch on reload).

import type {
  NotePayload,
  ProcessLabel,
  ServerMessage,
  ThreadPayload,
  TipPayload,
} from "./protocol.js";

export interface ActiveReminder {
  noteId: string;
  summary: string | null;
}

export interface SessionState {
  notes: Map<string, NotePayload>;
  threads: Map<string, ThreadPayload>;
  threadOrder: string[];
  partialTail: string;
  lastFinalText: string;
  activeTip: TipPayload | null;
  reminders: Map<string, ActiveReminder>;
  filter: Set<ProcessLabel>;
  selectedNoteId: string | null;
  lastError: string | null;
}

export type StateEvent =
  | { type: "change" }
  | { type: "viz"; variant: "boundary" | "chunking" }
  | { type: "error"; detail: string };

export type Listener = (event: StateEvent) => void;

const TAIL_WORDS = 6;

export class SessionStore {
  readonly state: SessionState = {
    notes: new Map(),
    threads: new Map(),
    threadOrder: [],
    partialTail: "",
    lastFinalText: "",
    activeTip: null,
    reminders: new Map(),
    filter: new Set(),
    selectedNoteId: null,
    lastError: null,
  };

  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(event: StateEvent): void {
    for (const listener of this.listeners) listener(event);
  }

  apply(message: ServerMessage): void {
    const state = this.state;
    switch (message.kind) {
      case "talktext": {
        const words = message.text.trim().split(/\s+/).filter(Boolean);
        state.partialTail = words.slice(-TAIL_WORDS).join(" ");
        if (message.is_final) state.lastFinalText = message.text;
        break;
      }
      case "talkviz":
        this.emit({ type: "viz", variant: message.variant });
        return;
      case "note_created":
      case "note_enriched":
        state.notes.set(message.note.id, message.note);
        break;
      case "note_merged": {
        state.notes.set(message.note.id, message.note);
        state.notes.delete(message.merged_id);
        if (state.selectedNoteId === message.merged_id) {
          state.selectedNoteId = message.note.id;
        }
        break;
      }
      case "thread_updated": {
        if (!state.threads.has(message.thread.id)) {
          state.threadOrder.push(message.thread.id);
        }
        state.threads.set(message.thread.id, message.thread);
        break;
      }
      case "tip_shown":
        state.activeTip = message.tip;
        break;
      case "tip_dismissed":
        if (state.activeTip && state.activeTip.id === message.id) {
          state.activeTip = null;
        }
        break;
      case "reminder_shown":
        state.reminders.set(message.note_id, {
          noteId: message.note_id,
          summary: message.summary,
        });
        break;
      case "reminder_hidden":
        state.reminders.delete(message.note_id);
        break;
      case "error":
        state.lastError = message.detail;
        this.emit({ type: "error", detail: message.detail });
        return;
    }
    this.emit({ type: "change" });
  }

  /** Replace notes/threads wholesale (page reload refetch). */
  load(notes: NotePayload[], threads: ThreadPayload[]): void {
    this.state.notes = new Map(notes.map((note) => [note.id, note]));
    this.state.threads = new Map(threads.map((thread) => [thread.id, thread]));
    this.state.threadOrder = threads.map((thread) => thread.id);
    this.emit({ type: "change" });
  }

  setFilter(labels: Set<ProcessLabel>): void {
    this.state.filter = new Set(labels);
    this.emit({ type: "change" });
  }

  select(noteId: string | null): void {
    this.state.selectedNoteId = noteId;
    this.emit({ type: "change" });
  }

  /** Notes grouped by thread, label-filtered; empty filter means all. */
  visibleNotes(): NotePayload[] {
    const { notes, threads, threadOrder, filter } = this.state;
    const grouped: NotePayload[] = [];
    const seen = new Set<string>();
    for (const threadId of threadOrder) {
      const thread = threads.get(threadId);
      if (!thread) continue;
      for (const noteId of thread.note_ids) {
        const note = notes.get(noteId);
        if (note) {
          grouped.push(note);
          seen.add(noteId);
        }
      }
    }
    for (const note of notes.values()) {
      if (!seen.has(note.id)) grouped.push(note); // not yet threaded
    }
    if (filter.size === 0) return grouped;
    return grouped.filter((note) => note.labels.some((label) => filter.has(label)));
  }
}
