// Wire types for the session service: JSON text frames over WebSocket with a
// `kind` discriminator, plus the HTTP request/response bodies the client uses.

export type View = "2D" | "3D";

export type ProcessLabel =
  | "design_intent"
  | "process"
  | "todo"
  | "important"
  | "problem"
  | "question";

export const ALL_LABELS: ProcessLabel[] = [
  "design_intent",
  "process",
  "todo",
  "important",
  "problem",
  "question",
];

export const LABEL_TITLES: Record<ProcessLabel, string> = {
  design_intent: "Intent",
  process: "Process",
  todo: "To-Do",
  important: "Important",
  problem: "Problem",
  question: "Question",
};

export interface AnchorPayload {
  x: number;
  y: number;
  z?: number;
  view: View;
  confidence: "from_trace" | "last_known" | "fallback";
}

export interface TraceSamplePayload {
  x: number;
  y: number;
  t: number;
  view: View;
  z?: number;
}

export interface NotePayload {
  id: string;
  transcript: string;
  t_start: number;
  t_end: number;
  summary: string | null;
  labels: ProcessLabel[];
  actions: string[];
  anchor: AnchorPayload;
  linked_elements: string[];
  thread_id: string | null;
  merged_from: string[];
  state: "pending" | "enriched" | "failed";
  trace: TraceSamplePayload[];
}

export interface ThreadPayload {
  id: string;
  title: string;
  note_ids: string[];
  t_last: number;
}

export interface TipPayload {
  id: string;
  category: "potential_issue" | "new_idea" | "probing_question";
  text: string;
}

// server -> client
export type ServerMessage =
  | { kind: "talktext"; text: string; is_final: boolean; t: number }
  | { kind: "talkviz"; variant: "boundary" | "chunking"; t: number }
  | { kind: "note_created"; note: NotePayload; t: number }
  | { kind: "note_enriched"; note: NotePayload; t: number }
  | { kind: "note_merged"; note: NotePayload; merged_id: string; t: number }
  | { kind: "thread_updated"; thread: ThreadPayload; t: number }
  | { kind: "tip_shown"; tip: TipPayload; t: number }
  | { kind: "tip_dismissed"; id: string; t: number }
  | { kind: "reminder_shown"; note_id: string; summary: string | null; t: number }
  | { kind: "reminder_hidden"; note_id: string; t: number }
  | { kind: "error"; detail: string };

// client -> server
export type ClientMessage =
  | { kind: "fragment"; text: string; t_start: number; t_end: number; is_final: boolean }
  | { kind: "pointer"; x: number; y: number; t: number; view: View; z?: number }
  | { kind: "note_checked"; id: string; t?: number }
  | { kind: "tip_ack"; id: string; t?: number }
  | { kind: "filter"; labels: ProcessLabel[]; t?: number }
  | { kind: "view_change"; view: View; t?: number };

export interface SceneElementPayload {
  id: string;
  name: string;
  bounds: { x0: number; y0: number; x1: number; y1: number; z0?: number; z1?: number };
}

export interface SessionConfigBody {
  mode: "pointaloud" | "baseline";
  brief: string;
  canvas: { width: number; height: number };
  scene: SceneElementPayload[];
  initial_view?: View;
}

export interface SessionCreated {
  session_id: string;
  mode: string;
}
