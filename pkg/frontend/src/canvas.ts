// Main 2D canvas: floor-plan background, freehand sketching, note anchors
// with hover cards, and the selection overlays (pointer-trace dots plus
// linked-element highlights). Sketch strokes live only in the client.

import type { NotePayload, SceneElementPayload } from "./protocol.js";
import type { SessionStore } from "./state.js";
import { LABEL_TITLES } from "./protocol.js";

export interface CanvasHandlers {
  /** A deliberate click on an anchor or card: select + one note_checked. */
  onNoteChecked: (noteId: string) => void;
}

export interface CanvasInstance {
  element: HTMLElement;
  update: () => void;
  destroy: () => void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function createCanvas(
  root: HTMLElement,
  store: SessionStore,
  handlers: CanvasHandlers,
  scene: SceneElementPayload[],
  size: { width: number; height: number },
): CanvasInstance {
  const container = document.createElement("div");
  container.className = "plan-canvas";
  container.style.width = `${size.width}px`;
  container.style.height = `${size.height}px`;

  // layers bottom-up: floor plan, sketch, element highlights, traces, anchors
  const planLayer = document.createElement("div");
  planLayer.className = "layer plan-layer";
  for (const element of scene) {
    const room = document.createElement("div");
    room.className = "room";
    room.dataset.elementId = element.id;
    room.style.left = `${element.bounds.x0}px`;
    room.style.top = `${element.bounds.y0}px`;
    room.style.width = `${element.bounds.x1 - element.bounds.x0}px`;
    room.style.height = `${element.bounds.y1 - element.bounds.y0}px`;
    room.innerHTML = `<span class="room-name">${escapeHtml(element.name)}</span>`;
    planLayer.appendChild(room);
  }

  const sketchLayer = document.createElementNS(SVG_NS, "svg");
  sketchLayer.setAttribute("class", "layer sketch-layer");
  sketchLayer.setAttribute("width", String(size.width));
  sketchLayer.setAttribute("height", String(size.height));

  const traceLayer = document.createElementNS(SVG_NS, "svg");
  traceLayer.setAttribute("class", "layer trace-layer");
  traceLayer.setAttribute("width", String(size.width));
  traceLayer.setAttribute("height", String(size.height));

  const anchorLayer = document.createElement("div");
  anchorLayer.className = "layer anchor-layer";

  const reminderLayer = document.createElement("div");
  reminderLayer.className = "layer reminder-layer";

  const card = document.createElement("div");
  card.className = "note-card";
  card.hidden = true;

  container.append(planLayer, sketchLayer, traceLayer, anchorLayer, reminderLayer, card);
  root.appendChild(container);

  // -- freehand sketching ----------------------------------------------------

  let stroke: SVGPolylineElement | null = null;
  container.addEventListener("pointerdown", (event) => {
    if ((event.target as HTMLElement).closest(".note-anchor, .note-card")) return;
    stroke = document.createElementNS(SVG_NS, "polyline");
    stroke.setAttribute("class", "stroke");
    stroke.setAttribute("points", `${event.offsetX},${event.offsetY}`);
    sketchLayer.appendChild(stroke);
  });
  container.addEventListener("pointermove", (event) => {
    if (!stroke) return;
    const points = stroke.getAttribute("points") ?? "";
    stroke.setAttribute("points", `${points} ${event.offsetX},${event.offsetY}`);
  });
  const endStroke = () => {
    stroke = null;
  };
  container.addEventListener("pointerup", endStroke);
  container.addEventListener("pointerleave", endStroke);

  // -- note card -----------------------------------------------------------------

  function showCard(note: NotePayload): void {
    const labels = note.labels
      .map((label) => `<span class="chip chip-${label}">${LABEL_TITLES[label]}</span>`)
      .join("");
    const actions = note.actions
      .map((title) => `<button class="action" type="button">${escapeHtml(title)}</button>`)
      .join("");
    card.innerHTML = `
      <div class="card-labels">${labels}</div>
      <div class="card-summary">${escapeHtml(note.summary ?? "")}</div>
      <div class="card-transcript">${escapeHtml(note.transcript)}</div>
      <div class="card-actions">${actions}</div>
    `;
    card.dataset.noteId = note.id;
    card.style.left = `${note.anchor.x + 14}px`;
    card.style.top = `${note.anchor.y + 14}px`;
    card.hidden = false;
  }

  function hideCard(): void {
    if (card.dataset.noteId !== store.state.selectedNoteId) {
      card.hidden = true;
      delete card.dataset.noteId;
    }
  }

  // Action suggestion buttons are inert probes; swallow their clicks so they
  // do not count as note checks.
  card.addEventListener("click", (event) => {
    if ((event.target as HTMLElement).classList.contains("action")) {
      event.stopPropagation();
      return;
    }
    const noteId = card.dataset.noteId;
    if (noteId) handlers.onNoteChecked(noteId);
  });

  // -- rendering ------------------------------------------------------------------

  function renderAnchors(): void {
    anchorLayer.textContent = "";
    for (const note of store.state.notes.values()) {
      if (note.anchor.view !== "2D") continue; // this client renders 2D only
      const dot = document.createElement("button");
      dot.type = "button";
      dot.className = "note-anchor";
      dot.dataset.noteId = note.id;
      dot.dataset.state = note.state;
      if (note.id === store.state.selectedNoteId) dot.classList.add("selected");
      dot.style.left = `${note.anchor.x}px`;
      dot.style.top = `${note.anchor.y}px`;
      dot.title = note.summary ?? note.transcript;
      dot.addEventListener("pointerenter", () => showCard(note));
      dot.addEventListener("pointerleave", hideCard);
      dot.addEventListener("click", (event) => {
        event.stopPropagation();
        handlers.onNoteChecked(note.id);
      });
      anchorLayer.appendChild(dot);
    }
  }

  function renderSelectionOverlays(): void {
    traceLayer.textContent = "";
    for (const room of planLayer.querySelectorAll<HTMLElement>(".room")) {
      room.classList.remove("highlight");
    }
    const selected = store.state.selectedNoteId
      ? store.state.notes.get(store.state.selectedNoteId)
      : null;
    if (!selected) return;
    for (const sample of selected.trace) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("class", "trace-dot");
      dot.setAttribute("cx", String(sample.x));
      dot.setAttribute("cy", String(sample.y));
      dot.setAttribute("r", "3");
      traceLayer.appendChild(dot);
    }
    for (const elementId of selected.linked_elements) {
      const room = planLayer.querySelector<HTMLElement>(
        `.room[data-element-id="${elementId}"]`,
      );
      room?.classList.add("highlight");
    }
    showCard(selected);
  }

  function renderReminders(): void {
    reminderLayer.textContent = "";
    for (const reminder of store.state.reminders.values()) {
      const note = store.state.notes.get(reminder.noteId);
      if (!note) continue;
      const flash = document.createElement("div");
      flash.className = "reminder-flash";
      flash.dataset.noteId = note.id;
      flash.textContent = reminder.summary ?? note.summary ?? note.transcript;
      flash.style.left = `${note.anchor.x + 12}px`;
      flash.style.top = `${note.anchor.y - 30}px`;
      reminderLayer.appendChild(flash);
    }
  }

  function update(): void {
    renderAnchors();
    renderSelectionOverlays();
    renderReminders();
  }

  return {
    element: container,
    update,
    destroy: () => container.remove(),
  };
}
