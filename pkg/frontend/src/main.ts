// Application wiring: session form, transport, store, and the three UI
// surfaces (canvas, pointer display, explorer sidebar).

import { SessionClient } from "./client.js";
import type { SocketFactory } from "./client.js";
import { createCanvas } from "./canvas.js";
import { createExplorer } from "./explorer.js";
import { createTalkPointer } from "./talkpointer.js";
import { createSpeechCapture, playScript } from "./speech.js";
import { SessionStore } from "./state.js";
import type { ProcessLabel, SceneElementPayload } from "./protocol.js";

export interface BootOptions {
  socketFactory?: SocketFactory;
  fetchFn?: typeof fetch;
}

const CANVAS_SIZE = { width: 960, height: 520 };

// A small two-bedroom floor plan; bounds double as element-link targets.
const SCENE: SceneElementPayload[] = [
  { id: "el-kitchen", name: "Kitchen", bounds: { x0: 40, y0: 40, x1: 280, y1: 240 } },
  { id: "el-bathroom", name: "Bathroom", bounds: { x0: 320, y0: 40, x1: 480, y1: 200 } },
  { id: "el-bedroom", name: "Bedroom", bounds: { x0: 520, y0: 40, x1: 780, y1: 280 } },
  { id: "el-storage", name: "Storage", bounds: { x0: 40, y0: 300, x1: 200, y1: 430 } },
  { id: "el-corridor", name: "Corridor", bounds: { x0: 240, y0: 300, x1: 700, y1: 380 } },
  { id: "el-laundry", name: "Laundry", bounds: { x0: 740, y0: 320, x1: 900, y1: 460 } },
];

const POINTER_THROTTLE_MS = 50;

export function boot(root: HTMLElement, options: BootOptions = {}): void {
  root.innerHTML = `
    <div class="session-form">
      <label>Server <input id="server-url" value="http://127.0.0.1:8765" /></label>
      <label>Mode
        <select id="mode">
          <option value="pointaloud">full</option>
          <option value="baseline">baseline (transcription only)</option>
        </select>
      </label>
      <label>Brief <input id="brief" value="Repurpose the apartment for a daycare" /></label>
      <button id="start" type="button">Start session</button>
      <span id="mic-note"></span>
    </div>
    <div id="banner" class="banner" hidden>connection lost, retrying…</div>
    <div id="workspace" class="workspace" hidden>
      <div id="canvas-slot"></div>
      <div id="sidebar-slot"></div>
    </div>
    <div class="scripted">
      <details>
        <summary>Scripted mode (no microphone)</summary>
        <textarea id="script" rows="5"
          placeholder="One utterance per line; played as final fragments."></textarea>
        <button id="play-script" type="button">Play script</button>
      </details>
    </div>
  `;

  const store = new SessionStore();
  const banner = root.querySelector<HTMLElement>("#banner")!;
  const workspace = root.querySelector<HTMLElement>("#workspace")!;

  const client = new SessionClient({
    baseUrl: (root.querySelector<HTMLInputElement>("#server-url")!).value,
    socketFactory: options.socketFactory,
    fetchFn: options.fetchFn,
    onMessage: (message) => store.apply(message),
    onConnectionChange: (connected) => {
      banner.hidden = connected;
      pointer.setVisible(connected);
    },
  });

  const selectAndCheck = (noteId: string): void => {
    store.select(noteId);
    client.send({ kind: "note_checked", id: noteId, t: client.now() });
  };

  const canvas = createCanvas(
    root.querySelector<HTMLElement>("#canvas-slot")!,
    store,
    { onNoteChecked: selectAndCheck },
    SCENE,
    CANVAS_SIZE,
  );
  const explorer = createExplorer(root.querySelector<HTMLElement>("#sidebar-slot")!, store, {
    onFilterChange: (labels: Set<ProcessLabel>) => {
      store.setFilter(labels);
      client.send({ kind: "filter", labels: [...labels].sort(), t: client.now() });
    },
    onEntrySelect: selectAndCheck,
  });
  const pointer = createTalkPointer(root, store, {
    onTipAck: (tipId) => client.send({ kind: "tip_ack", id: tipId, t: client.now() }),
  });

  store.subscribe((event) => {
    if (event.type === "change") {
      canvas.update();
      explorer.update();
      pointer.update();
    } else if (event.type === "viz") {
      pointer.pulse(event.variant);
    }
  });

  // pointer stream: track movement over the canvas, throttled
  let lastPointerSent = 0;
  canvas.element.addEventListener("pointermove", (event) => {
    const rect = canvas.element.getBoundingClientRect();
    const x = event.clientX - rect.left;
    const y = event.clientY - rect.top;
    pointer.follow(event.clientX, event.clientY);
    const t = client.now();
    if (t - lastPointerSent >= POINTER_THROTTLE_MS) {
      lastPointerSent = t;
      client.send({ kind: "pointer", x, y, t, view: "2D" });
    }
  });

  const emitFragment = (text: string, tStart: number, tEnd: number, isFinal: boolean) =>
    client.send({ kind: "fragment", text, t_start: tStart, t_end: tEnd, is_final: isFinal });

  const speech = createSpeechCapture(emitFragment, () => client.now());
  root.querySelector<HTMLElement>("#mic-note")!.textContent = speech.available
    ? "microphone capture available"
    : "no browser speech API; use scripted mode";

  root.querySelector<HTMLButtonElement>("#start")!.addEventListener("click", async () => {
    const mode = root.querySelector<HTMLSelectElement>("#mode")!.value as
      | "pointaloud"
      | "baseline";
    await client.openSession({
      mode,
      brief: root.querySelector<HTMLInputElement>("#brief")!.value,
      canvas: CANVAS_SIZE,
      scene: SCENE,
      initial_view: "2D",
    });
    client.connect();
    workspace.hidden = false;
    if (speech.available) speech.start();
    // a reload mid-session reproduces the display from the service
    const [notes, threads] = await Promise.all([client.fetchNotes(), client.fetchThreads()]);
    store.load(notes, threads);
  });

  root.querySelector<HTMLButtonElement>("#play-script")!.addEventListener("click", () => {
    const script = root.querySelector<HTMLTextAreaElement>("#script")!.value;
    playScript(script, emitFragment, () => client.now());
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app")!);
}
