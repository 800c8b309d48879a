// Pointer-adjacent display: the live transcript tail, segmentation pulses,
// and the proactive tip bubble, all anchored right of the cursor.

import type { SessionStore } from "./state.js";

export interface TalkPointerHandlers {
  onTipAck: (tipId: string) => void;
}

export interface TalkPointerInstance {
  follow: (x: number, y: number) => void;
  update: () => void;
  pulse: (variant: "boundary" | "chunking") => void;
  setVisible: (visible: boolean) => void;
  destroy: () => void;
}

const OFFSET_X = 18;
const OFFSET_Y = -8;

export function createTalkPointer(
  root: HTMLElement,
  store: SessionStore,
  handlers: TalkPointerHandlers,
): TalkPointerInstance {
  const container = document.createElement("div");
  container.className = "talkpointer";
  container.innerHTML = `
    <div class="talktip" hidden></div>
    <div class="talkrow">
      <span class="talkviz" data-variant=""></span>
      <span class="talktext"></span>
    </div>
  `;
  root.appendChild(container);

  const tipEl = container.querySelector<HTMLDivElement>(".talktip")!;
  const vizEl = container.querySelector<HTMLSpanElement>(".talkviz")!;
  const textEl = container.querySelector<HTMLSpanElement>(".talktext")!;

  tipEl.addEventListener("click", () => {
    const tip = store.state.activeTip;
    if (tip) handlers.onTipAck(tip.id);
  });

  let pulseTimer: ReturnType<typeof setTimeout> | null = null;

  function update(): void {
    textEl.textContent = store.state.partialTail;
    const tip = store.state.activeTip;
    if (tip) {
      tipEl.hidden = false;
      tipEl.textContent = tip.text;
      tipEl.dataset.category = tip.category;
      tipEl.dataset.tipId = tip.id;
    } else {
      tipEl.hidden = true;
      tipEl.textContent = "";
      delete tipEl.dataset.tipId;
    }
  }

  return {
    follow(x: number, y: number): void {
      container.style.transform = `translate(${x + OFFSET_X}px, ${y + OFFSET_Y}px)`;
    },
    update,
    pulse(variant: "boundary" | "chunking"): void {
      vizEl.dataset.variant = variant;
      vizEl.classList.remove("pulse");
      // restart the CSS animation even when two pulses arrive back to back
      void vizEl.offsetWidth;
      vizEl.classList.add("pulse");
      if (pulseTimer) clearTimeout(pulseTimer);
      pulseTimer = setTimeout(() => vizEl.classList.remove("pulse"), 600);
    },
    setVisible(visible: boolean): void {
      container.hidden = !visible;
    },
    destroy(): void {
      if (pulseTimer) clearTimeout(pulseTimer);
      container.remove();
    },
  };
}
