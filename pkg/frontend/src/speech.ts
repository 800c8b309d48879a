// Microphone capture via the browser speech API when available, plus a
// scripted mode that injects fragments from a textarea for testing without
// a microphone. Either path emits the same fragment messages.

export interface FragmentEmitter {
  (text: string, tStart: number, tEnd: number, isFinal: boolean): void;
}

interface RecognitionLike {
  continuous: boolean;
  interimResults: boolean;
  onresult: ((event: any) => void) | null;
  onerror: ((event: any) => void) | null;
  start(): void;
  stop(): void;
}

export interface SpeechController {
  available: boolean;
  start: () => void;
  stop: () => void;
}

export function createSpeechCapture(
  emit: FragmentEmitter,
  now: () => number,
): SpeechController {
  const Recognition =
    (globalThis as any).SpeechRecognition ?? (globalThis as any).webkitSpeechRecognition;
  if (!Recognition) {
    return { available: false, start: () => undefined, stop: () => undefined };
  }
  const recognition: RecognitionLike = new Recognition();
  recognition.continuous = true;
  recognition.interimResults = true;
  let utteranceStart: number | null = null;
  recognition.onresult = (event: any) => {
    for (let i = event.resultIndex; i < event.results.length; i++) {
      const result = event.results[i];
      const text = result[0]?.transcript?.trim() ?? "";
      if (!text) continue;
      if (utteranceStart === null) utteranceStart = now();
      if (result.isFinal) {
        emit(text, utteranceStart, now(), true);
        utteranceStart = null;
      } else {
        emit(text, utteranceStart, now(), false);
      }
    }
  };
  recognition.onerror = () => {
    utteranceStart = null;
  };
  return {
    available: true,
    start: () => recognition.start(),
    stop: () => recognition.stop(),
  };
}

/** Send each non-empty line of the script as one final fragment, spacing
 * utterances by `gapMs` of session time (paced in real time). */
export function playScript(
  script: string,
  emit: FragmentEmitter,
  now: () => number,
  gapMs = 1_500,
  wordMs = 350,
): () => void {
  const lines = script
    .split("\n")
    .map((line) => line.trim())
    .filter(Boolean);
  let cancelled = false;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const step = (index: number) => {
    if (cancelled || index >= lines.length) return;
    const text = lines[index];
    const duration = Math.max(wordMs, text.split(/\s+/).length * wordMs);
    const tStart = now();
    emit(text, tStart, tStart + duration, true);
    timer = setTimeout(() => step(index + 1), duration + gapMs);
  };
  step(0);
  return () => {
    cancelled = true;
    if (timer) clearTimeout(timer);
  };
}
