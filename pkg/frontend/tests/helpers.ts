// Stub transport for driving the client against recorded server traffic.

import type { ClientMessage, ServerMessage } from "../src/protocol.js";
import type { SocketLike } from "../src/client.js";

import wireFixture from "./fixture/wire_messages.json";

export const FIXTURE_MESSAGES = wireFixture as ServerMessage[];

export class FakeSocket implements SocketLike {
  sent: ClientMessage[] = [];
  onmessage: ((event: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onopen: (() => void) | null = null;
  closed = false;

  send(data: string): void {
    this.sent.push(JSON.parse(data) as ClientMessage);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  /** Push one server frame into the client, as the stub server. */
  receive(message: ServerMessage): void {
    this.onmessage?.({ data: JSON.stringify(message) });
  }

  replay(messages: ServerMessage[]): void {
    for (const message of messages) this.receive(message);
  }

  sentOfKind<K extends ClientMessage["kind"]>(kind: K): ClientMessage[] {
    return this.sent.filter((message) => message.kind === kind);
  }
}

export function fakeFetch(sessionId = "sess-test"): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    if (url.endsWith("/session") && init?.method === "POST") {
      return jsonResponse({ session_id: sessionId, mode: "pointaloud" });
    }
    if (url.includes("/notes")) return jsonResponse({ session_id: sessionId, notes: [] });
    if (url.includes("/threads")) return jsonResponse({ session_id: sessionId, threads: [] });
    if (url.endsWith("/close")) return jsonResponse({ closed: true });
    return jsonResponse({}, 404);
  }) as typeof fetch;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
