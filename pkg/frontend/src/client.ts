// Thin transport wrapper: session HTTP calls plus the WebSocket stream.
// The socket factory is injectable so tests can run against a stub server.

import type {
  ClientMessage,
  NotePayload,
  ServerMessage,
  SessionConfigBody,
  SessionCreated,
  ThreadPayload,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  baseUrl: string;
  socketFactory?: SocketFactory;
  fetchFn?: typeof fetch;
  onMessage: (message: ServerMessage) => void;
  onConnectionChange?: (connected: boolean) => void;
}

export class SessionClient {
  readonly baseUrl: string;
  sessionId: string | null = null;
  private socket: SocketLike | null = null;
  private readonly socketFactory: SocketFactory;
  private readonly fetchFn: typeof fetch;
  private readonly onMessage: (message: ServerMessage) => void;
  private readonly onConnectionChange: (connected: boolean) => void;
  private readonly t0 = Date.now();

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.socketFactory =
      options.socketFactory ?? ((url) => new WebSocket(url) as unknown as SocketLike);
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.onMessage = options.onMessage;
    this.onConnectionChange = options.onConnectionChange ?? (() => undefined);
  }

  /** Session-relative milliseconds, matching the fragment/pointer clock. */
  now(): number {
    return Date.now() - this.t0;
  }

  async openSession(config: SessionConfigBody): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/session`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
    if (!response.ok) {
      throw new Error(`session open failed: ${response.status} ${await response.text()}`);
    }
    const created = (await response.json()) as SessionCreated;
    this.sessionId = created.session_id;
    return created.session_id;
  }

  connect(): void {
    if (!this.sessionId) throw new Error("no session opened");
    const wsBase = this.baseUrl.replace(/^http/, "ws");
    const socket = this.socketFactory(`${wsBase}/session/${this.sessionId}/stream`);
    this.socket = socket;
    socket.onopen = () => this.onConnectionChange(true);
    socket.onmessage = (event) => {
      let parsed: ServerMessage;
      try {
        parsed = JSON.parse(event.data) as ServerMessage;
      } catch {
        return;
      }
      this.onMessage(parsed);
    };
    socket.onclose = () => {
      this.onConnectionChange(false);
      this.socket = null;
    };
  }

  disconnect(): void {
    this.socket?.close();
    this.socket = null;
  }

  send(message: ClientMessage): void {
    if (!this.socket) return; // disconnected: gestures are dropped, not queued
    this.socket.send(JSON.stringify(message));
  }

  async fetchNotes(labels?: string[]): Promise<NotePayload[]> {
    const params = labels && labels.length ? `?labels=${labels.join(",")}` : "";
    const response = await this.fetchFn(
      `${this.baseUrl}/session/${this.sessionId}/notes${params}`,
    );
    const body = (await response.json()) as { notes: NotePayload[] };
    return body.notes;
  }

  async fetchThreads(): Promise<ThreadPayload[]> {
    const response = await this.fetchFn(`${this.baseUrl}/session/${this.sessionId}/threads`);
    const body = (await response.json()) as { threads: ThreadPayload[] };
    return body.threads;
  }

  async closeSession(): Promise<void> {
    if (!this.sessionId) return;
    await this.fetchFn(`${this.baseUrl}/session/${this.sessionId}/close`, { method: "POST" });
  }
}
