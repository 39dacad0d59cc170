// Thin typed client over the service HTTP API. Every game mutation goes
// through postAction; the client can never fabricate state on its own.

import type { ActionResponse, GameAction, GameEvent, StateView } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "HttpError";
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = String(body.detail);
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, detail);
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  createSession(scenarioId: string, seed: number) {
    return this.request<{ session_id: string; events: GameEvent[] }>("/sessions", {
      method: "POST",
      body: JSON.stringify({ scenario_id: scenarioId, seed }),
    });
  }

  getState(sessionId: string) {
    return this.request<StateView>(`/sessions/${sessionId}/state`);
  }

  getEvents(sessionId: string, after: number) {
    return this.request<{ events: GameEvent[] }>(
      `/sessions/${sessionId}/events?after=${after}`,
    );
  }

  postAction(sessionId: string, action: GameAction) {
    return this.request<ActionResponse>(`/sessions/${sessionId}/actions`, {
      method: "POST",
      body: JSON.stringify({ action }),
    });
  }

  health() {
    return this.request<{ status: string }>("/healthz");
  }
}
