// Application wiring: one session, one in-flight action at a time, a
// background event poll, and full re-render after every change. All events
// reach the model through the poller's cursor, so nothing renders twice.

import { ApiClient, ApiError } from "./api.js";
import { ViewModel } from "./model.js";
import { EventPoller } from "./poller.js";
import { render } from "./ui.js";
import type { ContentPackData, GameAction } from "./types.js";

export interface AppOptions {
  pollIntervalMs?: number;
}

export class App {
  readonly model: ViewModel;
  poller: EventPoller | null = null;
  sessionId: string | null = null;
  private stopped = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    content: ContentPackData,
    private readonly options: AppOptions = {},
  ) {
    this.model = new ViewModel(content);
  }

  async start(scenarioId: string, seed: number): Promise<void> {
    const created = await this.api.createSession(scenarioId, seed);
    this.sessionId = created.session_id;
    this.poller = new EventPoller(
      this.api,
      created.session_id,
      (events) => {
        this.model.applyEvents(events);
        this.render();
        // async completions (simulation jobs) change the authoritative state
        void this.refreshState()
          .then(() => this.render())
          .catch(() => {}); // the poller's failing flag covers outages
      },
      (failing) => {
        this.model.connectionLost = failing;
        this.render();
      },
      0, // cursor starts before the initial events; the first poll delivers them
    );
    await this.poller.pollOnce();
    await this.refreshState();
    this.poller.start(this.options.pollIntervalMs ?? 700);
    this.render();
  }

  async refreshState(): Promise<void> {
    if (!this.sessionId || this.stopped) return;
    this.model.applySnapshot(await this.api.getState(this.sessionId));
  }

  /** Send one action; ignores input while another is in flight. */
  async dispatch(action: GameAction): Promise<void> {
    if (!this.sessionId || !this.poller || this.model.pendingAction) return;
    this.model.pendingAction = true;
    this.render();
    try {
      const response = await this.api.postAction(this.sessionId, action);
      if (response.data && typeof response.data.transcript === "string") {
        this.model.transcript = response.data.transcript;
      }
      await this.poller.pollOnce(); // deliver this action's events through the cursor
      await this.refreshState();
    } catch (error) {
      if (error instanceof ApiError) {
        this.model.feedback.push({
          seq: -1,
          text: `${error.code}: ${error.message}`,
          kind: "info",
        });
      } else {
        this.model.connectionLost = true;
      }
    } finally {
      this.model.pendingAction = false;
      this.render();
    }
  }

  render(): void {
    render(
      this.root,
      this.model,
      (action) => void this.dispatch(action),
      () => this.render(),
    );
  }

  stop(): void {
    this.stopped = true;
    this.poller?.stop();
  }
}
