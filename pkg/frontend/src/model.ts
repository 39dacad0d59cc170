// Client-side view model: the latest server state snapshot plus transient
// presentation facts derived from the event feed (day/night sweeps, chimes,
// feedback toasts, the in-between of SimulationStarted/Completed). It holds
// no game truth of its own.

import type { ContentPackData, GameEvent, HintView, MaterialInfo, StateView } from "./types.js";

export const SEARCH_ZONES = ["projector corner", "simulation desk", "assembly bench", "gadget ring"] as const;
export type SearchZone = (typeof SEARCH_ZONES)[number];

/** Deterministic zone for a hint, so "searching" a zone always finds the
 * same papers on every client. */
export function zoneForHint(hintId: string): SearchZone {
  let hash = 0;
  for (let i = 0; i < hintId.length; i++) {
    hash = (hash * 31 + hintId.charCodeAt(i)) >>> 0;
  }
  return SEARCH_ZONES[hash % SEARCH_ZONES.length];
}

export interface FeedbackItem {
  seq: number;
  text: string;
  kind: "chime" | "fanfare" | "feedback" | "door" | "info";
}

export class ViewModel {
  state: StateView | null = null;
  pendingAction = false;
  connectionLost = false;
  daySweeps = 0;
  feedback: FeedbackItem[] = [];
  transcript: string | null = null;
  failedGadgets: string[] = [];
  lastValidation: { ok: boolean; violations: { message: string }[] } | null = null;
  searchedZones = new Set<SearchZone>();

  constructor(public readonly content: ContentPackData) {}

  material(id: string): MaterialInfo | undefined {
    return this.content.materials.find((m) => m.id === id);
  }

  get locations(): string[] {
    return Object.keys(this.content.climate.locations).sort();
  }

  /** Spawned-but-uncollected hints hiding in a zone; found by searching it. */
  discoverableHints(zone: SearchZone): HintView[] {
    if (!this.state) return [];
    return this.state.hints.filter((h) => !h.collected && zoneForHint(h.id) === zone);
  }

  get gallery(): HintView[] {
    return this.state?.hints.filter((h) => h.collected) ?? [];
  }

  get projectedHint(): HintView | null {
    return this.state?.hints.find((h) => h.projected) ?? null;
  }

  searchZone(zone: SearchZone): void {
    this.searchedZones.add(zone);
  }

  applySnapshot(state: StateView): void {
    this.state = state;
  }

  /** Fold feed events into the transient presentation state. */
  applyEvents(events: GameEvent[]): void {
    for (const event of events) {
      switch (event.kind) {
        case "MajorFanfare":
          this.daySweeps += 1;
          this.pushFeedback(event.seq, `Quest completed: ${event.payload.quest_id}`, "fanfare");
          break;
        case "MinorChime":
          this.pushFeedback(event.seq, `Task done: ${event.payload.quest_id}`, "chime");
          break;
        case "LockUnlocked":
          this.pushFeedback(
            event.seq, `A lock clicks open (${event.payload.locks_unlocked}/4)`, "fanfare",
          );
          break;
        case "DoorOpened":
          this.pushFeedback(event.seq, "The door swings open!", "door");
          break;
        case "SimulationStarted":
          this.failedGadgets = [];
          break;
        case "ValidationFeedback": {
          const payload = event.payload as {
            context?: string;
            failed_gadgets?: string[];
            message?: string;
            ok?: boolean;
            violations?: { message: string }[];
          };
          if (payload.context === "wall_quest" && payload.failed_gadgets) {
            this.failedGadgets = payload.failed_gadgets;
            this.pushFeedback(
              event.seq,
              `Wall rejected by: ${payload.failed_gadgets.join(", ")}`,
              "feedback",
            );
          } else if (payload.context === "wall_sample") {
            this.lastValidation = {
              ok: Boolean(payload.ok),
              violations: payload.violations ?? [],
            };
          } else if (payload.message) {
            this.pushFeedback(event.seq, String(payload.message), "feedback");
          }
          break;
        }
        default:
          break;
      }
    }
  }

  private pushFeedback(seq: number, text: string, kind: FeedbackItem["kind"]): void {
    this.feedback.push({ seq, text, kind });
    if (this.feedback.length > 8) {
      this.feedback = this.feedback.slice(-8);
    }
  }
}
