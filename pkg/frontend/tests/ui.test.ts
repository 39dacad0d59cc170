// Panel rendering against fabricated server state (no live service).

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { ViewModel } from "../src/model.js";
import { render } from "../src/ui.js";
import type { ContentPackData, GadgetReportView, StateView } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const CONTENT = JSON.parse(
  readFileSync(join(here, "..", "content", "content_pack.json"), "utf-8"),
) as ContentPackData;

const HEAVY_REPORT: GadgetReportView = {
  u_value: 3.11,
  u_value_ok: false,
  mold: "Heavy",
  cost_per_m2: 142.0,
  cost_tier: "Cheap",
  stability: "MinorCracks",
  energy: { heating: 262.4, cooling: 0.0, total: 262.4, rating: "H" },
};

function stateWith(report: GadgetReportView | null, pending = false): StateView {
  return {
    session_id: "s",
    scenario_id: "escape-room",
    scenario_title: "The Simulation Lab",
    quests: [{ id: "q_wall", title: "Build a wall", kind: "Major", status: "Active" }],
    inactive_quests: 0,
    hints: [],
    locks_unlocked: 3,
    door_open: false,
    desk: {
      orientation: "S", month: 6, hour: 14, location: "Graz",
      cooling_enabled: false, shades_on: false,
      setpoint_heating: 21, setpoint_cooling: 25, window_u: 1.3, shgc: 0.6,
    },
    bench: { spawned: [], assembly: [], created_sample: null },
    assigned_wall: { system: "ReinforcedConcrete", layers: [] },
    last_gadgets: report,
    simulation_pending: pending,
    day_night_cycles_run: 3,
    event_seq: 40,
  };
}

function mount(model: ViewModel): HTMLElement {
  const root = document.createElement("div");
  render(root, model, () => {}, () => {});
  return root;
}

describe("gadget panel", () => {
  it("reflects a heavy-mold wall and names the failing gadgets", () => {
    const model = new ViewModel(CONTENT);
    model.applySnapshot(stateWith(HEAVY_REPORT));
    model.applyEvents([
      {
        seq: 41, kind: "ValidationFeedback",
        payload: {
          context: "wall_quest", quest_id: "q_wall",
          failed_gadgets: ["u_value", "mold", "rating"],
        },
      },
    ]);
    const root = mount(model);
    const mold = root.querySelector('[data-gadget="mold"]')!;
    expect(mold.querySelector('[data-gadget-value="mold"]')!.textContent).toBe("Heavy");
    expect(mold.className).toContain("failing");
    expect(mold.textContent).toContain("blocking the wall quest");
    const rating = root.querySelector('[data-gadget="rating"]')!;
    expect(rating.querySelector(".band.active")!.getAttribute("data-band")).toBe("H");
    const toasts = root.querySelector("footer.feedback")!.textContent!;
    expect(toasts).toContain("mold");
  });

  it("shows a pending notice between start and completion", () => {
    const model = new ViewModel(CONTENT);
    model.applySnapshot(stateWith(null, true));
    const root = mount(model);
    expect(root.querySelector("[data-gadgets-pending]")).not.toBeNull();
    expect(root.querySelector("[data-sim-pending]")).not.toBeNull();
  });

  it("renders the u-value green range from the content pack", () => {
    const model = new ViewModel(CONTENT);
    model.applySnapshot(stateWith(HEAVY_REPORT));
    const root = mount(model);
    const card = root.querySelector('[data-gadget="u_value"]')!;
    expect(card.textContent).toContain("0.12");
    expect(card.textContent).toContain("0.35");
    expect(card.className).toContain("bad");
  });
});

describe("header", () => {
  it("shows locks, door state and the connection banner", () => {
    const model = new ViewModel(CONTENT);
    model.applySnapshot(stateWith(null));
    model.connectionLost = true;
    const root = mount(model);
    expect(root.querySelector(".locks")!.getAttribute("data-locks")).toBe("3");
    expect(root.querySelector("[data-door]")!.getAttribute("data-door")).toBe("false");
    expect(root.querySelector('[data-banner="connection"]')).not.toBeNull();
  });
});
