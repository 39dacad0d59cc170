// DOM rendering for the four room panels plus the door/lock header.
// Rendering is a pure function of the view model; every interaction funnels
// into the dispatcher as a documented API action.

import type { ViewModel } from "./model.js";
import { SEARCH_ZONES } from "./model.js";
import { sunPosition } from "./sun.js";
import type { GameAction, GadgetReportView, HintView } from "./types.js";

export type Dispatch = (action: GameAction) => void;
export type Rerender = () => void;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function button(label: string, attrs: Record<string, string>, onClick: () => void): HTMLButtonElement {
  const node = el("button", attrs, [label]);
  node.addEventListener("click", onClick);
  return node;
}

export function render(
  root: HTMLElement, model: ViewModel, dispatch: Dispatch, rerender: Rerender = () => {},
): void {
  root.replaceChildren();
  if (!model.state) {
    root.append(el("p", { class: "connecting" }, ["Connecting to the lab..."]));
    return;
  }
  root.append(renderHeader(model, dispatch));
  const grid = el("main", { class: "panels" });
  grid.append(renderHintPanel(model, dispatch, rerender));
  grid.append(renderDeskPanel(model, dispatch));
  grid.append(renderAssemblyPanel(model, dispatch));
  grid.append(renderGadgetPanel(model));
  root.append(grid);
  root.append(renderFeedbackLog(model));
  if (model.pendingAction) {
    for (const node of root.querySelectorAll("button, select, input")) {
      (node as HTMLButtonElement).disabled = true;
    }
  }
}

function renderHeader(model: ViewModel, dispatch: Dispatch): HTMLElement {
  const state = model.state!;
  const locks = el("span", { class: "locks", "data-locks": String(state.locks_unlocked) });
  for (let i = 0; i < 4; i++) {
    locks.append(
      el("span", { class: i < state.locks_unlocked ? "lock open" : "lock" }, [
        i < state.locks_unlocked ? "\u{1F513}" : "\u{1F512}",
      ]),
    );
  }
  const door = el(
    "span",
    { class: state.door_open ? "door open" : "door", "data-door": String(state.door_open) },
    [state.door_open ? "Door: open" : "Door: locked"],
  );
  const header = el("header", { class: `top ${model.daySweeps % 2 ? "night" : "day"}` }, [
    el("h1", {}, [state.scenario_title]),
    locks,
    door,
    button("Try the door", { "data-action": "try-door" }, () => dispatch({ type: "TryDoor" })),
    el("span", {
      class: "sweep",
      "data-sweeps": String(model.daySweeps),
      title: "day/night cycles",
    }, [`\u{1F305} ${model.daySweeps}`]),
  ]);
  if (state.simulation_pending) {
    header.append(el("span", { class: "pending", "data-sim-pending": "true" }, ["simulating…"]));
  }
  if (model.connectionLost) {
    header.append(
      el("div", { class: "banner", "data-banner": "connection" }, [
        "Connection lost - retrying without losing your place",
      ]),
    );
  }
  return header;
}

function hintCard(model: ViewModel, hint: HintView, dispatch: Dispatch): HTMLElement {
  const card = el("div", { class: "hint-card", "data-hint": hint.id }, [
    el("p", { class: "hint-text" }, [hint.text]),
    el("span", { class: "figure" }, [`[${hint.figure_asset_id}]`]),
  ]);
  card.append(
    button("Enlarge on projector", { "data-project": hint.id }, () =>
      dispatch({ type: "ProjectHint", hint_id: hint.id }),
    ),
  );
  return card;
}

function renderHintPanel(model: ViewModel, dispatch: Dispatch, rerender: Rerender): HTMLElement {
  const panel = el("section", { class: "panel hints", "data-panel": "hints" }, [
    el("h2", {}, ["Hints & projector"]),
  ]);
  const zones = el("div", { class: "zones" });
  for (const zone of SEARCH_ZONES) {
    zones.append(
      button(`Search the ${zone}`, { "data-zone": zone }, () => {
        model.searchZone(zone); // searching is exploration, not a game mutation
        rerender();
      }),
    );
  }
  panel.append(zones);

  const found = el("div", { class: "found" });
  for (const zone of SEARCH_ZONES) {
    if (!model.searchedZones.has(zone)) continue;
    const discoverable = model.discoverableHints(zone);
    const box = el("div", { class: "zone-results", "data-zone-results": zone }, [
      el("h3", {}, [zone]),
    ]);
    if (discoverable.length === 0) {
      box.append(el("p", { class: "empty" }, ["nothing new here"]));
    }
    for (const hint of discoverable) {
      box.append(
        el("div", { class: "paper" }, [
          `A paper: "${hint.text.slice(0, 40)}…" `,
        ]),
      );
      box.lastElementChild!.append(
        button("Pick up", { "data-collect": hint.id }, () =>
          dispatch({ type: "CollectHint", hint_id: hint.id }),
        ),
      );
    }
    found.append(box);
  }
  panel.append(found);

  panel.append(el("h3", {}, [`Collected papers (${model.gallery.length})`]));
  const gallery = el("div", { class: "gallery" });
  for (const hint of model.gallery) {
    gallery.append(hintCard(model, hint, dispatch));
  }
  panel.append(gallery);

  const projected = model.projectedHint;
  const screen = el("div", { class: "projector", "data-projected": projected?.id ?? "" });
  if (projected) {
    screen.append(
      el("h3", {}, ["On the curtain"]),
      el("p", { class: "projected-text" }, [projected.text]),
      button("Play cassette", { "data-action": "play-cassette" }, () =>
        dispatch({ type: "PlayCassette" }),
      ),
    );
    if (model.transcript) {
      screen.append(el("blockquote", { "data-transcript": "true" }, [model.transcript]));
    }
  } else {
    screen.append(el("p", { class: "empty" }, ["The projector curtain is blank."]));
  }
  panel.append(screen);
  return panel;
}

function renderDeskPanel(model: ViewModel, dispatch: Dispatch): HTMLElement {
  const desk = model.state!.desk;
  const panel = el("section", { class: "panel desk", "data-panel": "desk" }, [
    el("h2", {}, ["Simulation desk"]),
  ]);

  const select = (dial: string, options: (string | number)[], current: string | number) => {
    const node = el("select", { "data-dial": dial });
    for (const option of options) {
      const opt = el("option", { value: String(option) }, [String(option)]);
      if (String(option) === String(current)) opt.setAttribute("selected", "selected");
      node.append(opt);
    }
    node.addEventListener("change", () =>
      dispatch({ type: "SetDeskDial", dial, value: node.value }),
    );
    return el("label", { class: "dial" }, [`${dial}: `, node]);
  };

  panel.append(
    select("orientation", Object.keys(model.content.climate.orientation_factors), desk.orientation),
    select("month", Array.from({ length: 12 }, (_, i) => i + 1), desk.month),
    select("hour", Array.from({ length: 24 }, (_, i) => i), desk.hour),
    select("location", model.locations, desk.location),
  );

  const toggle = (dial: "cooling_enabled" | "shades_on", label: string) => {
    const box = el("input", { type: "checkbox", "data-dial": dial });
    (box as HTMLInputElement).checked = Boolean(desk[dial]);
    box.addEventListener("change", () =>
      dispatch({ type: "SetDeskDial", dial, value: (box as HTMLInputElement).checked }),
    );
    return el("label", { class: "dial" }, [box, ` ${label}`]);
  };
  panel.append(toggle("cooling_enabled", "cooling"), toggle("shades_on", "window shades"));

  const number = (dial: string, min: number, max: number, step: number, current: number) => {
    const input = el("input", {
      type: "number", "data-dial": dial,
      min: String(min), max: String(max), step: String(step), value: String(current),
    });
    input.addEventListener("change", () =>
      dispatch({ type: "SetDeskDial", dial, value: Number((input as HTMLInputElement).value) }),
    );
    return el("label", { class: "dial" }, [`${dial}: `, input]);
  };
  panel.append(
    number("setpoint_heating", 18, 25, 0.5, desk.setpoint_heating),
    number("setpoint_cooling", 22, 28, 0.5, desk.setpoint_cooling),
    number("window_u", 0.6, 2.8, 0.1, desk.window_u),
    number("shgc", 0.1, 0.8, 0.05, desk.shgc),
  );

  const sun = sunPosition(desk.month, desk.hour);
  const indicator = el("div", {
    class: sun.daylight ? "sun up" : "sun down",
    "data-sun-altitude": sun.altitudeDeg.toFixed(1),
  }, [
    sun.daylight
      ? `☀ altitude ${sun.altitudeDeg.toFixed(0)}°, azimuth ${sun.azimuthDeg.toFixed(0)}°`
      : "☾ night over the model",
  ]);
  const dot = el("span", { class: "sun-dot" });
  dot.style.left = `${(sun.azimuthDeg / 360) * 100}%`;
  dot.style.bottom = `${Math.max(0, sun.altitudeDeg / 90) * 100}%`;
  indicator.append(dot);
  panel.append(indicator);
  return panel;
}

function renderAssemblyPanel(model: ViewModel, dispatch: Dispatch): HTMLElement {
  const state = model.state!;
  const panel = el("section", { class: "panel assembly", "data-panel": "assembly" }, [
    el("h2", {}, ["Wall assembly"]),
  ]);

  const palette = el("select", { "data-palette": "material" });
  const byCategory = new Map<string, typeof model.content.materials>();
  for (const material of model.content.materials) {
    const group = byCategory.get(material.category) ?? [];
    group.push(material);
    byCategory.set(material.category, group);
  }
  for (const [category, materials] of byCategory) {
    const group = el("optgroup", { label: category });
    for (const material of materials) {
      group.append(
        el("option", { value: material.id }, [
          `${material.name} (λ ${material.conductivity}, ${material.min_thickness}–${material.max_thickness} m)`,
        ]),
      );
    }
    palette.append(group);
  }
  const thickness = el("input", {
    type: "number", "data-input": "thickness", step: "0.001", min: "0.0001", value: "0.1",
  });
  panel.append(
    el("div", { class: "spawner" }, [
      palette,
      el("label", {}, ["thickness m ", thickness]),
      button("Spawn layer", { "data-action": "spawn" }, () =>
        dispatch({
          type: "SpawnLayer",
          material: (palette as HTMLSelectElement).value,
          thickness: Number((thickness as HTMLInputElement).value),
        }),
      ),
    ]),
  );

  const bench = el("div", { class: "bench" }, [el("h3", {}, ["Bench"])]);
  state.bench.spawned.forEach((layer, index) => {
    if (layer.placed) return;
    const material = model.material(layer.material);
    const positionSelect = el("select", { "data-position-for": String(index) });
    for (let p = 0; p < 8; p++) {
      positionSelect.append(el("option", { value: String(p) }, [String(p)]));
    }
    const row = el("div", { class: "bench-row", "data-bench-index": String(index) }, [
      `${material?.name ?? layer.material} ${layer.thickness} m → slot `,
      positionSelect,
      button("Place", { "data-place": String(index) }, () =>
        dispatch({
          type: "PlaceLayer",
          bench_index: index,
          position: Number((positionSelect as HTMLSelectElement).value),
        }),
      ),
    ]);
    bench.append(row);
  });
  panel.append(bench);

  const stack = el("div", { class: "stack" }, [el("h3", {}, ["Assembly (interior → exterior)"])]);
  for (const [position, index] of state.bench.assembly) {
    const layer = state.bench.spawned[index];
    const material = model.material(layer.material);
    stack.append(
      el("div", { class: "slot", "data-slot": String(position) }, [
        `${position}: ${material?.name ?? layer.material} ${layer.thickness} m `,
        button("Remove", { "data-remove": String(position) }, () =>
          dispatch({ type: "RemoveLayer", position }),
        ),
      ]),
    );
  }
  panel.append(stack);

  panel.append(
    button("Create wall sample", { "data-action": "create-sample" }, () =>
      dispatch({ type: "CreateWallSample" }),
    ),
    button("Assign to the office", { "data-action": "assign-sample" }, () =>
      dispatch({ type: "AssignWallSample" }),
    ),
  );

  if (model.lastValidation) {
    const box = el("div", {
      class: model.lastValidation.ok ? "validation ok" : "validation bad",
      "data-validation": model.lastValidation.ok ? "ok" : "violations",
    });
    box.append(
      model.lastValidation.ok
        ? "The information center approves this layer order."
        : "The information center objects:",
    );
    for (const violation of model.lastValidation.violations) {
      box.append(el("div", { class: "violation" }, [violation.message]));
    }
    panel.append(box);
  }
  if (state.bench.created_sample) {
    panel.append(
      el("p", { class: "sample", "data-sample": "true" }, [
        `Sample ready: ${state.bench.created_sample.system}, ` +
          `${state.bench.created_sample.layers.length} layers`,
      ]),
    );
  }
  return panel;
}

function gadgetCard(
  name: string, value: string, ok: boolean | null, failing: boolean, extra = "",
): HTMLElement {
  const classes = ["gadget"];
  if (ok === true) classes.push("good");
  if (ok === false) classes.push("bad");
  if (failing) classes.push("failing");
  return el("div", { class: classes.join(" "), "data-gadget": name }, [
    el("h4", {}, [name]),
    el("p", { class: "value", "data-gadget-value": name }, [value]),
    ...(extra ? [el("p", { class: "extra" }, [extra])] : []),
    ...(failing ? [el("p", { class: "verdict" }, ["blocking the wall quest"])] : []),
  ]);
}

function renderGadgetPanel(model: ViewModel): HTMLElement {
  const state = model.state!;
  const panel = el("section", { class: "panel gadgets", "data-panel": "gadgets" }, [
    el("h2", {}, ["Result gadgets"]),
  ]);
  const report: GadgetReportView | null = state.last_gadgets;
  if (state.simulation_pending) {
    panel.append(el("p", { class: "pending", "data-gadgets-pending": "true" }, [
      "Simulation running… the gadgets are thinking.",
    ]));
  }
  if (!report) {
    panel.append(el("p", { class: "empty" }, ["Assign a wall sample to wake the gadgets."]));
    return panel;
  }
  const failing = new Set(model.failedGadgets);
  const [uLow, uHigh] = model.content.u_value_range;

  const coinByTier: Record<string, string> = {
    Cheap: "\u{1F7E2} green coins",
    Medium: "\u{1F7E1} gold coins",
    Expensive: "\u{1F534} red coins",
  };
  panel.append(
    gadgetCard("mold", report.mold, report.mold === "None", failing.has("mold")),
    gadgetCard(
      "u_value",
      `${report.u_value.toFixed(3)} W/(m²K)`,
      report.u_value_ok,
      failing.has("u_value"),
      `green range ${uLow}–${uHigh}`,
    ),
    gadgetCard(
      "cost",
      `${report.cost_per_m2.toFixed(0)} EUR/m²`,
      null,
      failing.has("cost"),
      coinByTier[report.cost_tier],
    ),
    gadgetCard("stability", report.stability, report.stability === "NoCracks",
               failing.has("stability")),
  );
  if (report.energy) {
    panel.append(
      gadgetCard(
        "rating",
        report.energy.rating,
        null,
        failing.has("rating"),
        `${report.energy.total.toFixed(1)} kWh/(m²a) ` +
          `(heat ${report.energy.heating.toFixed(1)}, cool ${report.energy.cooling.toFixed(1)})`,
      ),
    );
    const badge = panel.querySelector('[data-gadget="rating"]')!;
    badge.append(renderRatingRibbon(model, report.energy.rating));
  }
  return panel;
}

function renderRatingRibbon(model: ViewModel, active: string): HTMLElement {
  const ribbon = el("div", { class: "ribbon" });
  for (const [label] of model.content.rating_bands) {
    ribbon.append(
      el("span", { class: label === active ? "band active" : "band", "data-band": label }, [label]),
    );
  }
  return ribbon;
}

function renderFeedbackLog(model: ViewModel): HTMLElement {
  const log = el("footer", { class: "feedback", "data-feedback-count": String(model.feedback.length) });
  for (const item of model.feedback.slice().reverse()) {
    log.append(el("div", { class: `toast ${item.kind}` }, [item.text]));
  }
  return log;
}
