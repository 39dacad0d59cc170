// Scripted browser-style run against a live service: the full storyline
// (hints -> dials -> wall -> door) and a failing heavy-mold wall, all driven
// through the rendered DOM.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { ContentPackData } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const CONTENT = JSON.parse(
  readFileSync(join(here, "..", "content", "content_pack.json"), "utf-8"),
) as ContentPackData;

const PORT = 8914;
const BASE = `http://127.0.0.1:${PORT}`;
let server: ChildProcess;

async function until(check: () => boolean, what: string, timeoutMs = 15000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) return;
    await new Promise((resolve) => setTimeout(resolve, 15));
  }
  throw new Error(`timed out waiting for ${what}`);
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "enerscape.cli", "serve", "--port", String(PORT), "--data-dir",
     mkdtempSync(join(tmpdir(), "enerscape-ui-")), "--oracle"],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not come up");
});

afterAll(() => {
  server?.kill();
});

interface Driver {
  app: App;
  root: HTMLElement;
}

async function bootApp(seed: number): Promise<Driver> {
  const root = document.createElement("div");
  const app = new App(root, new ApiClient(BASE), CONTENT, { pollIntervalMs: 50 });
  await app.start("escape-room", seed);
  await until(() => app.model.state !== null, "initial state");
  return { app, root };
}

async function idle(driver: Driver): Promise<void> {
  await until(() => !driver.app.model.pendingAction, "action to settle");
}

function click(driver: Driver, selector: string): void {
  const node = driver.root.querySelector(selector) as HTMLElement | null;
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

async function clickAndSettle(driver: Driver, selector: string): Promise<void> {
  click(driver, selector);
  await idle(driver);
}

function searchAllZones(driver: Driver): void {
  for (const node of Array.from(driver.root.querySelectorAll("[data-zone]"))) {
    (node as HTMLElement).click();
  }
}

async function collectHint(driver: Driver, hintId: string): Promise<void> {
  searchAllZones(driver);
  await until(
    () => driver.root.querySelector(`[data-collect="${hintId}"]`) !== null,
    `hint ${hintId} to be discoverable`,
  );
  await clickAndSettle(driver, `[data-collect="${hintId}"]`);
}

async function setDial(driver: Driver, dial: string, value: string): Promise<void> {
  const select = driver.root.querySelector(`select[data-dial="${dial}"]`) as HTMLSelectElement;
  select.value = value;
  select.dispatchEvent(new Event("change"));
  await idle(driver);
}

async function buildWall(
  driver: Driver, layers: [material: string, thickness: number][],
): Promise<void> {
  for (let i = 0; i < layers.length; i++) {
    const [material, thickness] = layers[i];
    const palette = driver.root.querySelector("[data-palette]") as HTMLSelectElement;
    palette.value = material;
    const input = driver.root.querySelector('[data-input="thickness"]') as HTMLInputElement;
    input.value = String(thickness);
    await clickAndSettle(driver, '[data-action="spawn"]');
    const benchIndex = driver.app.model.state!.bench.spawned.length - 1;
    const position = driver.root.querySelector(
      `select[data-position-for="${benchIndex}"]`,
    ) as HTMLSelectElement;
    position.value = String(i);
    await clickAndSettle(driver, `[data-place="${benchIndex}"]`);
  }
  await clickAndSettle(driver, '[data-action="create-sample"]');
  await clickAndSettle(driver, '[data-action="assign-sample"]');
  await until(
    () =>
      driver.app.model.state!.last_gadgets?.energy != null &&
      !driver.app.model.state!.simulation_pending,
    "simulation to complete",
  );
}

async function playUpToWallQuest(driver: Driver): Promise<void> {
  await collectHint(driver, "h_welcome");
  await clickAndSettle(driver, '[data-project="h_welcome"]');
  await clickAndSettle(driver, '[data-action="play-cassette"]');
  expect(driver.root.querySelector("[data-transcript]")).not.toBeNull();

  await collectHint(driver, "h_orientation_map");
  await setDial(driver, "orientation", "S");
  await until(() => driver.app.model.state!.locks_unlocked === 1, "first lock");

  await collectHint(driver, "h_calendar");
  await collectHint(driver, "h_sundial");
  await setDial(driver, "month", "6");
  await setDial(driver, "hour", "14");
  await until(() => driver.app.model.state!.locks_unlocked === 2, "second lock");

  await collectHint(driver, "h_postcard");
  await setDial(driver, "location", "Graz");
  await until(() => driver.app.model.state!.locks_unlocked === 3, "third lock");

  await collectHint(driver, "h_wall_order");
  await collectHint(driver, "h_wall_materials");
  await collectHint(driver, "h_wall_energy");
}

describe("browser client against a live service", () => {
  it("completes the full storyline: hints, dials, wall, door", async () => {
    const driver = await bootApp(3);
    expect(driver.root.querySelector("[data-door]")!.getAttribute("data-door")).toBe("false");

    await playUpToWallQuest(driver);

    await buildWall(driver, [
      ["interior_plaster", 0.015],
      ["brick_masonry", 0.25],
      ["eps_board", 0.16],
      ["exterior_render", 0.004],
    ]);
    await until(() => driver.app.model.state!.locks_unlocked === 4, "fourth lock");
    // the final fanfare batch may still be a poll behind the state snapshot
    await until(
      () => driver.root.querySelector(".sweep")?.getAttribute("data-sweeps") === "4",
      "day/night sweep to render",
    );
    const rating = driver.root.querySelector('[data-gadget="rating"]');
    expect(rating?.textContent).toContain("A+");

    await clickAndSettle(driver, '[data-action="try-door"]');
    await until(
      () => driver.root.querySelector("[data-door]")!.getAttribute("data-door") === "true",
      "door to open",
    );
    driver.app.stop();
  });

  it("shows a failing heavy-mold wall with the failing gadget named", async () => {
    const driver = await bootApp(11);
    await playUpToWallQuest(driver);

    // the classic mistake: an unfilled cavity instead of real insulation
    await buildWall(driver, [
      ["interior_plaster", 0.005],
      ["reinforced_concrete", 0.16],
      ["air_cavity", 0.02],
      ["exterior_render", 0.003],
    ]);
    await until(
      () => driver.app.model.failedGadgets.includes("mold"),
      "failing-gadget feedback to arrive",
    );
    await until(
      () =>
        driver.root
          .querySelector('[data-gadget="mold"]')
          ?.className.includes("failing") ?? false,
      "mold gadget to render as failing",
    );
    const mold = driver.root.querySelector('[data-gadget="mold"]')!;
    expect(mold.querySelector('[data-gadget-value="mold"]')!.textContent).toBe("Heavy");
    const toasts = driver.root.querySelector("footer.feedback")!.textContent!;
    expect(toasts).toContain("mold");
    expect(driver.app.model.state!.locks_unlocked).toBe(3);

    await clickAndSettle(driver, '[data-action="try-door"]');
    expect(driver.root.querySelector("[data-door]")!.getAttribute("data-door")).toBe("false");
    driver.app.stop();
  }, 40000);

  it("standalone state view redacts unspawned hints", async () => {
    const driver = await bootApp(5);
    expect(driver.app.model.state!.hints.map((h) => h.id)).toEqual(["h_welcome"]);
    expect(driver.app.model.state!.inactive_quests).toBe(5);
    driver.app.stop();
  });
});
