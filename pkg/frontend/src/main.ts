// Browser entry point. Query parameters pick the service and scenario:
//   index.html?service=http://127.0.0.1:8000&scenario=escape-room&seed=1

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import type { ContentPackData } from "./types.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const service = params.get("service") ?? "http://127.0.0.1:8000";
  const scenario = params.get("scenario") ?? "escape-room";
  const seed = Number(params.get("seed") ?? "0");

  const content = (await (await fetch("../content/content_pack.json")).json()) as ContentPackData;
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new App(root, new ApiClient(service), content);
  await app.start(scenario, seed);
}

void boot().catch((error) => {
  const root = document.getElementById("app");
  if (root) {
    root.textContent = `Failed to start: ${error}`;
  }
});
