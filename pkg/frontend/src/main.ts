// Entry point: pick the document from ?doc=, or list what the server has.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  const api = new ApiClient("");
  const params = new URLSearchParams(window.location.search);
  const docId = params.get("doc");
  const language = params.get("lang");

  if (docId) {
    const app = new App(root, api);
    try {
      await app.start(docId, language);
    } catch (error) {
      root.textContent = `Could not start ${docId}: ${error}`;
    }
    return;
  }

  const simulations = await api.listSimulations();
  const heading = document.createElement("h1");
  heading.textContent = "Simulations";
  root.appendChild(heading);
  const list = document.createElement("ul");
  for (const sim of simulations) {
    const item = document.createElement("li");
    const link = document.createElement("a");
    link.href = `?doc=${encodeURIComponent(sim.docId)}`;
    link.textContent = sim.title;
    item.appendChild(link);
    if (sim.keywords.length) {
      item.appendChild(
        document.createTextNode(` — ${sim.keywords.join(", ")}`),
      );
    }
    list.appendChild(item);
  }
  root.appendChild(list);
}

void boot();
