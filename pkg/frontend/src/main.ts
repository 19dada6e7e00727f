// Application wiring. Two routes share one page: the participant
// workbench (default) and the experimenter console (#/console).

import { ApiClient } from "./api.js";
import { canSend, countContentTokens, ensureTerminated } from "./composer.js";
import { ExperimenterConsole } from "./console.js";
import { drawStrokes, OrbitCamera } from "./render.js";
import { CanvasState } from "./strokes.js";
import { SessionStore } from "./session.js";
import { DictionaryDoc, PALETTE, SessionState } from "./types.js";

const CANVAS_SIZE = 420;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const store = new SessionStore(api);
  const dictionary: DictionaryDoc = await api.getDictionary();
  const canvasState = new CanvasState();
  const camera: OrbitCamera = { azimuthDeg: 20, elevationDeg: 25, halfExtent: 1.5 };
  const isConsole = location.hash === "#/console";

  const canvas = el<HTMLCanvasElement>("sketch-canvas");
  canvas.width = canvas.height = CANVAS_SIZE;
  const ctx = canvas.getContext("2d")!;
  const statusLine = el<HTMLDivElement>("status");
  const timer = el<HTMLSpanElement>("timer");
  const panel = el<HTMLDivElement>("results");
  const targetImg = el<HTMLImageElement>("target-img");
  const currentImg = el<HTMLImageElement>("current-img");
  const voiceInput = el<HTMLInputElement>("voice-text");
  const tokenCounter = el<HTMLSpanElement>("token-counter");
  const sendVoice = el<HTMLButtonElement>("send-voice");
  const sendSketch = el<HTMLButtonElement>("send-sketch");
  const includeModel = el<HTMLInputElement>("include-model");
  const consoleBox = el<HTMLDivElement>("console-box");
  consoleBox.style.display = isConsole ? "block" : "none";

  const palette = el<HTMLDivElement>("palette");
  for (const entry of PALETTE) {
    const swatch = document.createElement("button");
    swatch.className = "swatch";
    swatch.style.background = entry.css;
    swatch.title = entry.name;
    swatch.onclick = () => {
      canvasState.activeColor = entry.code;
    };
    palette.appendChild(swatch);
  }

  // draw-plane controls: orbit view follows the plane so drawing is WYSIWYG
  el<HTMLInputElement>("plane-azimuth").oninput = (event) => {
    const deg = Number((event.target as HTMLInputElement).value);
    canvasState.plane.azimuthDeg = deg;
    camera.azimuthDeg = deg;
    repaint();
  };
  el<HTMLInputElement>("plane-offset").oninput = (event) => {
    canvasState.plane.offset = Number((event.target as HTMLInputElement).value);
  };

  const toPlane = (event: MouseEvent): [number, number] => {
    const rect = canvas.getBoundingClientRect();
    const u = ((event.clientX - rect.left) / rect.width) * 3 - 1.5;
    const v = 1.5 - ((event.clientY - rect.top) / rect.height) * 3;
    return [u, v];
  };
  let drawing = false;
  canvas.onmousedown = (event) => {
    drawing = true;
    canvasState.beginStroke(...toPlane(event));
  };
  canvas.onmousemove = (event) => {
    if (drawing) {
      canvasState.extendStroke(...toPlane(event));
      repaint();
    }
  };
  const finish = () => {
    if (drawing) {
      drawing = false;
      canvasState.endStroke();
      repaint();
    }
  };
  canvas.onmouseup = finish;
  canvas.onmouseleave = finish;
  el<HTMLButtonElement>("undo-stroke").onclick = () => {
    canvasState.undo();
    repaint();
  };
  el<HTMLButtonElement>("clear-strokes").onclick = () => {
    canvasState.clear();
    repaint();
  };

  function repaint(): void {
    drawStrokes(ctx, camera, canvasState.strokes, CANVAS_SIZE);
  }

  function render(state: SessionState): void {
    timer.textContent = `${Math.max(0, Math.floor(state.remaining_budget_s))}s`;
    statusLine.textContent =
      state.state === "active"
        ? state.in_flight
          ? "pick one of the five chairs"
          : "compose a query"
        : `session ${state.state}`;
    statusLine.className = state.state;
    targetImg.src = state.target_snapshot_urls[1];
    currentImg.src = state.current_snapshot_urls[1];

    const counted = countContentTokens(voiceInput.value, dictionary, state.n_gram);
    tokenCounter.textContent = `${counted.contentTokens}/${state.n_gram}`;
    tokenCounter.className = counted.overLimit ? "over" : "";
    const active = state.state === "active" && state.remaining_budget_s > 0;
    sendVoice.disabled =
      !active || state.in_flight || state.mode === "sketch" ||
      !canSend(voiceInput.value, dictionary, state.n_gram, state.in_flight,
               state.remaining_budget_s);
    sendSketch.disabled = !active || state.in_flight || state.mode === "voice";

    panel.innerHTML = "";
    state.results.forEach((entry, rank) => {
      const card = document.createElement("button");
      card.className = "result-card";
      const img = document.createElement("img");
      img.src = entry.snapshot_urls[1];
      card.appendChild(img);
      const label = document.createElement("div");
      label.textContent = `#${rank} · d=${entry.distance.toFixed(3)}`;
      card.appendChild(label);
      card.disabled = !state.in_flight;
      card.onclick = () => {
        store.select(rank).catch(showError);
      };
      panel.appendChild(card);
    });
  }

  function showError(err: unknown): void {
    statusLine.textContent = String(err instanceof Error ? err.message : err);
    statusLine.className = "error";
  }

  voiceInput.oninput = () => {
    if (store.state) render(store.state);
  };
  sendVoice.onclick = () => {
    const text = ensureTerminated(voiceInput.value, dictionary.terminator);
    store
      .submitVoice(text)
      .then(() => {
        voiceInput.value = "";
      })
      .catch(showError);
  };
  sendSketch.onclick = () => {
    store.submitSketch(canvasState.strokes, includeModel.checked).catch(showError);
  };

  store.onChange(render);
  const params = new URLSearchParams(location.search);
  const mode = params.get("mode") ?? "hybrid";
  await store.create({ mode, random_target: true });
  store.startPolling();
  repaint();

  if (isConsole) {
    const wizard = new ExperimenterConsole(api, store.sessionId);
    const grid = el<HTMLDivElement>("concept-grid");
    dictionary.concepts.forEach((concept) => {
      const row = document.createElement("div");
      row.className = "concept-row";
      const minus = document.createElement("button");
      minus.textContent = "−";
      minus.onclick = () => wizard.stepConcept(concept.id, -1).then(render, showError);
      const plus = document.createElement("button");
      plus.textContent = "+";
      plus.onclick = () => wizard.stepConcept(concept.id, 1).then(render, showError);
      const name = document.createElement("span");
      name.textContent = concept.canonical;
      row.append(minus, name, plus);
      grid.appendChild(row);
    });
    el<HTMLButtonElement>("wizard-reset").onclick = () =>
      wizard.reset().then(render, showError);
    el<HTMLButtonElement>("wizard-sync").onclick = () =>
      wizard.syncToCurrent().then(render, showError);
    el<HTMLButtonElement>("wizard-send").onclick = () =>
      wizard.sendDescriptor().then(render, showError);
  }
}

boot().catch((err) => {
  document.body.textContent = `failed to start: ${err}`;
});
