import { CanvasStrokeBuffer, type Stroke } from "./buffer.js";
import { PredictClient } from "./client.js";
import { DemoController, type DemoState } from "./controller.js";

const DEFAULT_API = "http://127.0.0.1:8765";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? DEFAULT_API;
}

const canvas = document.getElementById("draw") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const submitBtn = document.getElementById("submit") as HTMLButtonElement;
const undoBtn = document.getElementById("undo") as HTMLButtonElement;
const clearBtn = document.getElementById("clear") as HTMLButtonElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const results = document.getElementById("results") as HTMLOListElement;

const buffer = new CanvasStrokeBuffer();
const controller = new DemoController(buffer, new PredictClient(apiBase()), render);

function drawStroke(s: Stroke): void {
  if (s.length === 0) return;
  ctx.beginPath();
  ctx.moveTo(s[0]![0], s[0]![1]);
  for (let i = 1; i < s.length; i++) ctx.lineTo(s[i]![0], s[i]![1]);
  ctx.stroke();
  if (s.length === 1) {
    // a click without movement still deserves visible ink
    ctx.beginPath();
    ctx.arc(s[0]![0], s[0]![1], ctx.lineWidth / 2, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function redraw(): void {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 3;
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  ctx.strokeStyle = "#1a1a1a";
  ctx.fillStyle = "#1a1a1a";
  for (const s of buffer.strokes()) drawStroke(s);
  const active = buffer.active;
  if (active) drawStroke(active);
  submitBtn.disabled = !controller.canSubmit();
  undoBtn.disabled = buffer.isEmpty();
}

function render(state: DemoState): void {
  banner.hidden = state.kind !== "error" && state.kind !== "busy";
  banner.className = state.kind;
  if (state.kind === "busy") banner.textContent = "predicting…";
  if (state.kind === "error") banner.textContent = state.message;
  results.replaceChildren();
  if (state.kind === "predictions") {
    for (const p of state.predictions) {
      const li = document.createElement("li");
      li.textContent = `${p.label} (${p.votes} votes)`;
      results.append(li);
    }
  }
  redraw();
}

canvas.addEventListener("pointerdown", (e) => {
  canvas.setPointerCapture(e.pointerId);
  buffer.pointerDown(e.offsetX, e.offsetY);
  redraw();
});

canvas.addEventListener("pointermove", (e) => {
  if (buffer.active === null) return;
  buffer.pointerMove(e.offsetX, e.offsetY);
  redraw();
});

canvas.addEventListener("pointerup", (e) => {
  canvas.releasePointerCapture(e.pointerId);
  buffer.pointerUp();
  redraw();
});

submitBtn.addEventListener("click", () => void controller.submit());
undoBtn.addEventListener("click", () => controller.undo());
clearBtn.addEventListener("click", () => controller.clear());

redraw();
