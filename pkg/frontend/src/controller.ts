import type { CanvasStrokeBuffer } from "./buffer.js";
import {
  PredictClient,
  SupersededError,
  errorMessage,
  type Prediction,
} from "./client.js";

export type DemoState =
  | { kind: "idle" }
  | { kind: "busy" }
  | { kind: "error"; message: string }
  | { kind: "predictions"; predictions: Prediction[] };

/**
 * Glue between the stroke buffer and the predict client. Owns the
 * banner/result state the UI renders; on any failure the buffer is left
 * untouched so the user can retry or keep drawing.
 */
export class DemoController {
  state: DemoState = { kind: "idle" };

  constructor(
    readonly buffer: CanvasStrokeBuffer,
    private client: PredictClient,
    private onChange: (state: DemoState) => void = () => {},
  ) {}

  canSubmit(): boolean {
    return !this.buffer.isEmpty();
  }

  async submit(topK = 5): Promise<void> {
    if (!this.canSubmit()) return;
    this.setState({ kind: "busy" });
    try {
      const res = await this.client.predict(this.buffer.strokes(), topK);
      this.setState({ kind: "predictions", predictions: res.predictions });
    } catch (e) {
      if (e instanceof SupersededError) return; // the newer submit owns the state
      this.setState({ kind: "error", message: errorMessage(e) });
    }
  }

  clear(): void {
    this.buffer.clear();
    this.setState({ kind: "idle" });
  }

  undo(): void {
    this.buffer.undoLastStroke();
    if (this.buffer.isEmpty()) this.setState({ kind: "idle" });
  }

  private setState(state: DemoState): void {
    this.state = state;
    this.onChange(state);
  }
}
