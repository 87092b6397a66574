import { describe, expect, it } from "vitest";

import { CanvasStrokeBuffer } from "../src/buffer.js";
import { PredictClient } from "../src/client.js";
import { DemoController, type DemoState } from "../src/controller.js";

function drawSomething(b: CanvasStrokeBuffer): void {
  b.pointerDown(10, 10);
  b.pointerMove(20, 30);
  b.pointerUp();
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function makeController(fetchFn: (url: string, init?: RequestInit) => Promise<Response>) {
  const buffer = new CanvasStrokeBuffer();
  const states: DemoState[] = [];
  const controller = new DemoController(
    buffer,
    new PredictClient("http://host:1", fetchFn),
    (s) => states.push(s),
  );
  return { buffer, controller, states };
}

describe("DemoController", () => {
  it("refuses to submit an empty buffer", async () => {
    let called = false;
    const { controller, states } = makeController(async () => {
      called = true;
      return jsonResponse(200, {});
    });
    expect(controller.canSubmit()).toBe(false);
    await controller.submit();
    expect(called).toBe(false);
    expect(states).toEqual([]);
  });

  it("shows busy then the ranked predictions on success", async () => {
    const body = {
      schema_version: 1,
      predictions: [
        { class_id: 2, label: "2", votes: 3 },
        { class_id: 1, label: "1", votes: 2 },
      ],
      feature_dim: 722,
    };
    const { buffer, controller, states } = makeController(async () =>
      jsonResponse(200, body),
    );
    drawSomething(buffer);
    await controller.submit();
    expect(states.map((s) => s.kind)).toEqual(["busy", "predictions"]);
    expect(controller.state).toEqual({ kind: "predictions", predictions: body.predictions });
  });

  it("surfaces a 400 as an error banner and preserves the buffer", async () => {
    const { buffer, controller } = makeController(async () =>
      jsonResponse(400, { schema_version: 1, error: "stroke 0 point 1 must be [x, y] numbers" }),
    );
    drawSomething(buffer);
    const before = buffer.strokes();
    await controller.submit();
    expect(controller.state.kind).toBe("error");
    if (controller.state.kind === "error") {
      expect(controller.state.message).toContain("must be [x, y] numbers");
    }
    expect(buffer.strokes()).toEqual(before);
  });

  it("keeps the buffer and reports the failure when the server is down", async () => {
    const { buffer, controller } = makeController(async () => {
      throw new TypeError("fetch failed");
    });
    drawSomething(buffer);
    await controller.submit();
    expect(controller.state).toEqual({ kind: "error", message: "fetch failed" });
    expect(buffer.isEmpty()).toBe(false);
  });

  it("recovers from an error on the next successful submit", async () => {
    let calls = 0;
    const { buffer, controller } = makeController(async () => {
      calls += 1;
      if (calls === 1) return jsonResponse(500, { schema_version: 1, error: "internal error" });
      return jsonResponse(200, { schema_version: 1, predictions: [], feature_dim: 722 });
    });
    drawSomething(buffer);
    await controller.submit();
    expect(controller.state.kind).toBe("error");
    await controller.submit();
    expect(controller.state.kind).toBe("predictions");
  });

  it("lets the newest of overlapping submits own the final state", async () => {
    const gates: (() => void)[] = [];
    const { buffer, controller } = makeController(async () => {
      await new Promise<void>((resolve) => gates.push(resolve));
      return jsonResponse(200, { schema_version: 1, predictions: [], feature_dim: 722 });
    });
    drawSomething(buffer);
    const a = controller.submit();
    const b = controller.submit(); // queued behind a
    const c = controller.submit(); // replaces b; b's rejection is swallowed
    gates[0]!();
    await a;
    await b;
    await new Promise((r) => setTimeout(r, 0));
    gates[1]!();
    await c;
    expect(controller.state.kind).toBe("predictions");
    expect(gates.length).toBe(2);
  });

  it("clear and undo reset the banner when the buffer empties", async () => {
    const { buffer, controller } = makeController(async () =>
      jsonResponse(200, { schema_version: 1, predictions: [], feature_dim: 722 }),
    );
    drawSomething(buffer);
    await controller.submit();
    controller.undo();
    expect(controller.state.kind).toBe("idle");
    drawSomething(buffer);
    controller.clear();
    expect(controller.state.kind).toBe("idle");
    expect(buffer.isEmpty()).toBe(true);
  });
});
