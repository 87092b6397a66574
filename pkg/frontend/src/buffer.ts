export type Point = [number, number];
export type Stroke = Point[];

/**
 * Stroke capture model for the canvas: points accumulate only between
 * pointer-down and pointer-up, and pointer-up closes the stroke. Keeps
 * raw pixel coordinates; the server pipeline owns all normalization.
 */
export class CanvasStrokeBuffer {
  private closed: Stroke[] = [];
  private current: Stroke | null = null;

  pointerDown(x: number, y: number): void {
    // a missed pointer-up (pointer left the window) must not lose ink
    if (this.current) this.pointerUp();
    this.current = [[x, y]];
  }

  pointerMove(x: number, y: number): void {
    if (!this.current) return;
    this.current.push([x, y]);
  }

  pointerUp(): void {
    if (!this.current) return;
    this.closed.push(this.current);
    this.current = null;
  }

  /** The in-progress stroke, or null when the pointer is up. */
  get active(): Stroke | null {
    return this.current ? this.current.map((p): Point => [p[0], p[1]]) : null;
  }

  /** Closed strokes only, as a defensive copy. */
  strokes(): Stroke[] {
    return this.closed.map((s) => s.map((p): Point => [p[0], p[1]]));
  }

  isEmpty(): boolean {
    return this.closed.length === 0;
  }

  clear(): void {
    this.closed = [];
    this.current = null;
  }

  undoLastStroke(): void {
    this.closed.pop();
  }
}
