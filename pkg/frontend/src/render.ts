// Canvas painting for the feed view. Pixels come from the service as-is;
// the only client-side choice is both-halves vs one enlarged half.

import { VideoFrame } from "./envelope.js";

export type ViewMode = "sbs" | "left";

export class FeedRenderer {
  private ctx: CanvasRenderingContext2D;
  private rgba: ImageData | null = null;
  private scratch: HTMLCanvasElement;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas not available");
    this.ctx = ctx;
    this.scratch = document.createElement("canvas");
  }

  draw(frame: VideoFrame, view: ViewMode): void {
    if (
      !this.rgba ||
      this.rgba.width !== frame.width ||
      this.rgba.height !== frame.height
    ) {
      this.rgba = new ImageData(frame.width, frame.height);
      this.scratch.width = frame.width;
      this.scratch.height = frame.height;
    }
    const dst = this.rgba.data;
    const src = frame.pixels;
    const n = frame.width * frame.height;
    if (frame.channels === 1) {
      for (let i = 0; i < n; i++) {
        const v = src[i];
        dst[4 * i] = v;
        dst[4 * i + 1] = v;
        dst[4 * i + 2] = v;
        dst[4 * i + 3] = 255;
      }
    } else {
      for (let i = 0; i < n; i++) {
        dst[4 * i] = src[3 * i];
        dst[4 * i + 1] = src[3 * i + 1];
        dst[4 * i + 2] = src[3 * i + 2];
        dst[4 * i + 3] = 255;
      }
    }
    const sctx = this.scratch.getContext("2d")!;
    sctx.putImageData(this.rgba, 0, 0);
    const half = Math.floor(frame.width / 2);
    if (view === "left") {
      this.ctx.drawImage(
        this.scratch,
        0, 0, half, frame.height,
        0, 0, this.canvas.width, this.canvas.height,
      );
    } else {
      this.ctx.drawImage(
        this.scratch,
        0, 0, frame.width, frame.height,
        0, 0, this.canvas.width, this.canvas.height,
      );
    }
  }
}
