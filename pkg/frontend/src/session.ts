// Operator session state: everything displayable comes straight from the
// service's messages; the console never recomputes verdicts client-side.

import {
  Detections,
  DetectionRecord,
  Envelope,
  EnvelopeStream,
  MSG_CONTROL,
  MSG_DETECTIONS,
  MSG_HEAD_POSE,
  MSG_HEARTBEAT,
  MSG_STATUS,
  MSG_VIDEO_FRAME,
  Status,
  VideoFrame,
  decodeDetections,
  decodeStatus,
  decodeVideoFrame,
  encodeDrive,
  encodeEStop,
  encodeEnvelope,
  encodeHeadPose,
  encodeModeSwitch,
} from "./envelope.js";

export const LABELS = [
  "no_weapon",
  "assault_rifle",
  "revolver",
  "pistol",
  "shotgun",
  "submachine_gun",
  "sniper_rifle",
  "machine_gun",
];

export const STALE_AFTER_MS = 2000;
export const SEND_MIN_INTERVAL_MS = 20; // 50 Hz cap
// keepalive at 40 ms so a 20 ms UI timer still lands above the 20 Hz floor
export const SEND_MAX_INTERVAL_MS = 40;
export const CONTROL_QUEUE_TTL_MS = 1000;
export const PAN_LIMIT = 90;
export const TILT_LIMIT = 45;

export interface PanelRow {
  label: string;
  percentText: string;
  color: string;
}

export interface LinkStats {
  fps: number;
  latencyMs: number;
  drops: number;
  clientDrops: number;
}

export interface Transport {
  send(data: Uint8Array): void;
  readonly connected: boolean;
}

type NoticeFn = (text: string) => void;

export class ConsoleSession {
  private stream = new EnvelopeStream();
  private seqByType = new Map<number, number>();
  private pendingFrame: VideoFrame | null = null;
  private lastFrameAt = -Infinity;
  private lastFrameSeq: number | null = null;
  private frameIntervalMs = 0;
  private queuedControl: { data: Uint8Array; at: number }[] = [];

  detections: PanelRow[] = [];
  detectionsFrameSeq: number | null = null;
  lastDetections: Detections | null = null;
  status: Status | null = null;
  driveLocked = false;
  stats: LinkStats = { fps: 0, latencyMs: 0, drops: 0, clientDrops: 0 };

  // head-pose input state
  private rawPitch = 0;
  private rawYaw = 0;
  private zeroPitch = 0;
  private zeroYaw = 0;
  private calibrated = false;
  private lastPoseSentAt = -Infinity;
  private lastSentPose: { pitch: number; yaw: number } | null = null;
  private poseSeq = 0;

  constructor(
    private transport: Transport,
    private notice: NoticeFn = () => {},
  ) {}

  private nextSeq(msgType: number): number {
    const seq = this.seqByType.get(msgType) ?? 0;
    this.seqByType.set(msgType, (seq + 1) >>> 0);
    return seq;
  }

  /** Feed raw bytes from the transport. */
  handleData(data: Uint8Array, now: number): void {
    for (const env of this.stream.feed(data)) {
      this.ingest(env, now);
    }
  }

  ingest(env: Envelope, now: number): void {
    switch (env.msgType) {
      case MSG_VIDEO_FRAME: {
        if (this.pendingFrame !== null) this.stats.clientDrops++;
        this.pendingFrame = decodeVideoFrame(env.payload);
        if (this.lastFrameSeq !== null) {
          const expected = (this.lastFrameSeq + 1) >>> 0;
          if (env.sequence !== expected) {
            this.stats.drops += (env.sequence - expected) >>> 0;
          }
          const dt = now - this.lastFrameAt;
          this.frameIntervalMs = this.frameIntervalMs
            ? 0.8 * this.frameIntervalMs + 0.2 * dt
            : dt;
          this.stats.fps = this.frameIntervalMs > 0 ? 1000 / this.frameIntervalMs : 0;
        }
        this.lastFrameSeq = env.sequence;
        this.lastFrameAt = now;
        break;
      }
      case MSG_DETECTIONS: {
        const dets = decodeDetections(env.payload);
        this.lastDetections = dets;
        this.detectionsFrameSeq = dets.frameSeq;
        this.detections = dets.items.map((rec) => panelRow(rec));
        break;
      }
      case MSG_STATUS:
        this.status = decodeStatus(env.payload);
        break;
      case MSG_HEARTBEAT:
        break;
      default:
        break; // console never acts on robot-bound types
    }
  }

  /** One pending frame, latest wins; returns and clears it. */
  takePendingFrame(): VideoFrame | null {
    const frame = this.pendingFrame;
    this.pendingFrame = null;
    return frame;
  }

  isStale(now: number): boolean {
    return now - this.lastFrameAt > STALE_AFTER_MS;
  }

  latency(now: number): number {
    return this.lastFrameAt === -Infinity ? -1 : now - this.lastFrameAt;
  }

  get mode(): number | null {
    return this.status ? this.status.mode : null;
  }

  // --- control plane ---

  private sendControl(payload: Uint8Array, now: number): void {
    const wire = encodeEnvelope(MSG_CONTROL, payload, this.nextSeq(MSG_CONTROL));
    if (this.transport.connected) {
      this.transport.send(wire);
    } else {
      this.queuedControl.push({ data: wire, at: now });
      this.notice("link down: control action queued");
    }
  }

  /** Re-clicking the active mode emits nothing. */
  requestModeSwitch(mode: number, now: number): boolean {
    if (this.status !== null && this.status.mode === mode) return false;
    this.sendControl(encodeModeSwitch(mode), now);
    return true;
  }

  drive(left: number, right: number, now: number): boolean {
    if (this.driveLocked) return false;
    this.sendControl(encodeDrive(left, right), now);
    return true;
  }

  eStop(now: number): void {
    this.sendControl(encodeEStop(), now);
    this.driveLocked = true;
  }

  /** Explicit release: zero drive unlatches the robot and the UI. */
  releaseDrive(now: number): void {
    this.sendControl(encodeDrive(0, 0), now);
    this.driveLocked = false;
  }

  // --- head-pose input ---

  setOrientationInput(pitchDeg: number, yawDeg: number): void {
    this.rawPitch = pitchDeg;
    this.rawYaw = yawDeg;
  }

  /** Zero the current orientation, mirroring operator calibration. */
  calibrate(): void {
    this.zeroPitch = this.rawPitch;
    this.zeroYaw = this.rawYaw;
    this.calibrated = true;
  }

  get isCalibrated(): boolean {
    return this.calibrated;
  }

  currentPose(): { pitch: number; yaw: number } {
    const clamp = (v: number, lim: number) => Math.max(-lim, Math.min(lim, v));
    const q = (v: number) => Math.round(v * 100) / 100; // 0.01 degree grid
    return {
      pitch: q(clamp(this.rawPitch - this.zeroPitch, TILT_LIMIT)),
      yaw: q(clamp(this.rawYaw - this.zeroYaw, PAN_LIMIT)),
    };
  }

  /**
   * Drive periodic work: head-pose emission between 20 and 50 Hz and
   * expiry of stale queued control actions. Call often (UI timer/test).
   */
  tick(now: number): void {
    // flush or expire queued control actions
    if (this.queuedControl.length) {
      if (this.transport.connected) {
        for (const item of this.queuedControl) this.transport.send(item.data);
        this.queuedControl = [];
      } else {
        const keep = this.queuedControl.filter((i) => now - i.at <= CONTROL_QUEUE_TTL_MS);
        if (keep.length < this.queuedControl.length) {
          this.notice("link down over 1 s: control action discarded");
        }
        this.queuedControl = keep;
      }
    }

    if (!this.calibrated || !this.transport.connected) return;
    const sinceLast = now - this.lastPoseSentAt;
    if (sinceLast < SEND_MIN_INTERVAL_MS) return; // never above 50 Hz
    const pose = this.currentPose();
    const changed =
      !this.lastSentPose ||
      pose.pitch !== this.lastSentPose.pitch ||
      pose.yaw !== this.lastSentPose.yaw;
    if (!changed && sinceLast < SEND_MAX_INTERVAL_MS) return; // keepalive at 20 Hz
    const payload = encodeHeadPose(pose.pitch, pose.yaw, this.poseSeq++);
    this.transport.send(
      encodeEnvelope(MSG_HEAD_POSE, payload, this.nextSeq(MSG_HEAD_POSE)),
    );
    this.lastPoseSentAt = now;
    this.lastSentPose = pose;
  }

  queuedControlCount(): number {
    return this.queuedControl.length;
  }
}

export function panelRow(rec: DetectionRecord): PanelRow {
  const label = rec.labelIndex === 255 ? "unknown" : LABELS[rec.labelIndex] ?? "unknown";
  // the percent string is the payload value verbatim, never recomputed
  return { label, percentText: `${rec.percent}%`, color: rec.color };
}
