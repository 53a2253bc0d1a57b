// TSP1 envelope codec, mirroring docs/protocol.md byte for byte.
// All integers big-endian; CRC32 (IEEE) covers header-after-magic + payload.

export const MSG_VIDEO_FRAME = 0x01;
export const MSG_DETECTIONS = 0x02;
export const MSG_CONTROL = 0x03;
export const MSG_HEAD_POSE = 0x04;
export const MSG_HEARTBEAT = 0x05;
export const MSG_STATUS = 0x06;

const KNOWN_TYPES = new Set([1, 2, 3, 4, 5, 6]);
const HEADER_SIZE = 22;
const MAX_PAYLOAD = 16 * 1024 * 1024;
const MAGIC = 0x54535031; // "TSP1"

const CRC_TABLE = new Uint32Array(256);
for (let n = 0; n < 256; n++) {
  let c = n;
  for (let k = 0; k < 8; k++) {
    c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
  }
  CRC_TABLE[n] = c >>> 0;
}

export function crc32(data: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < data.length; i++) {
    c = CRC_TABLE[(c ^ data[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

export interface Envelope {
  msgType: number;
  sequence: number;
  timestampUs: number;
  flags: number;
  payload: Uint8Array;
}

export class EnvelopeError extends Error {
  constructor(message: string, readonly offset: number) {
    super(`offset ${offset}: ${message}`);
  }
}

export function encodeEnvelope(
  msgType: number,
  payload: Uint8Array,
  sequence = 0,
  timestampUs = 0,
): Uint8Array {
  if (!KNOWN_TYPES.has(msgType)) throw new Error(`unknown message type ${msgType}`);
  const out = new Uint8Array(HEADER_SIZE + payload.length + 4);
  const view = new DataView(out.buffer);
  view.setUint32(0, MAGIC);
  view.setUint8(4, msgType);
  view.setUint8(5, 0);
  view.setUint32(6, sequence >>> 0);
  // timestamps fit in a double up to 2^53 microseconds; split manually
  view.setUint32(10, Math.floor(timestampUs / 0x100000000));
  view.setUint32(14, timestampUs >>> 0);
  view.setUint32(18, payload.length);
  out.set(payload, HEADER_SIZE);
  const crc = crc32(out.subarray(4, HEADER_SIZE + payload.length));
  view.setUint32(HEADER_SIZE + payload.length, crc);
  return out;
}

/** Decode one envelope from the head of data; null when more bytes are needed. */
export function decodeEnvelope(data: Uint8Array): { env: Envelope; used: number } | null {
  if (data.length < HEADER_SIZE) return null;
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  if (view.getUint32(0) !== MAGIC) throw new EnvelopeError("bad magic", 0);
  const msgType = view.getUint8(4);
  if (!KNOWN_TYPES.has(msgType)) throw new EnvelopeError(`unknown type ${msgType}`, 4);
  const payloadLen = view.getUint32(18);
  if (payloadLen > MAX_PAYLOAD) throw new EnvelopeError("payload too large", 18);
  const total = HEADER_SIZE + payloadLen + 4;
  if (data.length < total) return null;
  const stored = view.getUint32(HEADER_SIZE + payloadLen);
  const actual = crc32(data.subarray(4, HEADER_SIZE + payloadLen));
  if (stored !== actual) throw new EnvelopeError("crc mismatch", HEADER_SIZE + payloadLen);
  return {
    env: {
      msgType,
      flags: view.getUint8(5),
      sequence: view.getUint32(6),
      timestampUs: view.getUint32(10) * 0x100000000 + view.getUint32(14),
      payload: data.slice(HEADER_SIZE, HEADER_SIZE + payloadLen),
    },
    used: total,
  };
}

/**
 * Incremental decoder over a byte stream; corrupt data throws. Chunks are
 * kept in a list and concatenated once per complete envelope, so feeding a
 * multi-megabyte video envelope in small chunks stays linear.
 */
export class EnvelopeStream {
  private chunks: Uint8Array[] = [];
  private size = 0;

  private peek(n: number): Uint8Array {
    const out = new Uint8Array(n);
    let pos = 0;
    for (const chunk of this.chunks) {
      if (pos >= n) break;
      const take = Math.min(chunk.length, n - pos);
      out.set(chunk.subarray(0, take), pos);
      pos += take;
    }
    return out;
  }

  private take(n: number): Uint8Array {
    const out = new Uint8Array(n);
    let pos = 0;
    while (pos < n) {
      const chunk = this.chunks[0];
      const take = Math.min(chunk.length, n - pos);
      out.set(chunk.subarray(0, take), pos);
      pos += take;
      if (take === chunk.length) {
        this.chunks.shift();
      } else {
        this.chunks[0] = chunk.subarray(take);
      }
    }
    this.size -= n;
    return out;
  }

  feed(data: Uint8Array): Envelope[] {
    if (data.length) {
      this.chunks.push(data);
      this.size += data.length;
    }
    const out: Envelope[] = [];
    for (;;) {
      if (this.size < HEADER_SIZE) break;
      const header = this.peek(HEADER_SIZE);
      const view = new DataView(header.buffer);
      if (view.getUint32(0) !== MAGIC) throw new EnvelopeError("bad magic", 0);
      const payloadLen = view.getUint32(18);
      if (payloadLen > MAX_PAYLOAD) throw new EnvelopeError("payload too large", 18);
      const total = HEADER_SIZE + payloadLen + 4;
      if (this.size < total) break;
      const decoded = decodeEnvelope(this.take(total));
      if (!decoded) throw new EnvelopeError("internal short read", 0);
      out.push(decoded.env);
    }
    return out;
  }
}

// --- payload codecs ---

export const FMT_GRAY8 = 0x01;
export const FMT_RGB8 = 0x02;
export const FMT_GRAY8_RLE = 0x11;
export const FMT_RGB8_RLE = 0x12;

export interface VideoFrame {
  width: number;
  height: number;
  channels: 1 | 3;
  pixels: Uint8Array; // row-major, interleaved for RGB
}

function rleExpand(data: Uint8Array, expected: number): Uint8Array {
  if (data.length % 2) throw new Error("RLE data must be pairs");
  const out = new Uint8Array(expected);
  let pos = 0;
  for (let i = 0; i < data.length; i += 2) {
    const count = data[i];
    if (count === 0 || pos + count > expected) throw new Error("bad RLE run");
    out.fill(data[i + 1], pos, pos + count);
    pos += count;
  }
  if (pos !== expected) throw new Error("RLE short");
  return out;
}

export function decodeVideoFrame(payload: Uint8Array): VideoFrame {
  if (payload.length < 5) throw new Error("video payload too short");
  const view = new DataView(payload.buffer, payload.byteOffset);
  const width = view.getUint16(0);
  const height = view.getUint16(2);
  const fmt = view.getUint8(4);
  const body = payload.subarray(5);
  const channels = fmt === FMT_GRAY8 || fmt === FMT_GRAY8_RLE ? 1 : 3;
  if (![FMT_GRAY8, FMT_RGB8, FMT_GRAY8_RLE, FMT_RGB8_RLE].includes(fmt)) {
    throw new Error(`unknown pixel format ${fmt}`);
  }
  const expected = width * height * channels;
  const pixels =
    fmt === FMT_GRAY8_RLE || fmt === FMT_RGB8_RLE
      ? rleExpand(body, expected)
      : body.slice();
  if (pixels.length !== expected) throw new Error("raster size mismatch");
  return { width, height, channels: channels as 1 | 3, pixels };
}

export type DetectionColor = "GREEN" | "RED" | "UNKNOWN";
const COLOR_NAMES: DetectionColor[] = ["GREEN", "RED", "UNKNOWN"];

export interface DetectionRecord {
  x: number;
  y: number;
  w: number;
  h: number;
  personScore: number;
  threat: number;
  percent: number;
  color: DetectionColor;
  labelIndex: number;
}

export interface Detections {
  frameSeq: number;
  items: DetectionRecord[];
}

const DET_RECORD_SIZE = 27;

export function decodeDetections(payload: Uint8Array): Detections {
  if (payload.length < 6) throw new Error("detections payload too short");
  const view = new DataView(payload.buffer, payload.byteOffset);
  const frameSeq = view.getUint32(0);
  const count = view.getUint16(4);
  if (payload.length !== 6 + count * DET_RECORD_SIZE) throw new Error("detections size mismatch");
  const items: DetectionRecord[] = [];
  for (let i = 0; i < count; i++) {
    const off = 6 + i * DET_RECORD_SIZE;
    const color = view.getUint8(off + 25);
    if (color > 2) throw new Error(`unknown color code ${color}`);
    items.push({
      x: view.getInt32(off),
      y: view.getInt32(off + 4),
      w: view.getUint32(off + 8),
      h: view.getUint32(off + 12),
      personScore: view.getFloat32(off + 16),
      threat: view.getFloat32(off + 20),
      percent: view.getUint8(off + 24),
      color: COLOR_NAMES[color],
      labelIndex: view.getUint8(off + 26),
    });
  }
  return { frameSeq, items };
}

export const MODE_UGV = 0;
export const MODE_UAV = 1;

export function encodeModeSwitch(mode: number): Uint8Array {
  return new Uint8Array([0x01, mode]);
}

export function encodeDrive(left: number, right: number): Uint8Array {
  const clamp = (v: number) => Math.max(-127, Math.min(127, Math.round(v)));
  return new Uint8Array([0x02, clamp(left) & 0xff, clamp(right) & 0xff]);
}

export function encodeEStop(): Uint8Array {
  return new Uint8Array([0x03]);
}

/** Head pose: type 0x10, pitch/yaw as signed 16-bit centidegrees, u32 seq. */
export function encodeHeadPose(pitchDeg: number, yawDeg: number, seq: number): Uint8Array {
  const out = new Uint8Array(9);
  const view = new DataView(out.buffer);
  view.setUint8(0, 0x10);
  view.setInt16(1, Math.round(pitchDeg * 100));
  view.setInt16(3, Math.round(yawDeg * 100));
  view.setUint32(5, seq >>> 0);
  return out;
}

export interface Status {
  mode: number;
  eStopped: boolean;
  pan: number;
  tilt: number;
  ugvPose: [number, number, number];
  uavPose: [number, number, number];
}

export function decodeStatus(payload: Uint8Array): Status {
  if (payload.length !== 34) throw new Error("status payload must be 34 bytes");
  const view = new DataView(payload.buffer, payload.byteOffset);
  return {
    mode: view.getUint8(0),
    eStopped: view.getUint8(1) !== 0,
    pan: view.getFloat32(2),
    tilt: view.getFloat32(6),
    ugvPose: [view.getFloat32(10), view.getFloat32(14), view.getFloat32(18)],
    uavPose: [view.getFloat32(22), view.getFloat32(26), view.getFloat32(30)],
  };
}
