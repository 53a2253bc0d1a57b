// Browser wiring: DOM in, session logic out. All teleoperation state
// lives in ConsoleSession; this file only moves events and pixels.

import { MODE_UAV, MODE_UGV } from "./envelope.js";
import { FeedRenderer, ViewMode } from "./render.js";
import { ConsoleSession, SEND_MIN_INTERVAL_MS } from "./session.js";
import { WebSocketTransport } from "./transport.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("feed");
const staleBanner = el<HTMLDivElement>("stale");
const panel = el<HTMLTableSectionElement>("panel-body");
const modeBadge = el<HTMLSpanElement>("mode-badge");
const noticeBox = el<HTMLDivElement>("notices");
const statsLine = el<HTMLSpanElement>("stats");
const yawSlider = el<HTMLInputElement>("yaw");
const pitchSlider = el<HTMLInputElement>("pitch");
const dragPad = el<HTMLDivElement>("dragpad");

function notice(text: string): void {
  noticeBox.textContent = text;
  setTimeout(() => {
    if (noticeBox.textContent === text) noticeBox.textContent = "";
  }, 4000);
}

const wsUrl = `ws://${location.host}/ws`;
const transport = new WebSocketTransport(
  wsUrl,
  (data) => session.handleData(data, performance.now()),
  (up) => notice(up ? "link up" : "link down"),
);
const session = new ConsoleSession(transport, notice);
const renderer = new FeedRenderer(canvas);
let viewMode: ViewMode = "sbs";

el<HTMLButtonElement>("view-toggle").onclick = () => {
  viewMode = viewMode === "sbs" ? "left" : "sbs";
  el<HTMLButtonElement>("view-toggle").textContent =
    viewMode === "sbs" ? "single half" : "both halves";
};

el<HTMLButtonElement>("mode-ugv").onclick = () =>
  session.requestModeSwitch(MODE_UGV, performance.now());
el<HTMLButtonElement>("mode-uav").onclick = () =>
  session.requestModeSwitch(MODE_UAV, performance.now());

const driveButtons: [string, number, number][] = [
  ["drive-fwd", 90, 90],
  ["drive-back", -70, -70],
  ["drive-left", -60, 60],
  ["drive-right", 60, -60],
  ["drive-stop", 0, 0],
];
for (const [id, left, right] of driveButtons) {
  el<HTMLButtonElement>(id).onclick = () => {
    if (!session.drive(left, right, performance.now())) {
      notice("drive locked: release the e-stop first");
    }
  };
}
el<HTMLButtonElement>("estop").onclick = () => {
  session.eStop(performance.now());
  notice("E-STOP latched");
};
el<HTMLButtonElement>("estop-release").onclick = () => {
  session.releaseDrive(performance.now());
  notice("drive released");
};

// head pose: sliders are the baseline input
function readSliders(): void {
  session.setOrientationInput(Number(pitchSlider.value), Number(yawSlider.value));
}
yawSlider.oninput = readSliders;
pitchSlider.oninput = readSliders;

// pointer drag maps pad position to yaw/pitch
let dragging = false;
dragPad.onpointerdown = (ev) => {
  dragging = true;
  dragPad.setPointerCapture(ev.pointerId);
};
dragPad.onpointerup = () => {
  dragging = false;
};
dragPad.onpointermove = (ev) => {
  if (!dragging) return;
  const rect = dragPad.getBoundingClientRect();
  const yaw = ((ev.clientX - rect.left) / rect.width - 0.5) * 180;
  const pitch = (0.5 - (ev.clientY - rect.top) / rect.height) * 90;
  yawSlider.value = String(Math.round(yaw));
  pitchSlider.value = String(Math.round(pitch));
  session.setOrientationInput(pitch, yaw);
};

el<HTMLButtonElement>("orientation").onclick = async () => {
  const doe = DeviceOrientationEvent as unknown as {
    requestPermission?: () => Promise<string>;
  };
  try {
    if (doe.requestPermission && (await doe.requestPermission()) !== "granted") {
      throw new Error("denied");
    }
    window.addEventListener("deviceorientation", (ev) => {
      if (ev.beta !== null && ev.alpha !== null) {
        session.setOrientationInput(ev.beta, -ev.alpha);
      }
    });
    notice("device orientation active");
  } catch {
    notice("device orientation unavailable: sliders stay active");
  }
};

el<HTMLButtonElement>("calibrate").onclick = () => {
  session.calibrate();
  notice("head pose zeroed");
};

setInterval(() => session.tick(performance.now()), SEND_MIN_INTERVAL_MS);

function repaint(): void {
  const now = performance.now();
  const frame = session.takePendingFrame();
  if (frame) renderer.draw(frame, viewMode);
  staleBanner.style.display = session.isStale(now) ? "block" : "none";

  const rows = session.detections;
  panel.innerHTML = "";
  for (const row of rows) {
    const tr = document.createElement("tr");
    tr.innerHTML =
      `<td class="sw ${row.color.toLowerCase()}"></td>` +
      `<td>${row.label}</td><td>${row.percentText}</td>`;
    panel.appendChild(tr);
  }
  const mode = session.mode;
  modeBadge.textContent = mode === null ? "-" : mode === MODE_UAV ? "UAV" : "UGV";
  modeBadge.className = mode === MODE_UAV ? "badge uav" : "badge ugv";
  if (session.status) {
    const s = session.status;
    statsLine.textContent =
      `${session.stats.fps.toFixed(1)} fps | drops ${session.stats.drops} | ` +
      `pan ${s.pan.toFixed(1)} tilt ${s.tilt.toFixed(1)}` +
      (s.eStopped ? " | E-STOP" : "");
  }
  requestAnimationFrame(repaint);
}
requestAnimationFrame(repaint);
