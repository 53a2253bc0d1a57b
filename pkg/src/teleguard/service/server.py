"""The serving loop: robot-facing clients, the pipeline worker, and the
console feed endpoint."""

from __future__ import annotations

import socket
import threading
import time
from dataclasses import dataclass, field

from ..transport.envelope import (
    MSG_CONTROL,
    MSG_DETECTIONS,
    MSG_HEAD_POSE,
    MSG_HEARTBEAT,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    EnvelopeStream,
    Sequencer,
    encode_envelope,
)
from ..transport.messages import decode_video_frame, encode_detections, encode_video_frame
from ..transport.queues import ControlQueue, MediaQueue, SequenceWatcher
from .config import LoadedModels, PipelineConfig, load_models
from .metrics import StageMetrics
from .pipeline import process_frame


@dataclass
class ServiceOptions:
    robot_host: str = "127.0.0.1"
    robot_media_port: int = 7701
    robot_control_port: int = 7702
    listen_host: str = "127.0.0.1"
    listen_port: int = 7703
    metrics_path: str | None = None
    dump_ppm_dir: str | None = None  # debug: write each SBS frame as PPM
    ingress_capacity: int = 1
    backoff_base: float = 1.0
    backoff_cap: float = 30.0
    backoff_scale: float = 1.0  # scaled down in tests
    heartbeat_interval: float = 1.0
    missed_heartbeats: int = 3


@dataclass
class _Console:
    sock: socket.socket
    # media bundles ride latest-wins; control-plane (status) is lossless
    media_out: MediaQueue = field(default_factory=lambda: MediaQueue(2))
    ctrl_out: ControlQueue = field(default_factory=ControlQueue)


class InferenceService:
    """Owns every service thread; start() returns once listening."""

    def __init__(
        self,
        config: PipelineConfig = PipelineConfig(),
        options: ServiceOptions = ServiceOptions(),
        models: LoadedModels | None = None,
    ):
        self.config = config
        self.options = options
        self.models = models or load_models(config)  # startup gate
        self.metrics = StageMetrics()
        self._ingress: MediaQueue = MediaQueue(options.ingress_capacity)
        self._to_robot = ControlQueue()
        self._consoles: list[_Console] = []
        self._consoles_lock = threading.Lock()
        self._seq = Sequencer()
        self._seq_lock = threading.Lock()
        self._stop = threading.Event()
        self._robot_link_up = threading.Event()
        self._last_heartbeat = 0.0
        self._threads: list[threading.Thread] = []
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((options.listen_host, options.listen_port))
        self._listener.listen(8)
        self._listener.settimeout(0.25)
        self.listen_port = self._listener.getsockname()[1]
        self.video_gaps = SequenceWatcher()

    def start(self) -> None:
        for fn in (
            self._media_loop,
            self._control_loop,
            self._worker_loop,
            self._accept_loop,
        ):
            t = threading.Thread(target=fn, name=fn.__name__, daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        """Graceful shutdown: stop threads and flush metrics."""
        self._stop.set()
        for t in self._threads:
            t.join(timeout=3.0)
        try:
            self._listener.close()
        except OSError:
            pass
        with self._consoles_lock:
            for c in self._consoles:
                try:
                    c.sock.close()
                except OSError:
                    pass
            self._consoles.clear()
        self.write_metrics()

    def write_metrics(self) -> None:
        """Flush the metrics CSV; called at shutdown and on demand."""
        if self.options.metrics_path:
            with open(self.options.metrics_path, "w", encoding="ascii") as f:
                f.write(self.metrics.to_csv())

    # robot-facing side

    def _connect_with_backoff(self, port: int) -> socket.socket | None:
        delay = self.options.backoff_base
        while not self._stop.is_set():
            try:
                sock = socket.create_connection(
                    (self.options.robot_host, port), timeout=1.0
                )
                sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
                sock.settimeout(0.25)
                return sock
            except OSError:
                self._stop.wait(delay * self.options.backoff_scale)
                delay = min(delay * 2.0, self.options.backoff_cap)
        return None

    def _media_loop(self) -> None:
        while not self._stop.is_set():
            sock = self._connect_with_backoff(self.options.robot_media_port)
            if sock is None:
                return
            stream = EnvelopeStream()
            while not self._stop.is_set():
                try:
                    data = sock.recv(1 << 20)
                except socket.timeout:
                    continue
                except OSError:
                    break
                if not data:
                    break
                for env in stream.feed(data):
                    if env.msg_type != MSG_VIDEO_FRAME:
                        continue
                    self.metrics.bump("frames_in")
                    self.video_gaps.push(env.sequence)
                    dropped = self._ingress.offer(env)
                    if dropped:
                        self.metrics.bump("frames_dropped", dropped)
            try:
                sock.close()
            except OSError:
                pass

    def _control_loop(self) -> None:
        while not self._stop.is_set():
            sock = self._connect_with_backoff(self.options.robot_control_port)
            if sock is None:
                return
            self._robot_link_up.set()
            self._last_heartbeat = time.monotonic()
            stream = EnvelopeStream()
            writer = threading.Thread(
                target=self._control_writer, args=(sock,), daemon=True
            )
            writer.start()
            timeout = self.options.heartbeat_interval * self.options.missed_heartbeats
            while not self._stop.is_set():
                if time.monotonic() - self._last_heartbeat > timeout:
                    break  # heartbeat lost: reconnect
                try:
                    data = sock.recv(65536)
                except socket.timeout:
                    continue
                except OSError:
                    break
                if not data:
                    break
                for env in stream.feed(data):
                    if env.msg_type == MSG_HEARTBEAT:
                        self._last_heartbeat = time.monotonic()
                    elif env.msg_type == MSG_STATUS:
                        self._last_heartbeat = time.monotonic()
                        self._broadcast(env.msg_type, env.payload)
            self._robot_link_up.clear()
            try:
                sock.close()
            except OSError:
                pass
            writer.join(timeout=1.0)

    def _control_writer(self, sock: socket.socket) -> None:
        while not self._stop.is_set() and self._robot_link_up.is_set():
            item = self._to_robot.get(timeout=0.25)
            if item is None:
                continue
            if not self._send_all(sock, item):
                return

    # pipeline

    def _worker_loop(self) -> None:
        while not self._stop.is_set():
            env = self._ingress.get(timeout=0.25)
            if env is None:
                continue
            try:
                frame = decode_video_frame(env.payload)
            except ValueError:
                continue
            annotated, sbs, dets = process_frame(
                frame.image,
                self.models,
                self.config,
                self.metrics,
                frame_seq=env.sequence,
                timestamp_us=env.timestamp_us,
            )
            if self.options.dump_ppm_dir:
                from ..overlay.ppm import write_ppm

                write_ppm(
                    f"{self.options.dump_ppm_dir}/sbs_{env.sequence:06d}.ppm",
                    sbs.image,
                )
            with self.metrics.stage("encode"):
                with self._seq_lock:
                    video_env = encode_envelope(
                        MSG_VIDEO_FRAME,
                        encode_video_frame(sbs.image),
                        self._seq.take(MSG_VIDEO_FRAME),
                        env.timestamp_us,
                    )
                    dets_env = encode_envelope(
                        MSG_DETECTIONS,
                        encode_detections(dets),
                        self._seq.take(MSG_DETECTIONS),
                        env.timestamp_us,
                    )
            self._send_to_consoles(video_env + dets_env)

    # console side

    def _broadcast(self, msg_type: int, payload: bytes) -> None:
        with self._seq_lock:
            env = encode_envelope(msg_type, payload, self._seq.take(msg_type))
        with self._consoles_lock:
            consoles = list(self._consoles)
        for c in consoles:
            c.ctrl_out.put(env)

    def _send_to_consoles(self, data: bytes) -> None:
        with self._consoles_lock:
            consoles = list(self._consoles)
        for c in consoles:
            c.media_out.offer(data)

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                sock, _ = self._listener.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            sock.settimeout(0.25)
            console = _Console(sock)
            with self._consoles_lock:
                self._consoles.append(console)
            threading.Thread(
                target=self._console_reader, args=(console,), daemon=True
            ).start()
            threading.Thread(
                target=self._console_writer, args=(console,), daemon=True
            ).start()

    def _drop_console(self, console: _Console) -> None:
        with self._consoles_lock:
            if console in self._consoles:
                self._consoles.remove(console)
                self.metrics.bump("console_disconnects")
        try:
            console.sock.close()
        except OSError:
            pass

    def _console_reader(self, console: _Console) -> None:
        """Relay operator CONTROL and HEAD_POSE envelopes robot-ward as-is."""
        stream = EnvelopeStream()
        while not self._stop.is_set():
            try:
                data = console.sock.recv(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            if not data:
                break
            for env in stream.feed(data):
                if env.msg_type in (MSG_CONTROL, MSG_HEAD_POSE):
                    self._to_robot.put(
                        encode_envelope(
                            env.msg_type, env.payload, env.sequence, env.timestamp_us
                        )
                    )
                    self.metrics.backpressure_faults = max(
                        self.metrics.backpressure_faults,
                        self._to_robot.backpressure_faults,
                    )
        self._drop_console(console)

    def _send_all(self, sock: socket.socket, data: bytes) -> bool:
        """sendall that treats the polling timeout as backpressure, not as a
        dead peer; partial sends resume where they left off."""
        view = memoryview(data)
        while view and not self._stop.is_set():
            try:
                sent = sock.send(view)
            except socket.timeout:
                continue
            except OSError:
                return False
            view = view[sent:]
        return True

    def _console_writer(self, console: _Console) -> None:
        while not self._stop.is_set():
            data = console.ctrl_out.get(timeout=0)
            if data is None:
                data = console.media_out.get(timeout=0.05)
            if data is None:
                continue
            if not self._send_all(console.sock, data):
                self._drop_console(console)
                return
