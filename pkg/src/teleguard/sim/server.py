"""TCP endpoints for the simulated robot: media stream out, control in.

The frame loop owns the simulator; control sockets only enqueue decoded
messages, which the loop consumes before each step. A STATUS echo goes out
after every applied control command (once it has taken effect) and at a
steady 1 Hz cadence alongside the HEARTBEAT.
"""

from __future__ import annotations

import socket
import threading
import time

from ..transport.envelope import (
    MSG_CONTROL,
    MSG_HEAD_POSE,
    EnvelopeStream,
    Sequencer,
    encode_envelope,
)
from ..transport.messages import (
    MSG_HEARTBEAT,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    Heartbeat,
    decode_message,
    encode_message,
    encode_video_frame,
)
from ..transport.queues import ControlQueue, MediaQueue
from .world import RobotSim


class _ClientSet:
    """Broadcast fan-out with a per-client outbox and writer thread, so a
    slow consumer drops frames (latest wins) instead of stalling the
    simulation loop."""

    def __init__(self, stop: threading.Event, outbox_depth: int = 2) -> None:
        self._clients: list[tuple[socket.socket, MediaQueue]] = []
        self._lock = threading.Lock()
        self._stop = stop
        self._depth = outbox_depth

    def add(self, sock: socket.socket) -> None:
        outbox = MediaQueue(self._depth)
        with self._lock:
            self._clients.append((sock, outbox))
        threading.Thread(
            target=self._writer, args=(sock, outbox), daemon=True
        ).start()

    def _writer(self, sock: socket.socket, outbox: MediaQueue) -> None:
        while not self._stop.is_set():
            data = outbox.get(timeout=0.25)
            if data is None:
                continue
            try:
                sock.sendall(data)
            except OSError:
                break
        with self._lock:
            self._clients = [(s, q) for s, q in self._clients if s is not sock]
        try:
            sock.close()
        except OSError:
            pass

    def broadcast(self, data: bytes) -> None:
        with self._lock:
            clients = list(self._clients)
        for _, outbox in clients:
            outbox.offer(data)

    def close_all(self) -> None:
        with self._lock:
            for sock, _ in self._clients:
                try:
                    sock.close()
                except OSError:
                    pass
            self._clients.clear()


class RobotSimServer:
    def __init__(
        self,
        sim: RobotSim,
        host: str = "127.0.0.1",
        media_port: int = 7701,
        control_port: int = 7702,
        fps: float = 30.0,
        realtime: bool = True,
        max_frames: int | None = None,
        head_pose_replay: bytes | None = None,
        replay_rate: float = 50.0,
    ):
        self.sim = sim
        self.fps = fps
        self.realtime = realtime
        self.max_frames = max_frames
        self._replay = head_pose_replay
        self._replay_rate = replay_rate
        self._media_listener = self._bind(host, media_port)
        self._control_listener = self._bind(host, control_port)
        self.media_port = self._media_listener.getsockname()[1]
        self.control_port = self._control_listener.getsockname()[1]
        self._stop = threading.Event()
        self._media_clients = _ClientSet(self._stop, outbox_depth=2)
        self._control_clients = _ClientSet(self._stop, outbox_depth=64)
        self._commands = ControlQueue()
        self._seq = Sequencer()
        self._threads: list[threading.Thread] = []

    @staticmethod
    def _bind(host: str, port: int) -> socket.socket:
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((host, port))
        sock.listen(8)
        sock.settimeout(0.25)
        return sock

    def start(self) -> None:
        from .render import warm_panorama_cache

        warm_panorama_cache(self.sim.scene, self.sim.resolution)
        loops = [self._accept_media, self._accept_control, self._frame_loop]
        if self._replay is not None:
            loops.append(self._replay_loop)
        for fn in loops:
            t = threading.Thread(target=fn, name=fn.__name__, daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout=3.0)
        for listener in (self._media_listener, self._control_listener):
            try:
                listener.close()
            except OSError:
                pass
        self._media_clients.close_all()
        self._control_clients.close_all()

    def _accept_media(self) -> None:
        while not self._stop.is_set():
            try:
                sock, _ = self._media_listener.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            self._media_clients.add(sock)

    def _accept_control(self) -> None:
        while not self._stop.is_set():
            try:
                sock, _ = self._control_listener.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            self._control_clients.add(sock)
            t = threading.Thread(target=self._read_control, args=(sock,), daemon=True)
            t.start()

    def _read_control(self, sock: socket.socket) -> None:
        stream = EnvelopeStream()
        sock.settimeout(0.25)
        while not self._stop.is_set():
            try:
                data = sock.recv(65536)
            except socket.timeout:
                continue
            except OSError:
                return
            if not data:
                return
            for env in stream.feed(data):
                if env.msg_type in (MSG_CONTROL, MSG_HEAD_POSE):
                    try:
                        self._commands.put(decode_message(env))
                    except ValueError:
                        pass  # malformed control payload: drop, keep stream

    def _send_status(self) -> None:
        msg_type, payload = encode_message(self.sim.status())
        env = encode_envelope(msg_type, payload, self._seq.take(MSG_STATUS))
        self._control_clients.broadcast(env)

    def _send_heartbeat(self) -> None:
        msg_type, payload = encode_message(Heartbeat())
        env = encode_envelope(msg_type, payload, self._seq.take(MSG_HEARTBEAT))
        self._control_clients.broadcast(env)

    def _replay_loop(self) -> None:
        """Feed a recorded head-pose stream (concatenated link frames) into
        the command queue at the telemetry rate."""
        from ..telemetry.link import iter_link_frames, parse_head_pose
        from ..transport.messages import HeadPoseMsg

        period = 1.0 / self._replay_rate
        for payload in iter_link_frames(self._replay):
            if self._stop.is_set():
                return
            pose, seq = parse_head_pose(payload)
            self._commands.put(HeadPoseMsg(pose, seq))
            self._stop.wait(period)

    def _frame_loop(self) -> None:
        dt = 1.0 / self.fps
        next_deadline = time.monotonic()
        frames = 0
        last_beat = 0.0
        while not self._stop.is_set():
            if self.max_frames is not None and frames >= self.max_frames:
                return
            applied = 0
            while True:
                msg = self._commands.get(timeout=0)
                if msg is None:
                    break
                self.sim.apply(msg)
                applied += 1
            self.sim.step(dt)
            rgb, _ = self.sim.render_rgb()
            payload = encode_video_frame(rgb)
            env = encode_envelope(
                MSG_VIDEO_FRAME,
                payload,
                self._seq.take(MSG_VIDEO_FRAME),
                timestamp_us=int(frames * 1_000_000 / self.fps),
            )
            self._media_clients.broadcast(env)
            frames += 1
            if applied:
                self._send_status()  # echo after the commands took effect
            now = time.monotonic()
            if now - last_beat >= 1.0:
                last_beat = now
                self._send_heartbeat()
                self._send_status()
            if self.realtime:
                next_deadline += dt
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
                else:
                    next_deadline = time.monotonic()
