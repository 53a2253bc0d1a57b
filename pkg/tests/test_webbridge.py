import base64
import hashlib
import os
import socket
import struct
import time

import pytest

from teleguard.overlay import FRAME_H, FRAME_W
from teleguard.service import InferenceService, PipelineConfig, ServiceOptions, load_models
from teleguard.service.webbridge import ConsoleWebServer
from teleguard.sim import CameraState, RobotSim
from teleguard.sim.server import RobotSimServer
from teleguard.transport import (
    EnvelopeStream,
    ModeSwitch,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    decode_message,
    encode_envelope,
    encode_message,
)

from test_service import CAMERA, armed_scene


def ws_handshake(sock: socket.socket, host: str, port: int) -> None:
    key = base64.b64encode(os.urandom(16)).decode()
    req = (
        f"GET /ws HTTP/1.1\r\nHost: {host}:{port}\r\n"
        "Upgrade: websocket\r\nConnection: Upgrade\r\n"
        f"Sec-WebSocket-Key: {key}\r\nSec-WebSocket-Version: 13\r\n\r\n"
    )
    sock.sendall(req.encode())
    response = b""
    while b"\r\n\r\n" not in response:
        response += sock.recv(4096)
    assert b"101" in response.split(b"\r\n")[0]
    guid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
    expect = base64.b64encode(hashlib.sha1((key + guid).encode()).digest())
    assert expect in response


def ws_send_binary(sock: socket.socket, payload: bytes) -> None:
    # client frames must be masked
    mask = os.urandom(4)
    header = bytearray([0x82])
    n = len(payload)
    if n < 126:
        header.append(0x80 | n)
    elif n < 1 << 16:
        header.append(0x80 | 126)
        header += struct.pack(">H", n)
    else:
        header.append(0x80 | 127)
        header += struct.pack(">Q", n)
    header += mask
    masked = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    sock.sendall(bytes(header) + masked)


class WsReader:
    def __init__(self, sock: socket.socket):
        self.sock = sock
        self.buf = b""

    def _need(self, n: int) -> bool:
        while len(self.buf) < n:
            data = self.sock.recv(1 << 20)
            if not data:
                return False
            self.buf += data
        return True

    def read_frame(self):
        if not self._need(2):
            return None
        b0, b1 = self.buf[0], self.buf[1]
        length = b1 & 0x7F
        pos = 2
        if length == 126:
            self._need(4)
            (length,) = struct.unpack_from(">H", self.buf, 2)
            pos = 4
        elif length == 127:
            self._need(10)
            (length,) = struct.unpack_from(">Q", self.buf, 2)
            pos = 10
        if not self._need(pos + length):
            return None
        payload = self.buf[pos : pos + length]
        self.buf = self.buf[pos + length :]
        return b0 & 0x0F, payload


@pytest.fixture
def web_stack(tmp_path):
    models = load_models(PipelineConfig())
    sim = RobotSim(armed_scene(), (FRAME_W, FRAME_H), CAMERA)
    robot = RobotSimServer(sim, media_port=0, control_port=0, fps=10.0)
    robot.start()
    service = InferenceService(
        PipelineConfig(),
        ServiceOptions(
            robot_media_port=robot.media_port,
            robot_control_port=robot.control_port,
            listen_port=0,
            backoff_scale=0.02,
        ),
        models,
    )
    service.start()
    (tmp_path / "index.html").write_text("<html><body>console</body></html>")
    web = ConsoleWebServer(
        str(tmp_path), ("127.0.0.1", service.listen_port), host="127.0.0.1", port=0
    )
    web.start()
    yield web
    web.stop()
    service.stop()
    robot.stop()


def test_serves_static_bundle(web_stack):
    sock = socket.create_connection(("127.0.0.1", web_stack.port), timeout=5)
    sock.sendall(b"GET / HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n")
    response = b""
    while True:
        data = sock.recv(4096)
        if not data:
            break
        response += data
    sock.close()
    assert response.startswith(b"HTTP/1.0 200") or response.startswith(b"HTTP/1.1 200")
    assert b"console" in response


def test_ws_bridge_carries_envelopes_both_ways(web_stack):
    sock = socket.create_connection(("127.0.0.1", web_stack.port), timeout=10)
    sock.settimeout(10.0)
    ws_handshake(sock, "127.0.0.1", web_stack.port)
    reader = WsReader(sock)
    stream = EnvelopeStream()

    got_video = False
    deadline = time.monotonic() + 20
    mode_sent = False
    uav_echo = False
    while time.monotonic() < deadline and not (got_video and uav_echo):
        frame = reader.read_frame()
        if frame is None:
            break
        opcode, payload = frame
        if opcode != 0x2:
            continue
        for env in stream.feed(payload):
            if env.msg_type == MSG_VIDEO_FRAME:
                got_video = True
                if not mode_sent:
                    msg_type, body = encode_message(ModeSwitch(1))
                    ws_send_binary(sock, encode_envelope(msg_type, body, 0))
                    mode_sent = True
            elif env.msg_type == MSG_STATUS and decode_message(env).mode == 1:
                uav_echo = True
    sock.close()
    assert got_video, "no video envelope over the websocket bridge"
    assert uav_echo, "mode switch sent over the bridge produced no UAV echo"
