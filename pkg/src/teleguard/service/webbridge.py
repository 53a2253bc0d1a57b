"""Static console hosting plus a websocket bridge to the envelope feed.

The browser cannot open raw TCP sockets, so /ws upgrades to a websocket
and shuttles envelope bytes unmodified in both directions (binary frames
only). Just enough of RFC 6455 for one well-behaved browser peer.
"""

from __future__ import annotations

import base64
import hashlib
import socket
import struct
import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer

WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def _accept_key(key: str) -> str:
    digest = hashlib.sha1((key + WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def ws_encode_binary(payload: bytes) -> bytes:
    header = bytearray([0x82])  # FIN + binary opcode
    n = len(payload)
    if n < 126:
        header.append(n)
    elif n < 1 << 16:
        header.append(126)
        header.extend(struct.pack(">H", n))
    else:
        header.append(127)
        header.extend(struct.pack(">Q", n))
    return bytes(header) + payload


class _WsConn:
    """Frame parser for one client connection (client frames are masked)."""

    def __init__(self, sock: socket.socket):
        self.sock = sock
        self._buf = bytearray()

    def _need(self, n: int) -> bool:
        while len(self._buf) < n:
            data = self.sock.recv(65536)
            if not data:
                return False
            self._buf.extend(data)
        return True

    def read_message(self) -> tuple[int, bytes] | None:
        """Returns (opcode, payload) or None on close/EOF."""
        if not self._need(2):
            return None
        b0, b1 = self._buf[0], self._buf[1]
        opcode = b0 & 0x0F
        masked = bool(b1 & 0x80)
        length = b1 & 0x7F
        pos = 2
        if length == 126:
            if not self._need(pos + 2):
                return None
            (length,) = struct.unpack_from(">H", self._buf, pos)
            pos += 2
        elif length == 127:
            if not self._need(pos + 8):
                return None
            (length,) = struct.unpack_from(">Q", self._buf, pos)
            pos += 8
        mask = b""
        if masked:
            if not self._need(pos + 4):
                return None
            mask = bytes(self._buf[pos : pos + 4])
            pos += 4
        if not self._need(pos + length):
            return None
        payload = bytes(self._buf[pos : pos + length])
        del self._buf[: pos + length]
        if masked:
            payload = bytes(c ^ mask[i % 4] for i, c in enumerate(payload))
        return opcode, payload


class ConsoleWebServer:
    """Serves the static bundle at / and bridges /ws to the TCP feed."""

    def __init__(
        self,
        static_dir: str,
        feed_addr: tuple[str, int],
        host: str = "127.0.0.1",
        port: int = 8080,
    ):
        self.feed_addr = feed_addr
        outer = self

        class Handler(SimpleHTTPRequestHandler):
            def do_GET(self) -> None:  # noqa: N802 (stdlib naming)
                if self.path == "/ws":
                    outer._handle_ws(self)
                else:
                    super().do_GET()

            def log_message(self, *args) -> None:
                pass

        self._httpd = ThreadingHTTPServer(
            (host, port), partial(Handler, directory=static_dir)
        )
        self.port = self._httpd.server_address[1]
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        if self._thread:
            self._thread.join(timeout=3.0)
        self._httpd.server_close()

    def _handle_ws(self, handler: SimpleHTTPRequestHandler) -> None:
        key = handler.headers.get("Sec-WebSocket-Key")
        if handler.headers.get("Upgrade", "").lower() != "websocket" or not key:
            handler.send_error(400, "websocket upgrade required")
            return
        handler.send_response(101, "Switching Protocols")
        handler.send_header("Upgrade", "websocket")
        handler.send_header("Connection", "Upgrade")
        handler.send_header("Sec-WebSocket-Accept", _accept_key(key))
        handler.end_headers()

        ws_sock = handler.connection
        feed = socket.create_connection(self.feed_addr, timeout=5.0)
        feed.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        stop = threading.Event()

        def feed_to_ws() -> None:
            try:
                while not stop.is_set():
                    data = feed.recv(1 << 20)
                    if not data:
                        break
                    ws_sock.sendall(ws_encode_binary(data))
            except OSError:
                pass
            finally:
                stop.set()

        t = threading.Thread(target=feed_to_ws, daemon=True)
        t.start()
        conn = _WsConn(ws_sock)
        try:
            while not stop.is_set():
                msg = conn.read_message()
                if msg is None:
                    break
                opcode, payload = msg
                if opcode == 0x8:  # close
                    break
                if opcode == 0x9:  # ping -> pong
                    ws_sock.sendall(bytes([0x8A, len(payload)]) + payload)
                    continue
                if opcode == 0x2 and payload:
                    feed.sendall(payload)
        except OSError:
            pass
        finally:
            stop.set()
            try:
                feed.close()
            except OSError:
                pass
