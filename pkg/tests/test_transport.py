import zlib

import numpy as np
import pytest

from teleguard.telemetry import HeadPose
from teleguard.transport import (
    BadMagicError,
    ControlQueue,
    CrcMismatchError,
    DetectionRecord,
    Detections,
    Drive,
    EStop,
    Envelope,
    EnvelopeError,
    EnvelopeStream,
    HeadPoseMsg,
    Heartbeat,
    MediaQueue,
    MessageError,
    ModeSwitch,
    MSG_HEARTBEAT,
    MSG_VIDEO_FRAME,
    Sequencer,
    Status,
    TruncatedError,
    UnknownTypeError,
    VideoFrame,
    decode_envelope,
    decode_message,
    detect_sequence_gaps,
    encode_envelope,
    encode_message,
    rle_decode,
    rle_encode,
)


def test_crc32_reference_vector():
    assert zlib.crc32(b"123456789") & 0xFFFFFFFF == 0xCBF43926


def test_heartbeat_round_trip():
    wire = encode_envelope(MSG_HEARTBEAT, b"", sequence=3, timestamp_us=99)
    env, used = decode_envelope(wire)
    assert used == len(wire)
    assert env.msg_type == MSG_HEARTBEAT
    assert env.payload == b""
    assert env.sequence == 3 and env.timestamp_us == 99
    assert isinstance(decode_message(env), Heartbeat)


def test_envelope_error_kinds_and_offsets():
    wire = bytearray(encode_envelope(MSG_HEARTBEAT, b"abc"))
    bad = bytearray(wire)
    bad[0] = ord("X")
    with pytest.raises(BadMagicError) as ei:
        decode_envelope(bytes(bad))
    assert ei.value.offset == 0

    bad = bytearray(wire)
    bad[4] = 0x7F
    with pytest.raises(UnknownTypeError) as ei:
        decode_envelope(bytes(bad))
    assert ei.value.offset == 4

    with pytest.raises(TruncatedError):
        decode_envelope(bytes(wire[:10]))

    bad = bytearray(wire)
    bad[-6] ^= 0x01  # payload byte
    with pytest.raises(CrcMismatchError):
        decode_envelope(bytes(bad))


def random_message(rng):
    kind = rng.integers(0, 7)
    if kind == 0:
        shape = (int(rng.integers(1, 16)), int(rng.integers(1, 16)))
        if rng.random() < 0.5:
            shape = shape + (3,)
        return VideoFrame(rng.integers(0, 256, size=shape, dtype=np.uint8))
    if kind == 1:
        items = tuple(
            DetectionRecord(
                int(rng.integers(0, 1000)),
                int(rng.integers(0, 1000)),
                int(rng.integers(1, 500)),
                int(rng.integers(1, 500)),
                float(np.float32(rng.random())),
                float(np.float32(rng.random())),
                int(rng.integers(0, 101)),
                ("GREEN", "RED", "UNKNOWN")[int(rng.integers(0, 3))],
                int(rng.integers(0, 8)),
            )
            for _ in range(int(rng.integers(0, 5)))
        )
        return Detections(int(rng.integers(0, 2**32)), items)
    if kind == 2:
        return ModeSwitch(int(rng.integers(0, 2)))
    if kind == 3:
        return Drive(int(rng.integers(-127, 128)), int(rng.integers(-127, 128)))
    if kind == 4:
        return EStop()
    if kind == 5:
        pitch = round(float(rng.uniform(-90, 90)), 2)
        yaw = round(float(rng.uniform(-179.99, 180)), 2)
        return HeadPoseMsg(HeadPose(pitch, yaw), int(rng.integers(0, 2**32)))
    return Heartbeat()


def messages_equal(a, b):
    if isinstance(a, VideoFrame):
        return isinstance(b, VideoFrame) and np.array_equal(a.image, b.image)
    if isinstance(a, HeadPoseMsg):
        return (
            isinstance(b, HeadPoseMsg)
            and b.seq == a.seq
            and abs(b.pose.pitch - a.pose.pitch) < 1e-9
            and abs(b.pose.yaw - a.pose.yaw) < 1e-9
        )
    return a == b


def test_fuzz_round_trip_10k():
    rng = np.random.default_rng(70)
    seq = Sequencer()
    for _ in range(10_000):
        msg = random_message(rng)
        msg_type, payload = encode_message(msg)
        wire = encode_envelope(msg_type, payload, seq.take(msg_type))
        env, used = decode_envelope(wire)
        assert used == len(wire)
        assert messages_equal(decode_message(env), msg)


def test_fuzz_single_bit_flips_detected_or_typed():
    rng = np.random.default_rng(71)
    msg = Detections(
        42,
        (
            DetectionRecord(10, 20, 30, 40, 0.5, 0.25, 25, "GREEN", 0),
            DetectionRecord(50, 60, 70, 80, 0.9, 0.75, 75, "RED", 1),
        ),
    )
    msg_type, payload = encode_message(msg)
    wire = bytearray(encode_envelope(msg_type, payload, 7, 1234))
    flips = 0
    for byte_idx in range(len(wire)):
        for bit in range(8):
            mutated = bytearray(wire)
            mutated[byte_idx] ^= 1 << bit
            try:
                env, _ = decode_envelope(bytes(mutated))
                decoded = decode_message(env)
            except (EnvelopeError, MessageError):
                flips += 1
                continue
            # a flip that still decodes must not be silent corruption
            assert messages_equal(decoded, msg), f"byte {byte_idx} bit {bit}"
    assert flips > 0


def test_random_garbage_never_crashes():
    rng = np.random.default_rng(72)
    for _ in range(2000):
        blob = rng.integers(0, 256, size=int(rng.integers(0, 128)), dtype=np.uint8).tobytes()
        try:
            env, _ = decode_envelope(blob)
            decode_message(env)
        except (EnvelopeError, MessageError):
            pass


def test_payload_cap_enforced():
    with pytest.raises(ValueError):
        encode_envelope(MSG_VIDEO_FRAME, b"x" * (16 * 1024 * 1024 + 1))


def test_stream_decoder_reassembles_split_envelopes():
    msgs = [Heartbeat(), ModeSwitch(1), Drive(10, -10)]
    wire = b"".join(
        encode_envelope(*encode_message(m), sequence=i) for i, m in enumerate(msgs)
    )
    stream = EnvelopeStream()
    got = []
    for i in range(0, len(wire), 7):
        got.extend(stream.feed(wire[i : i + 7]))
    assert [decode_message(e) for e in got] == msgs
    assert stream.pending_bytes == 0


def test_video_rle_round_trip():
    rng = np.random.default_rng(73)
    flat = np.repeat(
        rng.integers(0, 256, size=64, dtype=np.uint8), rng.integers(1, 600, size=64)
    )
    img = flat[: 120 * 80].reshape(80, 120)
    plain = encode_message(VideoFrame(img))[1]
    rle = __import__("teleguard.transport.messages", fromlist=["encode_video_frame"]).encode_video_frame(
        img, rle=True
    )
    assert len(rle) < len(plain)
    from teleguard.transport.messages import decode_video_frame

    assert np.array_equal(decode_video_frame(rle).image, img)
    assert np.array_equal(decode_video_frame(plain).image, img)


def test_rle_rejects_bad_runs():
    with pytest.raises(MessageError):
        rle_decode(b"\x00\x05", 5)
    with pytest.raises(MessageError):
        rle_decode(b"\x05\x01", 3)
    assert rle_decode(rle_encode(b"\x01\x01\x01"), 3) == b"\x01\x01\x01"


def test_status_round_trip():
    st = Status(1, 12.5, -3.25, (1.0, 2.0, 0.5), (4.0, 5.0, 30.0), True)
    msg_type, payload = encode_message(st)
    env, _ = decode_envelope(encode_envelope(msg_type, payload))
    back = decode_message(env)
    assert back.mode == 1 and back.e_stopped
    assert back.pan == 12.5 and back.tilt == -3.25


def test_media_queue_capacity_one_latest_wins():
    q = MediaQueue(1)
    q.offer("A")
    q.offer("B")
    assert q.get(0) == "B"
    assert q.get(0) is None
    assert q.dropped == 1


def test_control_queue_is_lossless_fifo():
    q = ControlQueue(watermark=4)
    for i in range(10):
        q.put(i)
    assert [q.get(0) for i in range(10)] == list(range(10))
    assert q.backpressure_faults == 6


def test_burst_into_bounded_queue_keeps_order_and_counts_drops():
    q = MediaQueue(8)
    for seq in range(1000):
        q.offer(seq)
    delivered = []
    while True:
        item = q.get(0)
        if item is None:
            break
        delivered.append(item)
    assert delivered == sorted(delivered)
    assert len(delivered) == 8
    assert q.dropped == 992
    gaps = detect_sequence_gaps(delivered)
    assert gaps.total_lost + len(delivered) + delivered[0] == 1000


def test_sequence_gap_reports():
    assert detect_sequence_gaps([1, 2, 3]).gaps == []
    rep = detect_sequence_gaps([1, 2, 5])
    assert len(rep.gaps) == 1
    assert rep.gaps[0].expected == 3 and rep.gaps[0].received == 5
    assert rep.gaps[0].lost == 2
    assert detect_sequence_gaps([0xFFFFFFFF, 0x0]).gaps == []
