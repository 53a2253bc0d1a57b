import socket
import time

import numpy as np
import pytest

from teleguard.overlay import FRAME_H, FRAME_W
from teleguard.service import (
    ConfigFileError,
    InferenceService,
    LoadedModels,
    Mission,
    PipelineConfig,
    ServiceOptions,
    StageMetrics,
    apply_options,
    load_models,
    parse_config_file,
    process_frame,
    run_mission,
)
from teleguard.sim import CameraState, Entity, RobotSim, Scene
from teleguard.sim.server import RobotSimServer
from teleguard.threat import FailingClassifier
from teleguard.transport import (
    EnvelopeStream,
    HeadPoseMsg,
    Heartbeat,
    ModeSwitch,
    MSG_CONTROL,
    MSG_DETECTIONS,
    MSG_HEAD_POSE,
    MSG_STATUS,
    MSG_VIDEO_FRAME,
    Sequencer,
    Status,
    decode_message,
    encode_envelope,
    encode_message,
)
from teleguard.telemetry import HeadPose


def armed_scene(seed=7):
    return Scene(
        bounds=(60, 40),
        seed=seed,
        entities=(Entity(0, "PERSON_ARMED", "assault_rifle", 14.0, 20.4, 1),),
    )


def unarmed_scene(seed=7):
    return Scene(
        bounds=(60, 40),
        seed=seed,
        entities=(Entity(0, "PERSON_UNARMED", None, 14.0, 20.4, 1),),
    )


CAMERA = CameraState(ugv_pose=(10.0, 20.0, 0.0))


@pytest.fixture(scope="module")
def models():
    return load_models(PipelineConfig())


def render_rgb(scene):
    sim = RobotSim(scene, (FRAME_W, FRAME_H), CAMERA)
    sim.step(1 / 30)
    rgb, fr = sim.render_rgb()
    return rgb, fr


def test_config_file_parse_and_flag_override(tmp_path):
    path = tmp_path / "svc.conf"
    path.write_text("# pipeline\ndetector = hog\nthreshold = 0.4\npyramid_stride = 6\n")
    cfg = apply_options(PipelineConfig(), parse_config_file(str(path)))
    assert cfg.detector == "hog"
    assert cfg.threshold == 0.4
    assert cfg.pyramid.stride == 6
    cfg = apply_options(cfg, {"detector": "haar"})  # flag wins
    assert cfg.detector == "haar"


def test_config_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / "svc.conf"
    path.write_text("detektor = haar\n")
    with pytest.raises(ConfigFileError, match="unknown key"):
        parse_config_file(str(path))
    path.write_text("just a line\n")
    with pytest.raises(ConfigFileError, match="key = value"):
        parse_config_file(str(path))


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(threshold=0.0)
    with pytest.raises(ValueError):
        PipelineConfig(detector="yolo")
    with pytest.raises(ValueError):
        PipelineConfig(classifier="stub")  # needs stub_path


def test_bad_model_file_fails_at_startup(tmp_path):
    bad = tmp_path / "cascade.txt"
    bad.write_text("cascade v1 8 8 1\nstage 0.0 1\nweak oops 1 1 0\n")
    with pytest.raises(ValueError):
        load_models(PipelineConfig(cascade_path=str(bad)))


def test_process_frame_empty_scene(models):
    rgb, _ = render_rgb(Scene(seed=7))
    annotated, sbs, dets = process_frame(rgb, models, PipelineConfig())
    assert dets.items == ()
    assert np.array_equal(annotated.image, rgb)  # nothing drawn
    left = sbs.image[:, :950]
    assert np.array_equal(left, sbs.image[:, 950:])


def _associated(dets, truth):
    """Best-IoU detection among those containing the truth centroid."""
    cx, cy = truth.centroid
    containing = [
        d for d in dets.items if d.x <= cx < d.x + d.w and d.y <= cy < d.y + d.h
    ]
    assert containing, "no detection covers the sprite centroid"

    def iou(d):
        tx, ty, tw, th = truth.bbox
        x1 = max(d.x, tx)
        y1 = max(d.y, ty)
        x2 = min(d.x + d.w, tx + tw)
        y2 = min(d.y + d.h, ty + th)
        inter = max(0, x2 - x1) * max(0, y2 - y1)
        return inter / (d.w * d.h + tw * th - inter)

    return max(containing, key=iou)


def test_case1_unarmed_green(models):
    rgb, fr = render_rgb(unarmed_scene())
    _, _, dets = process_frame(rgb, models, PipelineConfig())
    assert dets.items, "person must be detected"
    best = _associated(dets, fr.truths[0])
    assert best.color == "GREEN"
    assert 0 <= best.percent < 50


def test_case2_armed_red(models):
    rgb, fr = render_rgb(armed_scene())
    _, _, dets = process_frame(rgb, models, PipelineConfig())
    assert dets.items
    best = _associated(dets, fr.truths[0])
    assert best.color == "RED"
    assert best.percent >= 50


def test_classifier_failure_yields_unknown_but_delivers(models):
    rgb, _ = render_rgb(armed_scene())
    broken = LoadedModels(models.detector, FailingClassifier())
    metrics = StageMetrics()
    annotated, sbs, dets = process_frame(rgb, broken, PipelineConfig(), metrics)
    assert dets.items
    assert all(d.color == "UNKNOWN" for d in dets.items)
    assert metrics.classifier_failures == len(dets.items)
    assert sbs.image.shape == (1000, 1900, 3)


def test_metrics_counters(models):
    metrics = StageMetrics()
    assert metrics.snapshot()["counters"]["frames_out"] == 0
    rgb, _ = render_rgb(armed_scene())
    for i in range(3):
        process_frame(rgb, models, PipelineConfig(), metrics, frame_seq=i)
    snap = metrics.snapshot()
    assert snap["counters"]["frames_out"] == 3
    assert snap["stages"]["detect"]["count"] == 3
    csv = metrics.to_csv()
    assert csv.startswith("stage,count,p50_ms,p95_ms\n")
    assert "counter_frames_out,3" in csv


def test_capabilities_metadata():
    caps = RobotSim.capabilities()
    assert caps["max_slope_deg"] == 50.0
    assert caps["servo_slew_deg_per_s"] == 300.0
    assert caps["pan_range_deg"] == (-90.0, 90.0)
    assert caps["tilt_range_deg"] == (-45.0, 45.0)


def test_stage_medians_bounded_by_end_to_end(models):
    import time as _time

    metrics = StageMetrics()
    cfg = PipelineConfig()
    rgb, _ = render_rgb(armed_scene())
    e2e = []
    for i in range(8):
        t0 = _time.perf_counter()
        process_frame(rgb, models, cfg, metrics, frame_seq=i)
        e2e.append((_time.perf_counter() - t0) * 1000.0)
    snap = metrics.snapshot()
    stage_median_sum = sum(
        st["p50_ms"] for name, st in snap["stages"].items() if st["count"]
    )
    e2e_median = sorted(e2e)[len(e2e) // 2]
    assert stage_median_sum <= e2e_median * 1.05  # stages are a subset of the frame


def test_mission_deterministic(models):
    cfg = PipelineConfig()

    def run():
        m = Mission(armed_scene(), CAMERA, n_frames=6)
        metrics = StageMetrics()
        frames = list(run_mission(m, cfg, models, metrics))
        blob = b"".join(f.sbs.image.tobytes() for f in frames)
        return blob, metrics.counters()

    blob_a, counters_a = run()
    blob_b, counters_b = run()
    assert blob_a == blob_b
    assert counters_a == counters_b


class ConsoleClient:
    """Headless protocol client standing in for the operator console."""

    def __init__(self, port: int):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=5.0)
        self.sock.settimeout(0.1)
        self.stream = EnvelopeStream()
        self.seq = Sequencer()
        self.envelopes = []

    def pump(self, duration: float):
        deadline = time.monotonic() + duration
        while time.monotonic() < deadline:
            try:
                data = self.sock.recv(1 << 20)
            except socket.timeout:
                continue
            if not data:
                break
            self.envelopes.extend(self.stream.feed(data))

    def wait_for(self, msg_type: int, predicate=None, timeout: float = 8.0):
        deadline = time.monotonic() + timeout
        scanned = 0
        while time.monotonic() < deadline:
            self.pump(0.1)
            while scanned < len(self.envelopes):
                env = self.envelopes[scanned]
                scanned += 1
                if env.msg_type == msg_type:
                    msg = decode_message(env)
                    if predicate is None or predicate(msg):
                        return env, msg
        raise AssertionError(f"no message of type {msg_type} within {timeout}s")

    def send(self, msg):
        msg_type, payload = encode_message(msg)
        self.sock.sendall(encode_envelope(msg_type, payload, self.seq.take(msg_type)))

    def close(self):
        self.sock.close()


@pytest.fixture
def stack(models, tmp_path):
    sim = RobotSim(armed_scene(), (FRAME_W, FRAME_H), CAMERA)
    robot = RobotSimServer(sim, media_port=0, control_port=0, fps=10.0)
    robot.start()
    metrics_path = tmp_path / "metrics.csv"
    options = ServiceOptions(
        robot_media_port=robot.media_port,
        robot_control_port=robot.control_port,
        listen_port=0,
        metrics_path=str(metrics_path),
        backoff_scale=0.02,
        heartbeat_interval=1.0,
    )
    service = InferenceService(PipelineConfig(), options, models)
    service.start()
    yield robot, service, metrics_path
    service.stop()
    robot.stop()


def test_live_stack_streams_and_controls(stack):
    robot, service, metrics_path = stack
    console = ConsoleClient(service.listen_port)
    try:
        env, frame = console.wait_for(MSG_VIDEO_FRAME)
        assert frame.image.shape == (1000, 1900, 3)
        left = frame.image[:, :950]
        assert np.array_equal(left, frame.image[:, 950:])
        _, dets = console.wait_for(MSG_DETECTIONS)

        # sequence numbers strictly increase per type
        video_seqs = [e.sequence for e in console.envelopes if e.msg_type == MSG_VIDEO_FRAME]
        assert video_seqs == sorted(video_seqs)
        assert len(set(video_seqs)) == len(video_seqs)

        # mode toggle round-trips via the robot's status echo
        t0 = time.monotonic()
        console.send(ModeSwitch(1))
        _, status = console.wait_for(
            MSG_STATUS, predicate=lambda s: s.mode == 1, timeout=5.0
        )
        assert time.monotonic() - t0 < 2.0
        assert status.ugv_pose[0] == pytest.approx(10.0)

        # head-pose stream drives the pan within the slew budget
        console.send(HeadPoseMsg(HeadPose(0.0, 45.0), 1))
        _, status = console.wait_for(
            MSG_STATUS, predicate=lambda s: s.pan > 30.0, timeout=5.0
        )
        assert status.pan <= 90.0
    finally:
        console.close()


def test_live_stack_survives_console_disconnect(stack):
    robot, service, _ = stack
    first = ConsoleClient(service.listen_port)
    first.wait_for(MSG_VIDEO_FRAME)
    first.close()
    second = ConsoleClient(service.listen_port)
    try:
        second.wait_for(MSG_VIDEO_FRAME)
        assert service.metrics.counters()["frames_out"] > 0
    finally:
        second.close()


def test_metrics_file_written_on_stop(models, tmp_path):
    sim = RobotSim(armed_scene(), (FRAME_W, FRAME_H), CAMERA)
    robot = RobotSimServer(sim, media_port=0, control_port=0, fps=10.0)
    robot.start()
    metrics_path = tmp_path / "metrics.csv"
    service = InferenceService(
        PipelineConfig(),
        ServiceOptions(
            robot_media_port=robot.media_port,
            robot_control_port=robot.control_port,
            listen_port=0,
            metrics_path=str(metrics_path),
            backoff_scale=0.02,
        ),
        models,
    )
    service.start()
    console = ConsoleClient(service.listen_port)
    console.wait_for(MSG_VIDEO_FRAME)
    console.close()
    service.stop()
    robot.stop()
    text = metrics_path.read_text()
    assert text.startswith("stage,count,p50_ms,p95_ms\n")
    assert "counter_frames_in," in text


def test_head_pose_replay_drives_servo(models):
    from teleguard.telemetry import encode_link_frame, head_pose_payload

    replay = b"".join(
        encode_link_frame(head_pose_payload(HeadPose(5.0, 40.0), i)) for i in range(30)
    )
    sim = RobotSim(armed_scene(), (FRAME_W, FRAME_H), CAMERA)
    robot = RobotSimServer(
        sim,
        media_port=0,
        control_port=0,
        fps=10.0,
        head_pose_replay=replay,
        replay_rate=50.0,
    )
    robot.start()
    ctrl = socket.create_connection(("127.0.0.1", robot.control_port), timeout=5)
    ctrl.settimeout(0.1)
    stream = EnvelopeStream()
    deadline = time.monotonic() + 8
    pan = 0.0
    try:
        while time.monotonic() < deadline and pan < 30.0:
            try:
                data = ctrl.recv(65536)
            except socket.timeout:
                continue
            for env in stream.feed(data):
                if env.msg_type == MSG_STATUS:
                    pan = decode_message(env).pan
    finally:
        ctrl.close()
        robot.stop()
    assert pan >= 30.0  # replayed poses pulled the servo toward 40 degrees


def test_dump_frames_writes_ppm(models, tmp_path):
    from teleguard.overlay import read_ppm

    dump_dir = tmp_path / "frames"
    dump_dir.mkdir()
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
            dump_ppm_dir=str(dump_dir),
        ),
        models,
    )
    service.start()
    console = ConsoleClient(service.listen_port)
    try:
        console.wait_for(MSG_VIDEO_FRAME)
    finally:
        console.close()
        service.stop()
        robot.stop()
    dumped = sorted(dump_dir.glob("sbs_*.ppm"))
    assert dumped
    img = read_ppm(str(dumped[0]))
    assert img.shape == (1000, 1900, 3)


def test_service_reconnects_when_robot_starts_late(models):
    options = ServiceOptions(
        robot_media_port=0,  # placeholder, patched below
        robot_control_port=0,
        listen_port=0,
        backoff_scale=0.02,
    )
    # reserve ports by binding and closing listeners
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    media_port = probe.getsockname()[1]
    probe.close()
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    control_port = probe.getsockname()[1]
    probe.close()
    options.robot_media_port = media_port
    options.robot_control_port = control_port

    service = InferenceService(PipelineConfig(), options, models)
    service.start()
    time.sleep(0.3)  # several failed connection attempts
    sim = RobotSim(armed_scene(), (FRAME_W, FRAME_H), CAMERA)
    robot = RobotSimServer(
        sim, media_port=media_port, control_port=control_port, fps=10.0
    )
    robot.start()
    console = ConsoleClient(service.listen_port)
    try:
        console.wait_for(MSG_VIDEO_FRAME, timeout=10.0)
    finally:
        console.close()
        service.stop()
        robot.stop()
