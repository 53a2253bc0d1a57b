import numpy as np
import pytest

from teleguard.sim import (
    CameraState,
    Entity,
    RobotSim,
    Scene,
    SceneFormatError,
    ServoModel,
    format_scene,
    labeled_corpus,
    parse_scene,
    pixels_per_degree,
    render_frame,
)
from teleguard.sim.sprites import BAR_VALUE, draw_person, weapon_bar_rects
from teleguard.transport import Drive, EStop, HeadPoseMsg, ModeSwitch
from teleguard.telemetry import HeadPose

RES = (640, 360)  # small frames keep the suite quick; geometry scales


def mission_scene():
    return Scene(
        bounds=(60, 40),
        seed=7,
        entities=(
            Entity(0, "PERSON_ARMED", "assault_rifle", 14.0, 20.4, 1),
            Entity(1, "PERSON_UNARMED", None, 13.0, 17.0, -1),
        ),
    )


def cam(pan=0.0, tilt=0.0, mode="UGV"):
    return CameraState(mode, pan, tilt, (10.0, 20.0, 0.0), (10.0, 20.0, 12.0))


def test_scene_round_trip_and_schema():
    scene = mission_scene()
    parsed = parse_scene(format_scene(scene))
    assert parsed == scene


def test_scene_parser_errors():
    with pytest.raises(SceneFormatError, match="scene v1"):
        parse_scene("bounds 10 10\n")
    with pytest.raises(SceneFormatError, match="line 2"):
        parse_scene("scene v1\nentity PERSON_ARMED assault_rifle ten 5 1\n")
    with pytest.raises(SceneFormatError, match="unrecognized"):
        parse_scene("scene v1\nwobble 3\n")
    with pytest.raises(SceneFormatError):
        parse_scene("scene v1\nbounds 5 5\nentity PERSON_UNARMED none 9 9 1\n")


def test_render_deterministic():
    a = render_frame(mission_scene(), cam(), RES)
    b = render_frame(mission_scene(), cam(), RES)
    assert np.array_equal(a.image, b.image)
    assert a.truths == b.truths


def test_empty_scene_is_pure_background():
    scene = Scene(seed=3)
    fr = render_frame(scene, cam(), RES)
    assert fr.truths == []
    # texture, not a constant; and no sprite-dark or bar-bright pixels
    assert fr.image.std() > 1.0
    assert fr.image.min() > 80 and fr.image.max() < BAR_VALUE


def test_pan_shift_is_exact_pixels_per_degree():
    ppd_x, _ = pixels_per_degree(*RES)
    a = render_frame(mission_scene(), cam(pan=0.0), RES).image
    b = render_frame(mission_scene(), cam(pan=10.0), RES).image
    shift = round(10 * ppd_x)
    assert np.array_equal(a[:, shift:], b[:, : RES[0] - shift])


def test_tilt_shift_is_exact():
    _, ppd_y = pixels_per_degree(*RES)
    a = render_frame(mission_scene(), cam(tilt=0.0), RES).image
    b = render_frame(mission_scene(), cam(tilt=-5.0), RES).image
    shift = round(5 * ppd_y)
    assert np.array_equal(a[shift:, :], b[: RES[1] - shift, :])


def test_armed_unarmed_differ_only_in_bar_region():
    canvas_a = np.full((300, 300), 170, np.uint8)
    canvas_b = canvas_a.copy()
    draw_person(canvas_a, 150, 250, 200, 1, None)
    draw_person(canvas_b, 150, 250, 200, 1, "shotgun")
    diff = canvas_a != canvas_b
    ys, xs = np.nonzero(diff)
    assert len(ys) > 0
    rects = weapon_bar_rects(150, 250, 200, 1, "shotgun")
    for yy, xx in zip(ys, xs):
        assert any(x0 <= xx < x1 and y0 <= yy < y1 for x0, y0, x1, y1 in rects)
    assert (canvas_b[diff] == BAR_VALUE).all()


def test_weapon_classes_have_distinct_signatures():
    from teleguard.sim.sprites import WEAPON_GEOMETRY

    signatures = set(WEAPON_GEOMETRY.values())
    assert len(signatures) == len(WEAPON_GEOMETRY) == 7


def test_servo_slew_limit():
    servo = ServoModel()
    servo.set_target(90.0, 0.0)
    pan, _ = servo.step(0.1)
    assert pan == pytest.approx(30.0)  # 300 deg/s * 0.1 s
    for _ in range(10):
        servo.step(0.1)
    assert servo.pan.position == pytest.approx(90.0)


def test_servo_respects_range_clamp():
    servo = ServoModel()
    servo.set_target(500.0, -500.0)
    for _ in range(20):
        servo.step(0.1)
    assert servo.pan.position == 90.0
    assert servo.tilt.position == -45.0


def test_straight_drive_keeps_heading():
    sim = RobotSim(mission_scene(), RES, cam())
    sim.apply(Drive(64, 64))
    for _ in range(10):
        sim.step(0.1)
    x, y, heading = sim.camera.ugv_pose
    assert heading == 0.0
    assert y == 20.0
    assert x > 10.0


def test_estop_latches_until_zero_drive():
    sim = RobotSim(mission_scene(), RES, cam())
    sim.apply(Drive(100, 100))
    sim.apply(EStop())
    sim.step(0.1)
    x0 = sim.camera.ugv_pose[0]
    sim.apply(Drive(100, 100))  # ignored while latched
    sim.step(0.1)
    assert sim.camera.ugv_pose[0] == x0
    sim.apply(Drive(0, 0))  # release
    sim.apply(Drive(100, 100))
    sim.step(0.1)
    assert sim.camera.ugv_pose[0] > x0


def test_mode_switch_at_frame_boundary_preserves_poses():
    sim = RobotSim(mission_scene(), RES, cam())
    sim.render()
    pose_before = sim.camera.ugv_pose
    sim.apply(ModeSwitch(1))
    assert sim.camera.mode == "UGV"  # not yet applied
    fr = sim.render()
    assert sim.camera.mode == "UAV"
    assert sim.camera.ugv_pose == pose_before
    assert sim.camera.uav_pose == (10.0, 20.0, 12.0)
    assert fr.image.shape == (RES[1], RES[0])
    sim.apply(ModeSwitch(0))
    sim.render()
    assert sim.camera.mode == "UGV"
    assert sim.camera.ugv_pose == pose_before


def test_head_pose_command_moves_servo_within_slew():
    sim = RobotSim(mission_scene(), RES, cam())
    sim.apply(HeadPoseMsg(HeadPose(10.0, 45.0), 0))
    sim.step(0.05)
    assert sim.camera.pan == pytest.approx(15.0)  # slew-limited toward 45
    assert sim.camera.tilt == pytest.approx(10.0)  # reachable within 15 deg


def test_command_replay_is_bit_identical():
    def run():
        sim = RobotSim(mission_scene(), RES, cam())
        frames = []
        for i in range(12):
            if i == 3:
                sim.apply(Drive(50, 30))
            if i == 6:
                sim.apply(HeadPoseMsg(HeadPose(5.0, 20.0), 1))
            if i == 9:
                sim.apply(ModeSwitch(1))
            sim.step(1.0 / 30.0)
            frames.append(sim.render().image)
        return frames

    a = run()
    b = run()
    for fa, fb in zip(a, b):
        assert np.array_equal(fa, fb)


def test_status_reflects_state():
    sim = RobotSim(mission_scene(), RES, cam())
    st = sim.status()
    assert st.mode == 0 and not st.e_stopped
    sim.apply(EStop())
    assert sim.status().e_stopped


def test_corpus_deterministic():
    a = labeled_corpus(99, 10)
    b = labeled_corpus(99, 10)
    for (ra, la), (rb, lb) in zip(a, b):
        assert la == lb
        assert np.array_equal(ra.pixels, rb.pixels)


def test_corpus_label_histogram_multinomial_bound():
    n = 8000
    labels = [l for _, l in labeled_corpus(123, n)]
    counts = np.bincount(labels, minlength=8)
    expect = n / 8
    sigma = np.sqrt(n * (1 / 8) * (7 / 8))
    assert (np.abs(counts - expect) <= 3 * sigma).all(), counts


def test_corpus_armed_rois_contain_bar_pixels():
    for roi, label in labeled_corpus(7, 64):
        has_bar = bool((roi.pixels >= 225).any())
        assert has_bar == (label > 0)
