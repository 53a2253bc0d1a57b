"""robot-sim command line entry point."""

from __future__ import annotations

import argparse
import signal
import threading
from dataclasses import replace

from .scene import Scene, load_scene
from .server import RobotSimServer
from .world import RobotSim


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="robot-sim",
        description="Simulated UGV/UAV streaming video and accepting control",
    )
    ap.add_argument("--scene", help="scene file (default: empty scene)")
    ap.add_argument("--seed", type=int, help="override the scene seed")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--media-port", type=int, default=7701)
    ap.add_argument("--control-port", type=int, default=7702)
    ap.add_argument("--fps", type=float, default=30.0)
    ap.add_argument("--width", type=int, default=1900)
    ap.add_argument("--height", type=int, default=1000)
    ap.add_argument("--max-frames", type=int, help="stop after this many frames")
    ap.add_argument(
        "--head-pose-replay",
        metavar="FILE",
        help="replay a recorded head-pose stream (concatenated link frames)",
    )
    ap.add_argument("--replay-rate", type=float, default=50.0)
    args = ap.parse_args(argv)

    scene = load_scene(args.scene) if args.scene else Scene()
    if args.seed is not None:
        scene = replace(scene, seed=args.seed)
    replay = None
    if args.head_pose_replay:
        with open(args.head_pose_replay, "rb") as f:
            replay = f.read()
    sim = RobotSim(scene, (args.width, args.height))
    server = RobotSimServer(
        sim,
        host=args.host,
        media_port=args.media_port,
        control_port=args.control_port,
        fps=args.fps,
        max_frames=args.max_frames,
        head_pose_replay=replay,
        replay_rate=args.replay_rate,
    )
    server.start()
    print(
        f"robot-sim: media {args.host}:{server.media_port} "
        f"control {args.host}:{server.control_port} fps {args.fps:g}",
        flush=True,
    )
    done = threading.Event()
    signal.signal(signal.SIGINT, lambda *_: done.set())
    signal.signal(signal.SIGTERM, lambda *_: done.set())
    done.wait()
    server.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
