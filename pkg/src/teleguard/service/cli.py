"""inference-service command line entry point."""

from __future__ import annotations

import argparse
import signal
import threading

from .config import PipelineConfig, apply_options, parse_config_file
from .server import InferenceService, ServiceOptions
from .webbridge import ConsoleWebServer


def _host_port(addr: str, default_port: int) -> tuple[str, int]:
    if ":" in addr:
        host, _, port = addr.rpartition(":")
        return host or "127.0.0.1", int(port)
    return addr, default_port


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="inference-service",
        description="Detection/classification service between robot and console",
    )
    ap.add_argument("--robot", default="127.0.0.1", help="robot host[:media_port]")
    ap.add_argument("--robot-control-port", type=int, help="default media port + 1")
    ap.add_argument("--listen", default="127.0.0.1:7703", help="console feed host:port")
    ap.add_argument("--detector", choices=["haar", "hog"])
    ap.add_argument("--classifier", choices=["reference", "stub"])
    ap.add_argument("--stub-path")
    ap.add_argument("--threshold", type=float)
    ap.add_argument("--config", help="key = value config file (flags override)")
    ap.add_argument("--metrics", help="write metrics CSV here on shutdown and SIGUSR1")
    ap.add_argument("--dump-frames", metavar="DIR", help="debug: dump SBS frames as PPM")
    ap.add_argument("--serve-console", metavar="DIR", help="serve the console bundle over HTTP")
    ap.add_argument("--http-port", type=int, default=8080)
    args = ap.parse_args(argv)

    config = PipelineConfig()
    if args.config:
        config = apply_options(config, parse_config_file(args.config))
    overrides = {}
    if args.detector:
        overrides["detector"] = args.detector
    if args.classifier:
        overrides["classifier"] = args.classifier
    if args.stub_path:
        overrides["stub_path"] = args.stub_path
    if args.threshold is not None:
        overrides["threshold"] = str(args.threshold)
    config = apply_options(config, overrides)

    robot_host, media_port = _host_port(args.robot, 7701)
    listen_host, listen_port = _host_port(args.listen, 7703)
    options = ServiceOptions(
        robot_host=robot_host,
        robot_media_port=media_port,
        robot_control_port=args.robot_control_port or media_port + 1,
        listen_host=listen_host,
        listen_port=listen_port,
        metrics_path=args.metrics,
        dump_ppm_dir=args.dump_frames,
    )
    service = InferenceService(config, options)
    service.start()
    signal.signal(signal.SIGUSR1, lambda *_: service.write_metrics())
    print(
        f"inference-service: robot {robot_host}:{media_port}/"
        f"{options.robot_control_port} console {listen_host}:{service.listen_port}",
        flush=True,
    )
    web = None
    if args.serve_console:
        web = ConsoleWebServer(
            args.serve_console,
            ("127.0.0.1", service.listen_port),
            host=listen_host,
            port=args.http_port,
        )
        web.start()
        print(f"console ui: http://{listen_host}:{web.port}/", flush=True)

    done = threading.Event()
    signal.signal(signal.SIGINT, lambda *_: done.set())
    signal.signal(signal.SIGTERM, lambda *_: done.set())
    done.wait()
    if web:
        web.stop()
    service.stop()
    if args.metrics:
        print(f"metrics written to {args.metrics}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
