"""Operator CLI. Every command except `serve` is a thin client of the HTTP
API: with --server it talks to a running service, otherwise it mounts the
service in-process (no network) and speaks to it over an ASGI transport, so
both paths exercise exactly the same endpoints.

Exit codes: 0 success, 1 runtime error, 2 input/format error.
"""

from __future__ import annotations

import argparse
import asyncio
import base64
import json
import sys
from pathlib import Path

import httpx

from . import __version__, wire
from .config import build_engine_config, load_config_file, scalar_config_flags
from .errors import PyrofitError
from .service import DEFAULT_PORT, create_app

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2


def _err(msg: str) -> None:
    print(f"pyrofit: {msg}", file=sys.stderr)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc}") from exc


def _config_overrides(args: argparse.Namespace) -> dict:
    """defaults <- config file <- explicit flags, as one override layer."""
    overrides: dict = {}
    if getattr(args, "config", None):
        overrides.update(load_config_file(args.config))
    for key, _ in scalar_config_flags():
        value = getattr(args, f"cfg_{key}", None)
        if value is not None:
            overrides[key] = value
    return overrides


def _call(args: argparse.Namespace, method: str, path: str, payload: dict) -> httpx.Response:
    server = getattr(args, "server", None)
    if server:
        with httpx.Client(base_url=server, timeout=120.0) as client:
            return client.request(method, path, json=payload)

    app = create_app()

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://pyrofit") as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _check(resp: httpx.Response) -> dict | None:
    """Decode a service response; returns None after printing an error."""
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        _err(f"service error ({resp.status_code}): {detail}")
        return None
    return resp.json()


def _http_exit(resp: httpx.Response) -> int:
    return EXIT_INPUT if resp.status_code < 500 else EXIT_RUNTIME


def cmd_score(args: argparse.Namespace) -> int:
    demo_text = _read_text(args.demo)
    user_text = _read_text(args.user)
    payload = {
        "demo_text": demo_text,
        "user_text": user_text,
        "config": _config_overrides(args) or None,
    }
    resp = _call(args, "POST", "/score", payload)
    data = _check(resp)
    if data is None:
        return _http_exit(resp)
    lines = [wire.dumps(rec) for rec in data["records"]]
    summary_line = wire.dumps(data["summary"])
    if args.report:
        Path(args.report).write_text("\n".join(lines + [summary_line]) + "\n", encoding="utf-8")
    print(summary_line)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    specs = []
    for line in _read_text(args.specs).splitlines():
        if not line.strip():
            continue
        try:
            specs.append(json.loads(line))
        except json.JSONDecodeError as exc:
            _err(f"bad spec line: {exc.msg}")
            return EXIT_INPUT
    payload = {
        "specs": specs,
        "steps": args.steps,
        "include_frames": bool(args.out and args.format == "jsonl"),
        "ppm": bool(args.out and args.format == "ppm"),
        "width": args.width,
        "height": args.height,
        "config": _config_overrides(args) or None,
    }
    resp = _call(args, "POST", "/simulate", payload)
    data = _check(resp)
    if data is None:
        return _http_exit(resp)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.format == "jsonl":
            with open(out_dir / "frames.jsonl", "w", encoding="utf-8") as fh:
                for frame in data["frames"]:
                    fh.write(wire.dumps({"t_ms": frame["t_ms"], "points": frame["points"]}) + "\n")
        else:
            for i, blob in enumerate(data["ppm_frames"]):
                (out_dir / f"frame_{i:06d}.ppm").write_bytes(base64.b64decode(blob))
    if args.digest:
        print(data["digest"])
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    payload = {
        "frames_text": _read_text(args.session),
        "demo_text": _read_text(args.demo),
        "seed": args.seed,
        "config": _config_overrides(args) or None,
    }
    resp = _call(args, "POST", "/replay", payload)
    data = _check(resp)
    if data is None:
        return _http_exit(resp)
    text = "\n".join(data["events"]) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import logging

    import uvicorn

    from .track import load_demo_track

    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(asctime)s %(name)s: %(message)s")
    config = build_engine_config(_config_overrides(args))
    ingest = config.ingest
    demos = {}
    for path in args.demo:
        track = load_demo_track(path, ingest)
        demos[track.name] = track
    app = create_app(
        demos=demos,
        config=config,
        store_path=args.store,
        seed_root=args.seed,
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        _err(f"server failed: {exc}")
        return EXIT_RUNTIME
    return EXIT_OK


def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    group = sp.add_argument_group("engine config overrides")
    group.add_argument("--config", metavar="PATH", help="JSON config file")
    for key, typ in scalar_config_flags():
        flag = "--" + key.replace("_", "-")
        if typ is bool:
            group.add_argument(flag, dest=f"cfg_{key}", default=None,
                               action=argparse.BooleanOptionalAction,
                               help=f"override {key}")
        else:
            group.add_argument(flag, dest=f"cfg_{key}", type=typ, default=None,
                               metavar="V", help=f"override {key}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyrofit",
        description="Score pose streams against a demo track and reward "
                    "correct motion with simulated fireworks.",
    )
    parser.add_argument("--version", action="version", version=f"pyrofit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("score", help="score a recorded user stream offline")
    sp.add_argument("--demo", required=True, metavar="PATH", help="demo track file")
    sp.add_argument("--user", required=True, metavar="PATH", help="user keypoint stream")
    sp.add_argument("--report", metavar="PATH", help="write the JSONL score report here")
    sp.add_argument("--server", metavar="URL", help="use a running service instead of in-process")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("simulate", help="run the firework engine on a spec file")
    sp.add_argument("--specs", required=True, metavar="PATH", help="JSONL firework specs")
    sp.add_argument("--steps", required=True, type=int, metavar="N")
    sp.add_argument("--format", choices=["jsonl", "ppm"], default="jsonl")
    sp.add_argument("--out", metavar="DIR", help="write frames into this directory")
    sp.add_argument("--digest", action="store_true", help="print the frame-stream digest")
    sp.add_argument("--width", type=int, default=320, help="ppm raster width")
    sp.add_argument("--height", type=int, default=240, help="ppm raster height")
    sp.add_argument("--server", metavar="URL")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("replay", help="re-run a recorded session deterministically")
    sp.add_argument("--session", required=True, metavar="PATH", help="recorded keypoint stream")
    sp.add_argument("--demo", required=True, metavar="PATH")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", metavar="PATH", help="write the event stream here (default stdout)")
    sp.add_argument("--server", metavar="URL")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("serve", help="serve the live session protocol")
    sp.add_argument("--demo", required=True, action="append", metavar="PATH",
                    help="demo track file (repeatable)")
    sp.add_argument("--port", type=int, default=DEFAULT_PORT)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--store", metavar="PATH", help="append session summaries here")
    sp.add_argument("--seed", type=int, default=0, help="root seed for firework streams")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except PyrofitError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        _err(f"cannot reach service: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
