"""Thin command-line client for the compute service.

Every subcommand builds one request, posts it to the HTTP API (an
in-process instance by default, or a remote server via --server), and
writes the files the service rendered.  All numbers are produced and
formatted server-side, so identical invocations yield byte-identical
output files.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

from .config import DEFAULTS

_PROGRESS = sys.stderr


def _log(message):
    print(message, file=_PROGRESS)


def _parse_eps_list(text):
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}: {exc}")


def _parse_m_list(text):
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad m list {text!r}: {exc}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="helmbif",
        description=("Bifurcation branches of planar overdetermined "
                     "Helmholtz problems on perturbed disks"))
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default runs "
                             "the service in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--out", default=None,
                       help="output file (directory for figure); stdout "
                            "stays silent when given")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"),
                           default="csv", dest="fmt")

    p = sub.add_parser("mu-table",
                       help="table of bifurcation values mu_m")
    p.add_argument("--m", type=int, required=True, help="smallest mode")
    p.add_argument("--m-max", type=int, required=True, help="largest mode")
    common(p, fmt=True)

    p = sub.add_parser("verify",
                       help="machine-check the root and kernel certificates")
    p.add_argument("--m-max", type=int, required=True)
    common(p)

    p = sub.add_parser("scaling",
                       help="defect scaling study at mu_m and a control")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps-list", type=_parse_eps_list, required=True,
                   metavar="a,b,c")
    p.add_argument("--control-offset", type=float,
                   default=DEFAULTS.control_offset)
    p.add_argument("--modes", type=int, default=DEFAULTS.modes)
    common(p, fmt=True)

    p = sub.add_parser("branch", help="continue the solution branch")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float, required=True,
                   help="target leading amplitude")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--shape-modes", type=int, default=3)
    p.add_argument("--tol", type=float, default=DEFAULTS.refine_tol)
    p.add_argument("--modes", type=int, default=DEFAULTS.modes)
    common(p)

    p = sub.add_parser("figure",
                       help="boundary polylines and field grids for plotting")
    p.add_argument("--m", type=_parse_m_list, required=True, metavar="4,5,6")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid-n", type=int, default=DEFAULTS.grid_n)
    p.add_argument("--first-order", action="store_true",
                   help="sample the first-order family instead of a "
                        "refined branch point")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--tol", type=float, default=DEFAULTS.refine_tol)
    p.add_argument("--modes", type=int, default=DEFAULTS.modes)
    common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _client(server):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=None)
    # In-process ASGI transport: same marshalling as a remote server,
    # no socket.
    import warnings

    from .service.app import app
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient
        return TestClient(app, raise_server_exceptions=False)


def _request_payload(args):
    if args.command == "mu-table":
        return "/v1/mu-table", {"m_min": args.m, "m_max": args.m_max,
                                "fmt": args.fmt}
    if args.command == "verify":
        return "/v1/verify", {"m_max": args.m_max}
    if args.command == "scaling":
        return "/v1/scaling", {"m": args.m, "eps_list": args.eps_list,
                               "control_offset": args.control_offset,
                               "modes": args.modes, "fmt": args.fmt}
    if args.command == "branch":
        return "/v1/branch", {"m": args.m, "eps_target": args.eps,
                              "steps": args.steps,
                              "shape_modes": args.shape_modes,
                              "tol": args.tol, "modes": args.modes}
    if args.command == "figure":
        payload = {"m_list": args.m, "eps": args.eps, "grid_n": args.grid_n,
                   "first_order": args.first_order, "modes": args.modes,
                   "tol": args.tol}
        if args.steps is not None:
            payload["steps"] = args.steps
        return "/v1/figure", payload
    raise AssertionError(args.command)


def _write_files(files, out, multi):
    if out is None:
        for name, content in files.items():
            if multi or len(files) > 1:
                print(f"# file: {name}")
            sys.stdout.write(content)
        return
    if multi:
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        for name, content in files.items():
            path = directory / name
            path.write_text(content)
            _log(f"wrote {path}")
    else:
        ((_, content),) = files.items()
        path = Path(out)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        _log(f"wrote {path}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn
        uvicorn.run("helmbif.service.app:app", host=args.host, port=args.port)
        return 0

    path, payload = _request_payload(args)
    _log(f"helmbif {args.command}: requesting {path}")
    with _client(args.server) as client:
        response = client.post(path, json=payload)

    if response.status_code == 422:
        detail = response.json().get("detail", response.text)
        _log(f"usage error: {json.dumps(detail)}")
        return 2
    if response.status_code != 200:
        _log(f"service error {response.status_code}: {response.text}")
        return 1

    body = response.json()
    files = body.get("files", {})
    if files:
        _write_files(files, args.out, multi=args.command == "figure")

    error = body.get("error")
    if error:
        _log(f"computation failed: {error}")
        return 1
    if args.command == "verify" and not body.get("passed", False):
        _log("verification report contains failed checks")
        return 1
    _log("done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
