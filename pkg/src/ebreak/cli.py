"""Thin command-line client for the compute service.

Subcommands build a request, POST it to the service and print the
response body unchanged (CSV tables are rendered server side, so bytes
are identical however the service is reached).  By default the app is
mounted in-process through an ASGI transport — no socket, no network;
set EBREAK_SERVER=http://host:port to talk to a running instance, or
start one with `ebreak serve`.

Exit codes: 0 success, 1 internal/service failure, 2 usage or domain
error.  EBREAK_THREADS caps the service-side worker pool.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx


def _parse_range(text: str):
    if text == "auto":
        return "auto"
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            "range must be 'auto' or 'g_min,g_max,gp_min,gp_max'"
        )
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_probs(text: str):
    try:
        probs = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if len(probs) != 4:
        raise argparse.ArgumentTypeError("expected 4 comma-separated probabilities")
    return probs


def _parse_omega(text: str):
    if text == "eb":
        return "eb"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("omega must be a number or 'eb'") from None


def _add_output_flags(p: argparse.ArgumentParser, formats=("csv", "json")):
    if formats:
        p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", metavar="FILE", default=None,
                   help="write output to FILE instead of stdout")
    p.add_argument("--print-config", action="store_true",
                   help="print the resolved request as JSON and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebreak",
        description="Entanglement reactivation in correlated-noise environments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("env-map", help="classify the (g, g') correlation plan")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--omega", type=float)
    group.add_argument("--nbar", type=float,
                       help="mean thermal photons; omega = 2*nbar + 1")
    p.add_argument("--grid-n", type=int, default=401)
    p.add_argument("--range", type=_parse_range, default="auto")
    _add_output_flags(p)

    p = sub.add_parser("reactivation-map",
                       help="remote-entanglement map at omega = omega_EB(tau)")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--omega", type=_parse_omega, default="eb",
                   help="must be 'eb' for this command")
    p.add_argument("--grid-n", type=int, default=401)
    p.add_argument("--range", type=_parse_range, default="auto")
    _add_output_flags(p)

    p = sub.add_parser("thresholds", help="closed-form family thresholds vs tau")
    p.add_argument("--family", choices=("sc", "ac"), required=True)
    p.add_argument("--tau", type=float, nargs="+", default=None)
    p.add_argument("--tau-grid", metavar="MIN,MAX,N", default=None)
    _add_output_flags(p)

    p = sub.add_parser("curves",
                       help="eps, ebits and correlation bits along a family")
    p.add_argument("--family", choices=("sc", "ac"), required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--points", type=int, default=201)
    _add_output_flags(p)

    p = sub.add_parser("discord", help="correlation budget of a state")
    p.add_argument("--cm", metavar="FILE", default=None,
                   help="CM text file (4 rows of 4 numbers, '#' comments)")
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--nbar", type=float, default=None,
                   help="mean thermal photons; omega = 2*nbar + 1")
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--gp", type=float, default=None)
    p.add_argument("--method", choices=("numeric", "closed", "both"), default="both")
    _add_output_flags(p, formats=())

    p = sub.add_parser("epr-variances", help="EPR quadrature variances")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--omega", type=_parse_omega, default="eb")
    p.add_argument("--nbar", type=float, default=None,
                   help="mean thermal photons; overrides --omega")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--gp", type=float, required=True)
    p.add_argument("--mu", type=float, default=None)
    _add_output_flags(p, formats=())

    q = sub.add_parser("qudit", help="finite-dimensional operations")
    qsub = q.add_subparsers(dest="qudit_op", required=True)

    for kind in ("werner", "isotropic"):
        ps = qsub.add_parser(kind)
        ps.add_argument("--d", type=int, default=2)
        ps.add_argument("--mu", type=float, default=None)
        ps.add_argument("--gamma", type=float, default=None)
        _add_output_flags(ps, formats=())
        action = ps.add_subparsers(dest="qudit_action")
        tw = action.add_parser("twirl")
        tw.add_argument("--mode", choices=("uu", "uustar"), default="uu")
        tw.add_argument("--method", choices=("design", "haar"), default="design")
        tw.add_argument("--samples", type=int, default=100_000)
        tw.add_argument("--seed", type=int, default=0)

    ps = qsub.add_parser("twirl", help="twirl a seeded random state")
    ps.add_argument("--d", type=int, default=2)
    ps.add_argument("--mode", choices=("uu", "uustar"), default="uu")
    ps.add_argument("--method", choices=("design", "haar"), default="design")
    ps.add_argument("--samples", type=int, default=100_000)
    ps.add_argument("--seed", type=int, default=0)
    _add_output_flags(ps, formats=())

    ps = qsub.add_parser("depolarize", help="one-sided Pauli channel on the triplet")
    ps.add_argument("--p", type=_parse_probs, required=True,
                    metavar="P0,P1,P2,P3")
    _add_output_flags(ps, formats=())

    ps = qsub.add_parser("dephase", help="number-basis dephasing of a random state")
    ps.add_argument("--d", type=int, default=5)
    ps.add_argument("--seed", type=int, default=0)
    _add_output_flags(ps, formats=())

    ps = qsub.add_parser("dilate-check",
                         help="verify the control-unitary dilation of a channel")
    ps.add_argument("--p", type=_parse_probs, default=None, metavar="P0,P1,P2,P3")
    ps.add_argument("--clifford", action="store_true",
                    help="use the 24-element Clifford design channel")
    ps.add_argument("--mode", choices=("uu", "uustar"), default="uu")
    _add_output_flags(ps, formats=())

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


# ---------------------------------------------------------------------------
# request construction


def _omega_value(args: argparse.Namespace):
    nbar = getattr(args, "nbar", None)
    if nbar is not None:
        return 2.0 * nbar + 1.0
    return args.omega


def _build_request(args: argparse.Namespace) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "env-map":
        return "/tables/env-map", {
            "omega": _omega_value(args), "grid_n": args.grid_n,
            "range": args.range, "format": args.format,
        }
    if cmd == "reactivation-map":
        if args.omega != "eb":
            raise SystemExit(_usage_error("reactivation-map requires --omega eb"))
        return "/tables/reactivation-map", {
            "tau": args.tau, "omega": "eb", "grid_n": args.grid_n,
            "range": args.range, "format": args.format,
        }
    if cmd == "thresholds":
        if args.tau_grid:
            try:
                lo, hi, n = args.tau_grid.split(",")
                taus = _linspace(float(lo), float(hi), int(n))
            except ValueError:
                raise SystemExit(_usage_error("--tau-grid expects MIN,MAX,N"))
        elif args.tau:
            taus = list(args.tau)
        else:
            raise SystemExit(_usage_error("thresholds needs --tau or --tau-grid"))
        return "/tables/thresholds", {
            "family": args.family, "tau_values": taus, "format": args.format,
        }
    if cmd == "curves":
        return "/tables/curves", {
            "family": args.family, "tau": args.tau,
            "points": args.points, "format": args.format,
        }
    if cmd == "discord":
        payload = {"method": args.method}
        if args.cm:
            with open(args.cm, encoding="utf-8") as fh:
                payload["cm_text"] = fh.read()
        else:
            payload.update(omega=_omega_value(args), g=args.g, gp=args.gp)
        return "/reports/discord", payload
    if cmd == "epr-variances":
        return "/reports/epr-variances", {
            "tau": args.tau, "omega": _omega_value(args),
            "g": args.g, "gp": args.gp, "mu": args.mu,
        }
    if cmd == "qudit":
        return _build_qudit_request(args)
    raise SystemExit(_usage_error(f"unknown command {cmd!r}"))


def _build_qudit_request(args: argparse.Namespace) -> tuple[str, dict]:
    op = args.qudit_op
    if op in ("werner", "isotropic"):
        state = {"kind": op, "d": args.d, "mu": args.mu,
                 "gamma": args.gamma, "seed": 0}
        if getattr(args, "qudit_action", None) == "twirl":
            method = "haar_mc" if args.method == "haar" else "design"
            return "/qudit/twirl", {
                "state": state, "mode": args.mode, "method": method,
                "samples": args.samples, "seed": args.seed,
            }
        return "/qudit/state", {"state": state}
    if op == "twirl":
        method = "haar_mc" if args.method == "haar" else "design"
        return "/qudit/twirl", {
            "state": {"kind": "random", "d": args.d, "seed": args.seed},
            "mode": args.mode, "method": method,
            "samples": args.samples, "seed": args.seed,
        }
    if op == "depolarize":
        return "/qudit/depolarize", {"probs": args.p, "input": "triplet"}
    if op == "dephase":
        return "/qudit/dephase", {"d": args.d, "seed": args.seed}
    if op == "dilate-check":
        if args.clifford:
            return "/qudit/dilate", {"design": "clifford", "mode": args.mode}
        if args.p is None:
            raise SystemExit(_usage_error("dilate-check needs --p or --clifford"))
        return "/qudit/dilate", {"probs": args.p, "mode": args.mode}
    raise SystemExit(_usage_error(f"unknown qudit operation {op!r}"))


def _linspace(lo: float, hi: float, n: int) -> list[float]:
    if n < 1:
        raise ValueError(n)
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _usage_error(message: str) -> int:
    print(f"ebreak: error: {message}", file=sys.stderr)
    return 2


# ---------------------------------------------------------------------------
# transport


def _post(path: str, payload: dict) -> httpx.Response:
    base = os.environ.get("EBREAK_SERVER")
    if base:
        with httpx.Client(base_url=base, timeout=600.0) as client:
            return client.post(path, json=payload)

    from .service.app import app

    async def _call():
        transport = httpx.ASGITransport(app=app, raise_app_exceptions=False)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://ebreak.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(_call())


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        path, payload = _build_request(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if getattr(args, "print_config", False):
        _emit(json.dumps({"endpoint": path, **payload},
                         indent=2, sort_keys=True) + "\n",
              getattr(args, "out", None))
        return 0

    try:
        resp = _post(path, payload)
    except httpx.HTTPError as exc:
        print(f"ebreak: transport error: {exc}", file=sys.stderr)
        return 1

    if resp.status_code >= 500:
        print(f"ebreak: service failure ({resp.status_code}): "
              f"{resp.text[:500]}", file=sys.stderr)
        return 1
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = resp.text
        return _usage_error(str(detail))

    content_type = resp.headers.get("content-type", "")
    if content_type.startswith("text/csv"):
        _emit(resp.text, getattr(args, "out", None))
    else:
        _emit(json.dumps(resp.json(), indent=2, sort_keys=True) + "\n",
              getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
