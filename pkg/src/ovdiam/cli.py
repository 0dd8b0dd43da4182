"""Command-line front end; a thin client of the HTTP service.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
All randomness is determined by --seed, and equal inputs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .client import ServiceClient

OK, VERIFY_FAILED, USAGE = 0, 1, 2


@dataclass
class RunSpec:
    """Everything one invocation needs, as parsed from the command line."""

    command: str
    in_path: Optional[str] = None
    graph_path: Optional[str] = None
    out_path: Optional[str] = None
    n: Optional[int] = None
    d: Optional[int] = None
    ell: Optional[int] = None
    p: Optional[int] = None
    q: int = 1
    auto_ell: bool = False
    seed: int = 0
    force: Optional[str] = None
    fmt: str = "edgelist"
    negative_control: bool = False
    no_bounds: bool = False
    bandwidth: Optional[int] = None
    server: Optional[str] = None
    ells: str = "1,2"
    ps: str = "0,1"
    qs: str = "0,1,2"
    random_count: int = 25
    max_n: int = 4
    exhaustive_n: int = 0
    exhaustive_d: int = 0
    host: str = "127.0.0.1"
    port: int = 8000


def _params_payload(spec: RunSpec) -> dict:
    if spec.ell is None:
        raise SystemExit(_usage_error("--ell is required"))
    payload = {"ell": spec.ell, "q": spec.q, "auto_ell": spec.auto_ell}
    if spec.p is not None:
        payload["p"] = spec.p
    return payload


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SystemExit(_usage_error(f"cannot read {path}: {exc}"))


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _ov_text(client: ServiceClient, spec: RunSpec) -> str | int:
    """Instance text from --in, or generated from (--n, --d, --seed)."""
    if spec.in_path:
        return _read(spec.in_path)
    if spec.n is None:
        return _usage_error("give --in FILE or --n N [--d D] --seed S")
    status, body = client.post(
        "/generate", {"n": spec.n, "d": spec.d, "seed": spec.seed}
    )
    if status != 200:
        return _usage_error(str(body.get("detail")))
    return body["ov_text"]


def cmd_encode(client: ServiceClient, spec: RunSpec) -> int:
    payload: dict = {"seed": spec.seed, "force": spec.force}
    if spec.in_path:
        payload["text"] = _read(spec.in_path)
    elif spec.n is not None:
        payload["n"] = spec.n
    else:
        return _usage_error("give --in FILE or --n N")
    status, body = client.post("/encode", payload)
    if status != 200:
        return _usage_error(str(body.get("detail")))
    _write(spec.out_path, body["ov_text"])
    print(f"n={body['n']} d={body['d']}", file=sys.stderr)
    return OK


def cmd_gadget(client: ServiceClient, spec: RunSpec) -> int:
    text = _ov_text(client, spec)
    if isinstance(text, int):
        return text
    status, body = client.post(
        "/gadget",
        {
            "ov_text": text,
            "params": _params_payload(spec),
            "include_json": spec.fmt == "json",
        },
    )
    if status != 200:
        return _usage_error(str(body.get("detail")))
    print(
        f"ell={body['ell']} p={body['p']} q={body['q']} "
        f"vertices={body['vertex_count']} edges={body['edge_count']}",
        file=sys.stderr,
    )
    if spec.fmt == "json":
        _write(spec.out_path, json.dumps(body["graph"], indent=2) + "\n")
    else:
        _write(spec.out_path, body["edgelist"])
        if spec.out_path:
            Path(spec.out_path + ".labels").write_text(body["labels"])
    return OK


def cmd_diameter(client: ServiceClient, spec: RunSpec) -> int:
    payload: dict = {}
    if spec.graph_path:
        payload["edgelist"] = _read(spec.graph_path)
    else:
        text = _ov_text(client, spec)
        if isinstance(text, int):
            return text
        payload["ov_text"] = text
        payload["params"] = _params_payload(spec)
    status, body = client.post("/diameter", payload)
    if status != 200:
        return _usage_error(str(body.get("detail")))
    line = f"diameter={body['diameter']} witness={tuple(body['witness'])}"
    if body.get("classification"):
        line += f" classification={body['classification']}"
    print(line)
    return OK


def cmd_verify(client: ServiceClient, spec: RunSpec) -> int:
    text = _ov_text(client, spec)
    if isinstance(text, int):
        return text
    status, body = client.post(
        "/verify",
        {
            "ov_text": text,
            "params": _params_payload(spec),
            "negative_control": spec.negative_control,
            "bounds": not spec.no_bounds,
        },
    )
    if status != 200:
        return _usage_error(str(body.get("detail")))
    if spec.out_path:
        doc = {k: body[k] for k in ("passed", "has_pair", "diameter",
                                    "classification", "checks")}
        _write(spec.out_path, json.dumps(doc, indent=2) + "\n")
    sys.stdout.write(body["text_report"])
    return OK if body["passed"] else VERIFY_FAILED


def cmd_simulate(client: ServiceClient, spec: RunSpec) -> int:
    text = _ov_text(client, spec)
    if isinstance(text, int):
        return text
    payload = {"ov_text": text, "params": _params_payload(spec)}
    if spec.bandwidth is not None:
        payload["bandwidth"] = spec.bandwidth
    status, body = client.post("/simulate", payload)
    if status != 200:
        return _usage_error(str(body.get("detail")))
    if spec.out_path:
        _write(spec.out_path, json.dumps(body, indent=2) + "\n")
    ledger = body["ledger"]
    print(
        f"verdict={body['verdict']} output={body['program_output']} "
        f"oracle={body['oracle_diameter']} faithful={body['faithful']}"
    )
    print(
        f"rounds={ledger['rounds']} cut_size={ledger['cut_size']} "
        f"bits_a_to_b={ledger['bits_a_to_b']} bits_b_to_a={ledger['bits_b_to_a']} "
        f"max_round_cut_bits={body['max_round_cut_bits']} "
        f"capacity={body['round_cut_capacity']} "
        f"budget_min_rounds={body['budget_min_rounds']}"
    )
    ok = body["faithful"] and body["program_output"] == body["oracle_diameter"]
    return OK if ok else VERIFY_FAILED


def cmd_sweep(client: ServiceClient, spec: RunSpec) -> int:
    def ints(raw: str) -> list[int]:
        return [int(x) for x in raw.split(",") if x.strip()]

    status, body = client.post(
        "/sweep",
        {
            "ells": ints(spec.ells),
            "ps": ints(spec.ps),
            "qs": ints(spec.qs),
            "random_count": spec.random_count,
            "max_n": spec.max_n,
            "seed": spec.seed,
            "exhaustive_max_n": spec.exhaustive_n,
            "exhaustive_max_d": spec.exhaustive_d,
            "bounds": not spec.no_bounds,
        },
    )
    if status != 200:
        return _usage_error(str(body.get("detail")))
    print(
        f"cells={body['cells']} failures={len(body['failures'])} "
        f"elapsed={body['elapsed_s']:.2f}s"
    )
    for failure in body["failures"]:
        print(f"FAIL {failure}")
    if spec.out_path:
        _write(spec.out_path, json.dumps(body, indent=2) + "\n")
    return OK if body["passed"] else VERIFY_FAILED


def cmd_serve(spec: RunSpec) -> int:
    import uvicorn

    uvicorn.run("ovdiam.service.app:app", host=spec.host, port=spec.port)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ovdiam",
        description="Orthogonal-vector diameter gadget workbench",
    )
    parser.add_argument("--server", help="base URL of a running service "
                        "(default: run the service in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True, params=True):
        if instance:
            p.add_argument("--in", dest="in_path", help="instance file")
            p.add_argument("--n", type=int)
            p.add_argument("--d", type=int)
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="out_path")
        if params:
            p.add_argument("--ell", type=int)
            p.add_argument("--p", type=int, choices=(0, 1))
            p.add_argument("--q", type=int, default=1)
            p.add_argument("--auto-ell", action="store_true", dest="auto_ell",
                           help="treat --ell as a target separation length")

    p = sub.add_parser("encode", help="encode an intersection instance as OV")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", choices=("intersecting", "disjoint"))
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("gadget", help="build a gadget graph and export it")
    common(p)
    p.add_argument("--format", dest="fmt", choices=("edgelist", "json"),
                   default="edgelist")

    p = sub.add_parser("diameter", help="exact diameter of a gadget or graph file")
    common(p)
    p.add_argument("--graph", dest="graph_path", help="edge-list file "
                   "(skips the builder)")

    p = sub.add_parser("verify", help="check the diameter dichotomy and "
                       "distance bounds")
    common(p)
    p.add_argument("--negative-control", action="store_true",
                   dest="negative_control",
                   help="perturb one edge; verification must fail")
    p.add_argument("--no-bounds", action="store_true", dest="no_bounds")

    p = sub.add_parser("simulate", help="two-party cut simulation of the "
                       "distributed diameter program")
    common(p)
    p.add_argument("--bandwidth", type=int)

    p = sub.add_parser("sweep", help="verification sweep over instances and "
                       "parameter grids")
    p.add_argument("--ells", default="1,2")
    p.add_argument("--ps", default="0,1")
    p.add_argument("--qs", default="0,1,2")
    p.add_argument("--random", type=int, default=25, dest="random_count")
    p.add_argument("--max-n", type=int, default=4, dest="max_n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive-n", type=int, default=0, dest="exhaustive_n")
    p.add_argument("--exhaustive-d", type=int, default=0, dest="exhaustive_d")
    p.add_argument("--no-bounds", action="store_true", dest="no_bounds")
    p.add_argument("--out", dest="out_path")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    spec = RunSpec(**{k: v for k, v in vars(args).items() if v is not None})

    if spec.command == "serve":
        return cmd_serve(spec)

    handlers = {
        "encode": cmd_encode,
        "gadget": cmd_gadget,
        "diameter": cmd_diameter,
        "verify": cmd_verify,
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
    }
    try:
        with ServiceClient(spec.server) as client:
            return handlers[spec.command](client, spec)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
