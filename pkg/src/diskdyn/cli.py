"""Command-line interface.

The CLI is a thin client: it marshals arguments into the JSON wire formats,
posts them to the service (in-process by default, remote with ``--server``),
and formats the response.  Exit codes: 0 success, 1 usage or domain error,
2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .client import ServiceClient
from .verify import SUITE_NAMES


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_json_arg(text: str):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            with open(text, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except OSError:
            raise SystemExit_usage(f"argument is neither JSON nor a readable file: {text!r}")


def _load_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit_usage(f"cannot read JSON file {path!r}: {exc}")


def SystemExit_usage(msg: str) -> SystemExit:
    print(f"error: {msg}", file=sys.stderr)
    return SystemExit(1)


def _parse_tols(entries):
    out = {}
    for entry in entries or ():
        name, sep, value = entry.partition("=")
        if not sep:
            raise SystemExit_usage(f"--tol expects name=value, got {entry!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise SystemExit_usage(f"--tol value is not a number: {entry!r}")
    return out or None


def build_parser() -> _Parser:
    p = _Parser(prog="diskdyn", description=__doc__)
    p.add_argument("--server", help="base URL of a running service (default: in-process)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="tolerance override, repeatable")
    p.add_argument("--format", choices=("json", "text", "csv"), default="json")
    p.add_argument("--out", help="write output to this path instead of stdout")
    sub = p.add_subparsers(dest="group", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    schema = sub.add_parser("schema").add_subparsers(dest="command", required=True)
    schema.add_parser("validate").add_argument("file")
    schema.add_parser("groups").add_argument("file")
    enum = schema.add_parser("enumerate")
    enum.add_argument("--weight", type=int, required=True)

    blaschke = sub.add_parser("blaschke").add_subparsers(dest="command", required=True)
    ev = blaschke.add_parser("eval")
    ev.add_argument("--map", required=True)
    ev.add_argument("--z", nargs=2, type=float, required=True, metavar=("RE", "IM"))
    for name in ("fixed-points", "critical", "normalize-fpc", "normalize-cc"):
        blaschke.add_parser(name).add_argument("--map", required=True)
    bary = blaschke.add_parser("barycenter")
    bary.add_argument("--points", required=True, help="JSON [[re,im],...] or @file")

    circle = sub.add_parser("circle").add_subparsers(dest="command", required=True)
    tab = circle.add_parser("table")
    tab.add_argument("--degree-map", required=True, dest="degree_map")
    tab.add_argument("--depth", type=int, required=True)
    tab.add_argument("--base-index", type=int, default=0, dest="base_index")
    for name in ("measure", "balanced"):
        c = circle.add_parser(name)
        c.add_argument("--degree-map", required=True, dest="degree_map")
        c.add_argument("--start", type=float, required=True)
        c.add_argument("--end", type=float, required=True)
        c.add_argument("--depth", type=int, required=True)

    model = sub.add_parser("model").add_subparsers(dest="command", required=True)
    for name in ("center", "sample"):
        c = model.add_parser(name)
        c.add_argument("--schema", required=True)
        if name == "sample":
            c.add_argument("--params", help="JSON [x1, y1, ...] or @file")
    for name in ("validate", "markings", "pcf", "orbit", "parameters"):
        model.add_parser(name).add_argument("--map", required=True)
    actp = model.add_parser("act")
    actp.add_argument("--map", required=True)
    actp.add_argument("--element", required=True, help="JSON element or @file")
    eq = model.add_parser("equivalent")
    eq.add_argument("--map", required=True)
    eq.add_argument("--other", required=True)

    basin = sub.add_parser("basin").add_subparsers(dest="command", required=True)
    basin.add_parser("derive-schema").add_argument("file")
    st = basin.add_parser("straighten")
    st.add_argument("file")
    grp = st.add_mutually_exclusive_group()
    grp.add_argument("--all", action="store_true", default=True)
    grp.add_argument("--first", action="store_true")

    util = sub.add_parser("util").add_subparsers(dest="command", required=True)
    sym = util.add_parser("sym").add_subparsers(dest="sym_command", required=True)
    tm = sym.add_parser("to-monic")
    tm.add_argument("--points", required=True)
    fm = sym.add_parser("from-monic")
    fm.add_argument("--coeffs", required=True)

    ver = sub.add_parser("verify")
    ver.add_argument("name", choices=SUITE_NAMES)
    ver.add_argument("--trials", type=int)
    ver.add_argument("--depth", type=int)
    ver.add_argument("--max-weight", type=int, dest="max_weight")
    ver.add_argument("--samples", type=int)
    ver.add_argument("--scrambles", type=int)
    ver.add_argument("--probes", type=int)
    ver.add_argument("--members", type=int)
    ver.add_argument("--vectors", type=int)

    return p


def _request(args) -> tuple[str, dict]:
    tols = _parse_tols(args.tol)
    payload: dict = {}
    if tols:
        payload["tolerances"] = tols

    g, cmd = args.group, getattr(args, "command", None)
    if g == "schema":
        if cmd == "enumerate":
            payload["weight"] = args.weight
            return "/schema/enumerate", payload
        payload["schema"] = _load_file(args.file)
        if cmd == "groups":
            payload["seed"] = args.seed
            return "/schema/groups", payload
        return "/schema/validate", payload
    if g == "blaschke":
        if cmd == "barycenter":
            payload["points"] = _load_json_arg(args.points)
            return "/blaschke/barycenter", payload
        payload["map"] = _load_file(args.map)
        if cmd == "eval":
            payload["z"] = list(args.z)
            return "/blaschke/eval", payload
        return f"/blaschke/{cmd}", payload
    if g == "circle":
        payload["map"] = _load_file(args.degree_map)
        payload["depth"] = args.depth
        if cmd == "table":
            payload["base_index"] = args.base_index
            return "/circle/table", payload
        payload["arc"] = {"start": args.start, "end": args.end}
        return f"/circle/{cmd}", payload
    if g == "model":
        if cmd in ("center", "sample"):
            payload["schema"] = _load_file(args.schema)
            if cmd == "sample":
                payload["seed"] = args.seed
                if args.params:
                    payload["parameters"] = _load_json_arg(args.params)
            return f"/model/{cmd}", payload
        payload["map"] = _load_file(args.map)
        if cmd == "act":
            payload["element"] = _load_json_arg(args.element)
        if cmd == "equivalent":
            payload["other"] = _load_file(args.other)
        return f"/model/{cmd}", payload
    if g == "basin":
        payload["basin"] = _load_file(args.file)
        if cmd == "straighten":
            payload["mode"] = "first" if args.first else "all"
            return "/basin/straighten", payload
        return "/basin/derive-schema", payload
    if g == "util":
        if args.sym_command == "to-monic":
            payload["points"] = _load_json_arg(args.points)
            return "/util/sym/to-monic", payload
        payload["coefficients"] = _load_json_arg(args.coeffs)
        return "/util/sym/from-monic", payload
    if g == "verify":
        payload["seed"] = args.seed
        options = {}
        for key in ("trials", "depth", "max_weight", "samples", "scrambles",
                    "probes", "members", "vectors"):
            val = getattr(args, key, None)
            if val is not None:
                options[key] = val
        payload["options"] = options
        return f"/verify/{args.name}", payload
    raise SystemExit_usage(f"unknown command group {g!r}")


def _format_text(body: dict, lines: list, prefix: str = ""):
    if isinstance(body, dict):
        for key in sorted(body):
            val = body[key]
            if isinstance(val, (dict, list)):
                _format_text(val, lines, f"{prefix}{key}.")
            else:
                lines.append(f"{prefix}{key}: {val}")
    elif isinstance(body, list):
        for i, val in enumerate(body):
            if isinstance(val, (dict, list)):
                _format_text(val, lines, f"{prefix}{i}.")
            else:
                lines.append(f"{prefix}{i}: {val}")
    return lines


def _render(args, path: str, body: dict) -> str:
    if args.format == "csv":
        if path == "/circle/table":
            rows = ["angle,re,im,t_numerator,t_denominator"]
            for e in body["entries"]:
                rows.append(
                    f"{e['angle']!r},{e['re']!r},{e['im']!r},"
                    f"{e['t_numerator']},{e['t_denominator']}"
                )
            return "\n".join(rows) + "\n"
        raise SystemExit_usage("csv output is only available for `circle table`")
    if args.format == "text":
        if path.startswith("/verify/"):
            lines = [f"suite {body['suite']} seed {body['seed']}"]
            for c in body["checks"]:
                mark = "PASS" if c["passed"] else "FAIL"
                lines.append(f"{mark} {c['name']}" + (f" -- {c['detail']}" if c["detail"] else ""))
            lines.append(("PASS" if body["passed"] else "FAIL") + f" overall ({body['runtime_s']}s)")
            return "\n".join(lines) + "\n"
        return "\n".join(_format_text(body, [])) + "\n"
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.group == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        path, payload = _request(args)
    except SystemExit as exc:
        return int(exc.code or 1)

    with ServiceClient(args.server) as client:
        status, body = client.post(path, payload)

    if status != 200:
        detail = body.get("detail", body) if isinstance(body, dict) else body
        print(f"error ({body.get('error', status) if isinstance(body, dict) else status}): {detail}",
              file=sys.stderr)
        return 1

    try:
        text = _render(args, path, body)
    except SystemExit as exc:
        return int(exc.code or 1)

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if path.startswith("/verify/") and not body.get("passed", False):
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
