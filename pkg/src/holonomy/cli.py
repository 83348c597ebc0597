"""Command-line front end: a thin client over the service handlers.

Each command assembles a request model from its input files, runs it
either in-process or against a remote server (--server URL), and prints
one canonical JSON document to stdout; a short human summary goes to
stderr.  Identical inputs produce byte-identical output.

Exit codes: 0 success, 2 validation error, 3 size-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError as PydanticValidationError

from .errors import SizeLimitError, ValidationError
from .service import HANDLERS

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOO_BIG = 3


def _read_json(path):
    try:
        with open(Path(path)) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _parse_facet(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValidationError("empty vertex in facet list")
        out.append(int(part) if part.lstrip("-").isdigit() else part)
    return out


def _payload(args):
    cmd = args.command
    if cmd == "holonomy":
        payload = {"complex": _read_json(args.complex)}
        if args.base:
            payload["base"] = _parse_facet(args.base)
        return payload
    if cmd == "invariant":
        return {"complex": _read_json(args.complex)}
    if cmd == "embed-check":
        return {"source": _read_json(args.source), "target": _read_json(args.target)}
    if cmd == "hom":
        return {
            "source": _read_json(args.source),
            "target": _read_json(args.target),
            "homology": args.homology,
            "cells": args.cells,
        }
    if cmd == "transport":
        data = _read_json(args.path)
        if not isinstance(data, dict) or "path" not in data:
            raise ValidationError("path file must be an object with a 'path' list")
        payload = {
            "complex": _read_json(args.complex),
            "coefficients": _read_json(args.coefficients),
            "path": data["path"],
            "cells": args.cells,
        }
        if args.k is not None:
            payload["k"] = args.k
        return payload
    if cmd == "chi":
        return {"complex": _read_json(args.complex)}
    if cmd == "phi-check":
        return {
            "complex": _read_json(args.complex),
            "involution": _read_json(args.involution),
            "sigma": _parse_facet(args.sigma),
        }
    if cmd == "collapse-check":
        return {"complex": _read_json(args.complex)}
    if cmd == "bubble":
        cubes = []
        for part in args.cubes.split(";"):
            part = part.strip()
            cubes.append(int(part) if part.lstrip("-").isdigit() else _parse_facet(part))
        return {
            "complex": _read_json(args.complex),
            "cubes": cubes,
            "embed": _read_json(args.embed).get("vertex_map", {}),
        }
    raise ValidationError(f"unknown command {cmd!r}")


def _run_local(command, payload):
    request_model, handler = HANDLERS[command]
    try:
        request = request_model.model_validate(payload)
    except PydanticValidationError as exc:
        raise ValidationError(str(exc)) from None
    response = handler(request)
    return response.model_dump(mode="json", exclude_none=True)


def _run_remote(server, command, payload):
    import httpx

    resp = httpx.post(f"{server.rstrip('/')}/{command}", json=payload, timeout=600.0)
    if resp.status_code == 413:
        raise SizeLimitError(resp.json().get("detail", "size limit exceeded"))
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except json.JSONDecodeError:
            detail = resp.text
        raise ValidationError(str(detail))
    return resp.json()


def _summary(command, doc):
    if command == "holonomy":
        return f"holonomy group of order {doc['order']} at {doc['base']}"
    if command == "invariant":
        return f"I={doc['I']} Z_chain={doc['Z_chain']} CC={doc['CC']}"
    if command == "embed-check":
        return f"verdict: {doc['verdict']}"
    if command == "hom":
        return f"{doc['cell_count']} cells, {doc['hom0_count']} vertices"
    if command == "transport":
        return f"fiber of {doc['fiber_cells']} cells transported"
    if command == "chi":
        return f"chi = {doc['chi']}"
    if command == "phi-check":
        return f"is_phi = {doc['is_phi']} ({doc['reason']})"
    if command == "collapse-check":
        return f"collapsible = {doc['collapsible']}"
    if command == "bubble":
        return f"I before = {doc['I_before']}, after = {doc['I_after']}"
    return command


def build_parser():
    parser = argparse.ArgumentParser(
        prog="holonomy",
        description="Holonomy groups, cubical parity invariants and Hom-complex transport.",
    )
    # accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    for owner, default in ((parser, None), (common, argparse.SUPPRESS)):
        owner.add_argument("--server", default=default,
                           help="run against a holonomy service at this URL")
        owner.add_argument("--seed", type=int, default=0 if owner is parser else default,
                           help="seed for randomized suites")
        owner.add_argument("--out", default=default,
                           help="also write the JSON report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("holonomy", help="holonomy group at a base facet")
    p.add_argument("complex")
    p.add_argument("--base", help="base facet as a comma-separated vertex list")

    p = add_parser("invariant", help="parity invariant, Z_chain and curvature")
    p.add_argument("complex")

    p = add_parser("embed-check", help="curvature obstruction for mapping K to L")
    p.add_argument("source")
    p.add_argument("target")

    p = add_parser("hom", help="Hom(K,L) cell complex")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--homology", action="store_true")
    p.add_argument("--cells", action="store_true")

    p = add_parser("transport", help="parallel transport along a facet path")
    p.add_argument("complex")
    p.add_argument("coefficients")
    p.add_argument("--path", required=True, help="JSON file with a 'path' list of faces")
    p.add_argument("--k", type=int, help="dimension of the transported faces")
    p.add_argument("--cells", action="store_true")

    p = add_parser("chi", help="exact chromatic number")
    p.add_argument("complex")

    p = add_parser("phi-check", help="invariant-simplex involution check")
    p.add_argument("complex")
    p.add_argument("--involution", required=True, help="JSON vertex_map file")
    p.add_argument("--sigma", required=True, help="invariant simplex, comma-separated")

    p = add_parser("collapse-check", help="vertex collapsibility search")
    p.add_argument("complex")

    p = add_parser("bubble", help="bubble move on a cubical complex")
    p.add_argument("complex")
    p.add_argument("--cubes", required=True, help="top cubes: indices or vertex lists, ';'-separated")
    p.add_argument("--embed", required=True, help="JSON vertex_map file onto the boundary cube")

    p = add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    try:
        payload = _payload(args)
        if args.server:
            doc = _run_remote(args.server, args.command, payload)
        else:
            doc = _run_local(args.command, payload)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_BIG
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(_summary(args.command, doc), file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
