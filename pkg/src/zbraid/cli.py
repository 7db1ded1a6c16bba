"""
zbraid: batch command line for the braid group of Z^n.

The CLI is a thin client of the FastAPI service: every verb builds a request
model and posts it to the service, by default over an in-process ASGI
transport (no server needed), or to a running server via --url. Exit codes:
0 success (and "true"/equal for predicate verbs), 1 predicate false/unequal
or failed check suite, 2 malformed input or internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx


def _client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    # in-process ASGI transport: the CLI stays a client of the same service
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _germ_payload(args) -> dict:
    if args.germ == "zn":
        return {"kind": "zn", "dim": args.dim}
    return {"kind": "braid", "strands": args.strands}


def _post(args, path: str, payload: dict) -> dict:
    with _client(args.url) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail")
        except Exception:
            detail = resp.text
        _fail(f"error: {detail}")
    return resp.json()


def _fail(msg: str) -> None:
    print(msg, file=sys.stderr)
    sys.exit(2)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_nf(args):
    data = _post(args, "/nf", {"germ": _germ_payload(args), "word": args.word, "trace": args.trace})
    _emit(args, data, data["text"])
    return 0


def cmd_eq(args):
    data = _post(args, "/eq", {"germ": _germ_payload(args), "left": args.left, "right": args.right})
    _emit(args, data, "equal" if data["equal"] else "unequal")
    return 0 if data["equal"] else 1


def cmd_mul(args):
    data = _post(args, "/mul", {"germ": _germ_payload(args), "left": args.left, "right": args.right})
    _emit(args, data, data["text"])
    return 0


def cmd_inv(args):
    data = _post(args, "/inv", {"germ": _germ_payload(args), "word": args.word})
    _emit(args, data, data["text"])
    return 0


def cmd_precedes(args):
    data = _post(args, "/precedes", {"dim": args.dim, "left": args.left, "right": args.right})
    if data["result"]:
        _emit(args, data, "true")
        return 0
    witness = " ".join(str(v) for v in data["witness"])
    _emit(args, data, f"false\nwitness: {witness}")
    return 1


def cmd_join(args):
    data = _post(args, "/join", {"dim": args.dim, "left": args.left, "right": args.right, "trace": args.trace})
    text = data["text"] + (("\n" + data["trace"]) if args.trace and data.get("trace") else "")
    _emit(args, data, text)
    return 0


def cmd_meet(args):
    data = _post(args, "/meet", {"dim": args.dim, "left": args.left, "right": args.right})
    _emit(args, data, data["text"])
    return 0


def cmd_leq(args):
    data = _post(args, "/precedes", {"dim": args.dim, "left": args.left, "right": args.right})
    _emit(args, data, "true" if data["result"] else "false")
    return 0 if data["result"] else 1


def cmd_decompose(args):
    data = _post(args, "/decompose", {"dim": args.dim, "matrix": args.matrix})
    lines = [data["text"], f"minimal: {str(data['minimal']).lower()}"]
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_rewrite_type(args):
    tword = [int(t) for t in args.type_word.split()]
    data = _post(args, "/rewrite-type", {"dim": args.dim, "type_word": tword})
    lines = []
    if args.trace:
        for st in data["derivation"]:
            lines.append(f"{st['rule']} @{st['pos']}" + (f" {st['param']}" if st.get("param") else "")
                         + " -> " + " ".join(str(v) for v in st["after"]))
    lines.append("result: " + " ".join(str(v) for v in data["result"]))
    lines.append(f"steps: {len(data['derivation'])}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_connect(args):
    data = _post(
        args,
        "/connect",
        {"dim": args.dim, "left": args.left, "right": args.right, "max_moves": args.depth},
    )
    lines = [f"moves: {data['moves']}"]
    if args.trace:
        for st in data["derivation"]:
            lines.append(f"{st['rule']} @{st['pos']}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_check(args):
    payload = {"suite": args.suite, "germ": _germ_payload(args), "seed": args.seed}
    if args.trials:
        payload["trials"] = args.trials
    data = _post(args, "/check", payload)
    # timings stay out of the output: identical command + seed must print
    # byte-identical results
    data = {k: v for k, v in data.items() if k != "seconds"}
    lines = list(data["lines"])
    lines.append(f"suite {data['suite']}: {'PASS' if data['passed'] else 'FAIL'}")
    _emit(args, data, "\n".join(lines))
    return 0 if data["passed"] else 1


def cmd_serve(args):
    import uvicorn

    uvicorn.run("zbraid.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--url", help="talk to a running zbraid service instead of in-process")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="zbraid", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="verb", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def germ_opts(sp):
        sp.add_argument("--germ", choices=["zn", "braid"], default="zn")
        sp.add_argument("--dim", type=int, default=2, help="n for the Z^n germ")
        sp.add_argument("--strands", type=int, default=3, help="m for the braid germ")

    def dim_opt(sp):
        sp.add_argument("--dim", type=int, default=2)

    sp = add_parser("nf", help="Delta-power normal form of a signed word")
    germ_opts(sp)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_nf)

    sp = add_parser("eq", help="equality of two signed words in the group")
    germ_opts(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_eq)

    sp = add_parser("mul", help="normal form of a product of two words")
    germ_opts(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_mul)

    sp = add_parser("inv", help="normal form of the inverse of a word")
    germ_opts(sp)
    sp.add_argument("word")
    sp.set_defaults(func=cmd_inv)

    sp = add_parser("precedes", help="decide a ≲ c; prints a witness when false")
    dim_opt(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_precedes)

    sp = add_parser("leq", help="coset order aH <= bH")
    dim_opt(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_leq)

    sp = add_parser("join", help="join of two cosets (canonical representative)")
    dim_opt(sp)
    sp.add_argument("--trace", action="store_true", help="dump the Minkowski-summed difference set")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_join)

    sp = add_parser("meet", help="meet of two cosets (canonical representative)")
    dim_opt(sp)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_meet)

    sp = add_parser("decompose", help="minimal S-word for a matrix")
    dim_opt(sp)
    sp.add_argument("matrix")
    sp.set_defaults(func=cmd_decompose)

    sp = add_parser("rewrite-type", help="rewrite a type word to the standard type D1")
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("type_word", help="e.g. '1 2 1'")
    sp.set_defaults(func=cmd_rewrite_type)

    sp = add_parser("connect", help="(S0)-(S3) derivation between two minimal S-words")
    sp.add_argument("--dim", type=int, default=2)
    sp.add_argument("--depth", type=int, default=4000, help="move budget")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_connect)

    sp = add_parser("check", help="run a named property suite")
    germ_opts(sp)
    sp.add_argument("--suite", required=True,
                    choices=["germ-laws", "nset", "lattice-laws", "join-leastness",
                             "nf-stability", "bruhat-oracle", "classical-engine",
                             "presentation", "connect"])
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--depth", type=int, default=4000)
    sp.set_defaults(func=cmd_check)

    sp = add_parser("serve", help="run the zbraid service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except Exception as e:  # pragma: no cover - unexpected internal errors
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
