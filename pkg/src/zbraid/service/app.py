"""
FastAPI service wrapping the core package. Every computation the CLI exposes
is an endpoint here; the CLI is a thin client speaking these schemas over an
in-process ASGI transport or HTTP.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import checks, lattice, lexgerm, matrices, presentation, wordfmt
from ..bruhat import BraidGerm
from ..garside import ZnGerm, group_eq, group_normal_form
from ..matrices import ZbraidError
from .schemas import (
    CheckRequest,
    CheckResponse,
    ConnectRequest,
    ConnectResponse,
    CosetResponse,
    DecomposeRequest,
    DecomposeResponse,
    EqResponse,
    GroupNFResponse,
    MatrixPairRequest,
    PrecedesResponse,
    RewriteTypeRequest,
    RewriteTypeResponse,
    TwoWordRequest,
    WordRequest,
)


def _germ_and_word(req):
    if req.germ.kind == "zn":
        n = req.germ.size
        return ZnGerm(n), wordfmt.parse_signed_word(req.word, n)
    m = req.germ.size
    return BraidGerm(m), wordfmt.parse_perm_signed_word(req.word, m)


def _nf_payload(germ, gnf) -> GroupNFResponse:
    if isinstance(germ, ZnGerm):
        body = [matrices.matrix_to_json(m) for m in gnf.body.letters]
        text = wordfmt.format_group_nf(gnf.k, gnf.body.letters)
    else:
        body = [list(p) for p in gnf.body.letters]
        text = wordfmt.format_group_nf(gnf.k, gnf.body.letters, fmt=wordfmt.format_perm)
    return GroupNFResponse(k=gnf.k, body=body, text=text)


def create_app() -> FastAPI:
    app = FastAPI(
        title="zbraid",
        description="Exact pseudo-Garside engine for the braid group of Z^n",
        version="0.1.0",
    )

    @app.exception_handler(ZbraidError)
    async def _domain_error(_, exc: ZbraidError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/nf", response_model=GroupNFResponse)
    def nf(req: WordRequest):
        germ, word = _germ_and_word(req)
        return _nf_payload(germ, group_normal_form(germ, word))

    @app.post("/eq", response_model=EqResponse)
    def eq(req: TwoWordRequest):
        germ, left = _germ_and_word(WordRequest(germ=req.germ, word=req.left))
        _, right = _germ_and_word(WordRequest(germ=req.germ, word=req.right))
        a = group_normal_form(germ, left)
        b = group_normal_form(germ, right)
        return EqResponse(equal=group_eq(a, b))

    @app.post("/mul", response_model=GroupNFResponse)
    def mul(req: TwoWordRequest):
        germ, left = _germ_and_word(WordRequest(germ=req.germ, word=req.left))
        _, right = _germ_and_word(WordRequest(germ=req.germ, word=req.right))
        return _nf_payload(germ, group_normal_form(germ, left + right))

    @app.post("/inv", response_model=GroupNFResponse)
    def inv(req: WordRequest):
        germ, word = _germ_and_word(req)
        flipped = [(m, -s) for m, s in reversed(word)]
        return _nf_payload(germ, group_normal_form(germ, flipped))

    @app.post("/precedes", response_model=PrecedesResponse)
    def precedes(req: MatrixPairRequest):
        a = wordfmt.parse_letter(req.left, req.dim)
        c = wordfmt.parse_letter(req.right, req.dim)
        witness = lexgerm.precedes_witness(a, c)
        return PrecedesResponse(result=witness is None, witness=list(witness) if witness else None)

    @app.post("/join", response_model=CosetResponse)
    def join(req: MatrixPairRequest):
        a = wordfmt.parse_letter(req.left, req.dim)
        b = wordfmt.parse_letter(req.right, req.dim)
        out = lattice.join(lattice.coset(a), lattice.coset(b))
        trace = None
        if req.trace:
            from ..cones import minkowski_sum
            from ..lattice import u0_set

            trace = minkowski_sum(u0_set(lattice.coset(a).rep), u0_set(lattice.coset(b).rep)).dump()
        return CosetResponse(rep=matrices.matrix_to_json(out.rep), text=matrices.format_matrix(out.rep), trace=trace)

    @app.post("/meet", response_model=CosetResponse)
    def meet(req: MatrixPairRequest):
        a = wordfmt.parse_letter(req.left, req.dim)
        b = wordfmt.parse_letter(req.right, req.dim)
        out = lattice.meet(lattice.coset(a), lattice.coset(b))
        return CosetResponse(rep=matrices.matrix_to_json(out.rep), text=matrices.format_matrix(out.rep))

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose(req: DecomposeRequest):
        x = wordfmt.parse_letter(req.matrix, req.dim)
        word = presentation.decompose(x)
        letters = [{"matrix": matrices.matrix_to_json(m), "tag": t} for m, t in word]
        return DecomposeResponse(
            letters=letters,
            minimal=presentation.sword_minimal(word, req.dim),
            text=wordfmt.format_word([m for m, _ in word]),
        )

    @app.post("/rewrite-type", response_model=RewriteTypeResponse)
    def rewrite_type(req: RewriteTypeRequest):
        log = presentation.t_rewrite_to_D1(tuple(req.type_word), req.dim)
        result = presentation.replay_t_derivation(tuple(req.type_word), log, req.dim)
        steps = [
            {"rule": st["rule"], "pos": st["pos"], "param": st["param"], "after": list(st["after"])}
            for st in log
        ]
        return RewriteTypeResponse(derivation=steps, result=list(result))

    @app.post("/connect", response_model=ConnectResponse)
    def connect(req: ConnectRequest):
        w1 = wordfmt.parse_sword(req.left, req.dim)
        w2 = wordfmt.parse_sword(req.right, req.dim)
        deriv = presentation.connect(w1, w2, req.dim, max_moves=req.max_moves)
        steps = []
        cur = w1
        for st in deriv:
            cur = presentation.s_move(cur, st["rule"], st["pos"], st.get("params"), req.dim)
            steps.append(
                {
                    "rule": st["rule"],
                    "pos": st["pos"],
                    "params": _json_params(st.get("params")),
                    "word_after": [matrices.matrix_to_json(m) for m, _ in cur],
                }
            )
        return ConnectResponse(derivation=steps, moves=len(steps))

    @app.post("/check", response_model=CheckResponse)
    def check(req: CheckRequest):
        dim = req.germ.size if req.germ.kind == "zn" else req.germ.strands
        try:
            rep = checks.run_suite(req.suite, dim=None if req.suite != "bruhat-oracle" else dim,
                                   trials=req.trials, seed=req.seed)
        except ZbraidError as e:
            raise HTTPException(status_code=422, detail=str(e))
        return CheckResponse(suite=rep.suite, passed=rep.passed, lines=rep.lines, seconds=rep.seconds)

    return app


def _json_params(params):
    if params is None:
        return None
    out = {}
    for k, v in params.items():
        if k in ("split",):
            out[k] = matrices.matrix_to_json(v)
        elif k == "replacement":
            out[k] = [{"matrix": matrices.matrix_to_json(m), "tag": t} for m, t in v]
        elif k == "tags":
            out[k] = list(v)
        else:
            out[k] = v
    return out


app = create_app()
