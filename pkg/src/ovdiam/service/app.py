"""HTTP service exposing the workbench: instance encoding and generation,
gadget construction and export, exact diameter, verification suites, and
the two-party simulation. The CLI is a thin client of these endpoints."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..congest import (
    ConfigError,
    NetworkConfig,
    exact_diameter_program,
    ledger_doc,
    lower_bound_budget,
    run,
    two_party_simulate,
)
from ..gadget import (
    GadgetParams,
    ParameterError,
    UnsupportedCut,
    build_gadget,
    cut_partition,
    map_ell,
    negative_control_edge,
    parse_edgelist_text,
    remove_edge,
    to_edgelist_text,
    to_json_doc,
    to_labels_text,
)
from ..metrics import (
    DisconnectedGraphError,
    VerificationReport,
    classify,
    diameter,
    dichotomy_checks,
    distance_bound_checks,
    distance_matrix,
)
from ..ovcore import (
    OVInstance,
    ParseError,
    encode_disjointness,
    encoder_dimension,
    format_disjointness_text,
    format_ov_text,
    has_orthogonal_pair,
    is_intersecting,
    parse_disjointness_text,
    parse_ov_text,
    random_disjointness,
    random_ov,
)
from ..sweeps import param_grid, run_sweep
from . import schemas


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def resolve_params(spec: schemas.ParamsIn) -> GadgetParams:
    if spec.auto_ell:
        if spec.p is not None:
            raise _bad_request(ValueError("auto_ell resolves p; do not pass both"))
        ell, p = map_ell(spec.ell)
        return GadgetParams(ell, p, spec.q)
    return GadgetParams(spec.ell, 0 if spec.p is None else spec.p, spec.q)


def _parse_ov(text: str) -> OVInstance:
    try:
        return parse_ov_text(text)
    except ParseError as exc:
        raise _bad_request(exc) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="ovdiam", version=__version__)

    @app.exception_handler(ParameterError)
    async def _param_error(_, exc):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/encode", response_model=schemas.EncodeResponse)
    def encode(req: schemas.EncodeRequest):
        if (req.text is None) == (req.n is None):
            raise _bad_request(ValueError("give exactly one of 'text' or 'n'"))
        if req.text is not None:
            try:
                inst = parse_disjointness_text(req.text)
            except ParseError as exc:
                raise _bad_request(exc) from exc
        else:
            inst = random_disjointness(req.n, req.seed, req.force)
        ov = encode_disjointness(inst)
        return schemas.EncodeResponse(
            n=inst.n,
            d=ov.dimension,
            ov_text=format_ov_text(ov),
            disjointness_text=format_disjointness_text(inst),
            intersection_index=is_intersecting(inst),
            orthogonal_pair=has_orthogonal_pair(ov),
        )

    @app.post("/generate", response_model=schemas.GenerateResponse)
    def generate(req: schemas.GenerateRequest):
        d = req.d if req.d is not None else encoder_dimension(req.n)
        ov = random_ov(req.n, d, req.seed)
        return schemas.GenerateResponse(n=req.n, d=d, ov_text=format_ov_text(ov))

    @app.post("/gadget", response_model=schemas.GadgetResponse)
    def gadget(req: schemas.GadgetRequest):
        inst = _parse_ov(req.ov_text)
        params = resolve_params(req.params)
        g = build_gadget(inst, params)
        return schemas.GadgetResponse(
            n=g.n,
            d=g.d,
            ell=params.ell,
            p=params.p,
            q=params.q,
            vertex_count=g.vertex_count,
            edge_count=g.edge_count,
            edgelist=to_edgelist_text(g),
            labels=to_labels_text(g),
            graph=to_json_doc(g) if req.include_json else None,
        )

    @app.post("/diameter", response_model=schemas.DiameterResponse)
    def diameter_endpoint(req: schemas.DiameterRequest):
        if (req.ov_text is None) == (req.edgelist is None):
            raise _bad_request(ValueError("give exactly one of 'ov_text' or 'edgelist'"))
        classification = None
        if req.ov_text is not None:
            if req.params is None:
                raise _bad_request(ValueError("params required with ov_text"))
            params = resolve_params(req.params)
            g = build_gadget(_parse_ov(req.ov_text), params)
            adjacency = g.adjacency
        else:
            try:
                n_vertices, edges = parse_edgelist_text(req.edgelist)
            except ParseError as exc:
                raise _bad_request(exc) from exc
            nbrs = [set() for _ in range(n_vertices)]
            for u, v in edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            adjacency = tuple(tuple(sorted(s)) for s in nbrs)
            params = None
        try:
            result = diameter(adjacency)
        except DisconnectedGraphError as exc:
            raise _bad_request(exc) from exc
        if params is not None:
            classification = classify(result.value, params).value
        return schemas.DiameterResponse(
            diameter=result.value,
            witness=(result.witness[0] + 1, result.witness[1] + 1),
            classification=classification,
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest):
        inst = _parse_ov(req.ov_text)
        params = resolve_params(req.params)
        g = build_gadget(inst, params)
        if req.negative_control:
            g = remove_edge(g, *negative_control_edge(g))
        dmat = distance_matrix(g)
        pair = has_orthogonal_pair(inst) is not None
        report = VerificationReport()
        dichotomy_checks(g, pair, dmat, report)
        if req.bounds:
            distance_bound_checks(g, dmat, report)
        d_value = None
        verdict = "inconsistent"
        for check in report.checks:
            if check.name == "diameter" and isinstance(check.actual, int):
                d_value = check.actual
                verdict = classify(d_value, params).value
        return schemas.VerifyResponse(
            passed=report.passed,
            has_pair=pair,
            diameter=d_value,
            classification=verdict,
            checks=[
                schemas.CheckOut(
                    name=c.name,
                    expected=_plain(c.expected),
                    actual=_plain(c.actual),
                    ok=c.ok,
                )
                for c in report.checks
            ],
            text_report=report.to_text(),
        )

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest):
        inst = _parse_ov(req.ov_text)
        params = resolve_params(req.params)
        if params.q < 1:
            raise _bad_request(ValueError("q >= 1 required for the two-party cut"))
        g = build_gadget(inst, params)
        try:
            cut = cut_partition(g)
        except UnsupportedCut as exc:
            raise _bad_request(exc) from exc
        config = NetworkConfig.from_graph(g, bandwidth=req.bandwidth)
        try:
            program = exact_diameter_program(g.vertex_count, config.bandwidth)
        except ConfigError as exc:
            raise _bad_request(exc) from exc
        oracle = diameter(g).value
        trace = run(config, exact_diameter_program(g.vertex_count, config.bandwidth))
        ledger = two_party_simulate(g, cut, program, bandwidth=config.bandwidth)
        outputs = set(ledger.outputs.values())
        program_output = outputs.pop() if len(outputs) == 1 else -1
        return schemas.SimulateResponse(
            ledger=ledger_doc(ledger),
            verdict=classify(program_output, params).value,
            program_output=program_output,
            oracle_diameter=oracle,
            faithful=ledger.outputs == trace.outputs,
            bandwidth=config.bandwidth,
            max_round_cut_bits=ledger.max_round_cut_bits(),
            round_cut_capacity=2 * cut.size * config.bandwidth,
            budget_min_rounds=lower_bound_budget(
                inst.n, cut.size, config.bandwidth
            ),
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        try:
            grid = param_grid(req.ells, req.ps, req.qs)
        except ParameterError as exc:
            raise _bad_request(exc) from exc
        if not grid:
            raise _bad_request(ValueError("empty parameter grid"))
        report = run_sweep(
            grid,
            random_count=req.random_count,
            max_n=req.max_n,
            seed=req.seed,
            exhaustive_max_n=req.exhaustive_max_n,
            exhaustive_max_d=req.exhaustive_max_d,
            check_bounds=req.bounds,
        )
        return schemas.SweepResponse(
            passed=report.passed,
            cells=report.cells,
            failures=report.failures,
            elapsed_s=report.elapsed_s,
        )

    return app


def _plain(value):
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    from ..metrics import Classification

    if isinstance(value, Classification):
        return value.value
    return str(value)


app = create_app()
