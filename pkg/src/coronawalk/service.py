"""FastAPI service wrapping the core package; the CLI covers the same operations."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .charpoly import exact_spectrum
from .corona import corona_closed_form
from .errors import BudgetExceededError, HypothesisError
from .graphs import Graph, build_family, neighborhood_corona, parse_family_spec
from .pgst import pgst_search_generic, pgst_witness_cycle4, pgst_witness_empty_copies
from .pst import certify_pst, corona_no_pst_survey
from .schemas import (
    BuildRequest,
    EigenvalueOut,
    FidelityRequest,
    FidelityResponse,
    GraphInput,
    GraphModel,
    PgstRequest,
    PgstWitnessOut,
    PstCertificateOut,
    PstRequest,
    SpectrumRequest,
    SpectrumResponse,
    VerifyRequest,
    VerifyResponse,
)
from .spectral import eigendecompose, fidelity_series
from .verify import verify_corona

EXACT_ANNOTATION_LIMIT = 64

app = FastAPI(
    title="coronawalk",
    version=__version__,
    description="Quantum-walk state transfer on neighborhood corona graphs.",
)


@app.exception_handler(HypothesisError)
async def _hypothesis_handler(request: Request, exc: HypothesisError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "hypothesis_not_met", "detail": str(exc)})


@app.exception_handler(BudgetExceededError)
async def _budget_handler(request: Request, exc: BudgetExceededError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "budget_exceeded", "detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_handler(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": "bad_input", "detail": str(exc)})


def _resolve(inp: GraphInput) -> tuple[Graph, Graph | None, Graph | None]:
    if inp.graph is not None and (inp.g1 or inp.g2):
        raise ValueError("give either an explicit graph or family specs, not both")
    if inp.graph is not None:
        return inp.graph.to_graph(), None, None
    if inp.g1 and inp.g2:
        g1 = parse_family_spec(inp.g1)
        g2 = parse_family_spec(inp.g2)
        return neighborhood_corona(g1, g2), g1, g2
    if inp.g1:
        return parse_family_spec(inp.g1), None, None
    raise ValueError("no input graph: set 'graph', or 'g1' (and optionally 'g2')")


@app.get("/")
def root() -> dict:
    return {"service": "coronawalk", "version": __version__}


@app.post("/build", response_model=GraphModel)
def build(req: BuildRequest) -> GraphModel:
    g1 = parse_family_spec(req.g1)
    g = neighborhood_corona(g1, parse_family_spec(req.g2)) if req.g2 else g1
    return GraphModel.from_graph(g)


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    g, g1, g2 = _resolve(req)
    if g1 is not None and g2 is not None:
        cd = corona_closed_form(g1, g2, req.cluster_tol)
        eigenvalues = [
            EigenvalueOut(
                multiplicity=item["multiplicity"],
                origin=item["origin"],
                exact=item["value"],
            )
            for item in cd.eigenvalue_dicts()
        ]
        return SpectrumResponse(n=cd.n, closed_form=True, eigenvalues=eigenvalues)
    d = eigendecompose(g, req.cluster_tol)
    spec = exact_spectrum(g.adjacency) if g.n <= EXACT_ANNOTATION_LIMIT else None
    eigenvalues = []
    for e in d.entries:
        exact = spec.match(e.value) if spec is not None else None
        eigenvalues.append(
            EigenvalueOut(
                multiplicity=e.multiplicity,
                value=e.value,
                exact=exact.render() if exact is not None else None,
            )
        )
    return SpectrumResponse(n=g.n, closed_form=False, eigenvalues=eigenvalues)


@app.post("/fidelity", response_model=FidelityResponse)
def fidelity(req: FidelityRequest) -> FidelityResponse:
    g, _, _ = _resolve(req)
    d = eigendecompose(g)
    series = fidelity_series(d, req.u, req.v, req.t_max, req.steps)
    return FidelityResponse(times=series.times.tolist(), fidelities=series.fidelities.tolist())


@app.post("/check-pst", response_model=PstCertificateOut)
def check_pst(req: PstRequest) -> PstCertificateOut:
    g, g1, g2 = _resolve(req)
    cert = certify_pst(g, req.u, req.v, req.cluster_tol, req.support_tol)
    payload = cert.to_dict()
    if g1 is not None and g2 is not None:
        payload["theorem_reports"] = [r.to_dict() for r in corona_no_pst_survey(g1, g2)]
    return PstCertificateOut(**payload)


@app.post("/search-pgst", response_model=PgstWitnessOut)
def search_pgst(req: PgstRequest) -> PgstWitnessOut:
    g, g1, g2 = _resolve(req)
    construction = req.construction
    if construction == "auto":
        if g1 is not None and g2 is not None and g2.edge_count() == 0:
            construction = "empty-copies"
        elif g1 is not None and g1 == build_family("cycle", 4):
            construction = "cycle4"
        else:
            construction = "scan"
    if construction == "empty-copies":
        if g1 is None or g2 is None:
            raise ValueError("empty-copies construction needs g1 and g2")
        if g2.edge_count() != 0:
            raise HypothesisError("empty-copies construction needs an edgeless second factor")
        wit = pgst_witness_empty_copies(
            g1, req.u, req.v, g2.n, req.epsilon, req.alpha_max, threads=req.threads
        )
    elif construction == "cycle4":
        if g1 is None or g2 is None:
            raise ValueError("cycle4 construction needs g1 and g2")
        if g1 != build_family("cycle", 4):
            raise HypothesisError("cycle4 construction needs g1 = cycle:4")
        wit = pgst_witness_cycle4(
            g2, req.epsilon, req.alpha_max, u=req.u, v=req.v, threads=req.threads
        )
    else:
        wit = pgst_search_generic(g, req.u, req.v, req.epsilon, req.t_max, req.steps)
    return PgstWitnessOut(**wit.to_dict())


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    g1 = parse_family_spec(req.g1)
    g2 = parse_family_spec(req.g2)
    provided = req.graph.to_graph() if req.graph is not None else None
    report = verify_corona(
        g1, g2,
        eig_tol=req.eig_tol, proj_tol=req.proj_tol, amp_tol=req.amp_tol,
        provided=provided,
    )
    return VerifyResponse(**report)
