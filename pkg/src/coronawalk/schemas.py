"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .graphs import Graph, graph_from_dict, graph_to_dict


class GraphModel(BaseModel):
    n: int
    edges: list[tuple[int, int]]
    labels: list[str] | None = None

    @classmethod
    def from_graph(cls, g: Graph) -> "GraphModel":
        return cls(**graph_to_dict(g))

    def to_graph(self) -> Graph:
        return graph_from_dict(self.model_dump(exclude_none=True))


class BuildRequest(BaseModel):
    g1: str = Field(description="family spec, e.g. 'cycle:4'")
    g2: str | None = Field(default=None, description="second factor; builds the corona when set")


class GraphInput(BaseModel):
    """A working graph: either an explicit graph, or family specs (corona when both set)."""

    graph: GraphModel | None = None
    g1: str | None = None
    g2: str | None = None


class SpectrumRequest(GraphInput):
    cluster_tol: float = 1e-8


class EigenvalueOut(BaseModel):
    multiplicity: int
    value: float | None = None
    origin: str | None = None
    exact: str | None = None


class SpectrumResponse(BaseModel):
    n: int
    closed_form: bool
    eigenvalues: list[EigenvalueOut]


class FidelityRequest(GraphInput):
    u: int
    v: int
    t_max: float = 20.0
    steps: int = 2001


class FidelityResponse(BaseModel):
    times: list[float]
    fidelities: list[float]


class PstRequest(GraphInput):
    u: int
    v: int
    cluster_tol: float = 1e-8
    support_tol: float = 1e-8


class PhaseOut(BaseModel):
    re: float
    im: float


class TheoremReportOut(BaseModel):
    kind: str
    parameters: dict
    conclusion: str


class PstCertificateOut(BaseModel):
    verdict: str
    u: int
    v: int
    failed_condition: str | None = None
    delta: int | None = None
    g: int | None = None
    tau0: float | None = None
    phase: PhaseOut | None = None
    fidelity_at_tau0: float | None = None
    support: list[str] = []
    s_plus: list[str] = []
    s_minus: list[str] = []
    theorem_reports: list[TheoremReportOut] = []


class PgstRequest(GraphInput):
    u: int
    v: int
    epsilon: float
    alpha_max: int = 10**6
    construction: str = Field(default="auto", pattern="^(auto|empty-copies|cycle4|scan)$")
    t_max: float = 200.0
    steps: int = 200001
    threads: int = 1


class Time0Out(BaseModel):
    coeff_of_pi: str | None = None
    float: float  # noqa: A003 - mirrors the CLI JSON field name


class PgstWitnessOut(BaseModel):
    u: int
    v: int
    t0: Time0Out
    fidelity: float
    epsilon: float
    construction: str
    meets_target: bool
    alpha: int | None = None
    radicands: list[int] | None = None
    c_values: list[int] | None = None
    residuals: list[float] | None = None
    residual_bound: float | None = None


class VerifyRequest(BaseModel):
    g1: str
    g2: str
    graph: GraphModel | None = None
    eig_tol: float = 1e-8
    proj_tol: float = 1e-9
    amp_tol: float = 1e-9


class VerifyCheckOut(BaseModel):
    name: str
    passed: bool
    max_deviation: float | None = None


class VerifyResponse(BaseModel):
    passed: bool
    n: int
    checks: list[VerifyCheckOut]
