"""Pydantic request/response models for the service endpoints."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ParamsIn(BaseModel):
    """Gadget parameters. Either give (ell, p, q) directly, or set
    auto_ell=True to have ell interpreted as a target separation length
    and split into (ell', p) automatically."""

    ell: int = Field(ge=1)
    p: Optional[int] = Field(default=None, ge=0, le=1)
    q: int = Field(default=1, ge=0)
    auto_ell: bool = False


class EncodeRequest(BaseModel):
    text: Optional[str] = None  # intersection-instance text
    n: Optional[int] = Field(default=None, ge=1)  # random instance size
    seed: int = 0
    force: Optional[Literal["intersecting", "disjoint"]] = None


class EncodeResponse(BaseModel):
    n: int
    d: int
    ov_text: str
    disjointness_text: str
    intersection_index: Optional[int]
    orthogonal_pair: Optional[tuple[int, int]]


class GenerateRequest(BaseModel):
    n: int = Field(ge=1)
    d: Optional[int] = Field(default=None, ge=1)  # default: encoder dimension
    seed: int = 0


class GenerateResponse(BaseModel):
    n: int
    d: int
    ov_text: str


class GadgetRequest(BaseModel):
    ov_text: str
    params: ParamsIn
    include_json: bool = False


class GadgetResponse(BaseModel):
    n: int
    d: int
    ell: int
    p: int
    q: int
    vertex_count: int
    edge_count: int
    edgelist: str
    labels: str
    graph: Optional[dict] = None


class DiameterRequest(BaseModel):
    ov_text: Optional[str] = None
    params: Optional[ParamsIn] = None
    edgelist: Optional[str] = None  # hand-supplied graph, bypasses the builder


class DiameterResponse(BaseModel):
    diameter: int
    witness: tuple[int, int]  # 1-based vertex ids, as in the edge-list format
    classification: Optional[str] = None


class CheckOut(BaseModel):
    name: str
    expected: object
    actual: object
    ok: bool


class VerifyRequest(BaseModel):
    ov_text: str
    params: ParamsIn
    negative_control: bool = False
    bounds: bool = True


class VerifyResponse(BaseModel):
    passed: bool
    has_pair: bool
    diameter: Optional[int]
    classification: str
    checks: list[CheckOut]
    text_report: str


class SimulateRequest(BaseModel):
    ov_text: str
    params: ParamsIn
    bandwidth: Optional[int] = Field(default=None, ge=1)


class SimulateResponse(BaseModel):
    ledger: dict
    verdict: str
    program_output: int
    oracle_diameter: int
    faithful: bool
    bandwidth: int
    max_round_cut_bits: int
    round_cut_capacity: int  # 2 * cut_size * bandwidth
    budget_min_rounds: int  # rounds forced if n bits must cross the cut


class SweepRequest(BaseModel):
    ells: list[int] = [1, 2]
    ps: list[int] = [0, 1]
    qs: list[int] = [0, 1, 2]
    random_count: int = Field(default=25, ge=0)
    max_n: int = Field(default=4, ge=1)
    seed: int = 0
    exhaustive_max_n: int = Field(default=0, ge=0)
    exhaustive_max_d: int = Field(default=0, ge=0)
    bounds: bool = True


class SweepResponse(BaseModel):
    passed: bool
    cells: int
    failures: list[str]
    elapsed_s: float


class HealthResponse(BaseModel):
    status: str
    version: str
