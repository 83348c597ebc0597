"""HTTP service exposing the library: one POST endpoint per command.

Handlers are plain functions on pydantic models so the CLI can call them
in-process; the FastAPI app is a thin wrapper that converts package
exceptions into HTTP errors (400 for bad input, 413 for size-guard
refusals).  All endpoints are stateless and deterministic.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import coloring, cubical, homcomplex, homology
from .complexes import (
    CubicalComplex,
    SimplicialComplex,
    complex_from_json,
    complex_to_json,
    map_from_json,
)
from .errors import SizeLimitError, ValidationError
from .groupoid import holonomy_group

Label = Union[int, str]


class ComplexModel(BaseModel):
    """Wire form of a complex, matching the JSON file format."""

    type: Literal["simplicial", "cubical"]
    facets: Optional[list[list[Label]]] = None
    dim: Optional[int] = None
    cubes: Optional[list[list[Label]]] = None

    def to_complex(self):
        return complex_from_json(self.model_dump(exclude_none=True))

    @classmethod
    def from_complex(cls, K):
        return cls(**complex_to_json(K))


class VertexMapModel(BaseModel):
    vertex_map: dict[str, Label]


def _vertex_map(model, source, target):
    return map_from_json(model.model_dump(), source, target)


def _labels(K, raw):
    from .complexes import coerce_label

    return [coerce_label(v, K) for v in raw]


# ---------------------------------------------------------------------------
# holonomy


class HolonomyRequest(BaseModel):
    complex: ComplexModel
    base: Optional[list[Label]] = None


class HolonomyResponse(BaseModel):
    base: list[Label]
    order: int
    element_orders: list[int]
    abelian: bool
    generators: list[dict[str, Label]]


def run_holonomy(req: HolonomyRequest) -> HolonomyResponse:
    K = req.complex.to_complex()
    if req.base is not None:
        base = _labels(K, req.base)
    elif isinstance(K, CubicalComplex):
        base = list(K.cubes[0].vertex_set)
    else:
        base = list(K.facets[0])
    group = holonomy_group(K, base)
    return HolonomyResponse(
        base=list(group.base),
        order=group.order,
        element_orders=list(group.element_orders),
        abelian=group.is_abelian,
        generators=[{str(v): w for v, w in g.mapping} for g in group.generators],
    )


# ---------------------------------------------------------------------------
# cubical invariants


class InvariantRequest(BaseModel):
    complex: ComplexModel


class InvariantResponse(BaseModel):
    I: int
    Z_chain: Union[int, Literal["inf"]]
    CC: str
    witness: Optional[list[list[Label]]]


def _invariant_payload(K) -> InvariantResponse:
    report = cubical.curvature_CC(K)
    data = report.as_json()
    return InvariantResponse(**data)


def run_invariant(req: InvariantRequest) -> InvariantResponse:
    K = req.complex.to_complex()
    if not isinstance(K, CubicalComplex):
        raise ValidationError("the parity invariant is defined for cubical complexes")
    return _invariant_payload(K)


class EmbedCheckRequest(BaseModel):
    source: ComplexModel
    target: ComplexModel


class EmbedCheckResponse(BaseModel):
    verdict: Literal["obstructed", "inconclusive"]
    source: InvariantResponse
    target: InvariantResponse


def run_embed_check(req: EmbedCheckRequest) -> EmbedCheckResponse:
    K = req.source.to_complex()
    L = req.target.to_complex()
    if not isinstance(K, CubicalComplex) or not isinstance(L, CubicalComplex):
        raise ValidationError("embed-check needs two cubical complexes")
    report = cubical.embed_obstruction(K, L)
    return EmbedCheckResponse(
        verdict=report.verdict,
        source=InvariantResponse(**report.source.as_json()),
        target=InvariantResponse(**report.target.as_json()),
    )


class BubbleRequest(BaseModel):
    complex: ComplexModel
    cubes: list[Union[int, list[Label]]]
    embed: dict[str, int]


class BubbleResponse(BaseModel):
    I_before: int
    I_after: int
    complex: ComplexModel


def run_bubble(req: BubbleRequest) -> BubbleResponse:
    K = req.complex.to_complex()
    if not isinstance(K, CubicalComplex):
        raise ValidationError("bubble moves need a cubical complex")
    from .complexes import coerce_label

    selection = [
        item if isinstance(item, int) else _labels(K, item) for item in req.cubes
    ]
    embed = {coerce_label(k, K): v for k, v in req.embed.items()}
    before = cubical.invariant_I(K)
    moved = cubical.bubble_move(K, selection, embed)
    return BubbleResponse(
        I_before=before,
        I_after=cubical.invariant_I(moved),
        complex=ComplexModel.from_complex(moved),
    )


# ---------------------------------------------------------------------------
# Hom complexes


class HomRequest(BaseModel):
    source: ComplexModel
    target: ComplexModel
    homology: bool = False
    cells: bool = False
    max_cells: Optional[int] = None


class BettiModel(BaseModel):
    empty: bool
    reduced_betti: list[int]
    torsion: list[list[int]]


class CellModel(BaseModel):
    eta: dict[str, list[Label]]
    dim: int


class HomResponse(BaseModel):
    cell_count: int
    cells_by_dim: dict[int, int]
    hom0_count: int
    hom0: list[dict[str, Label]]
    homology: Optional[BettiModel] = None
    cells: Optional[list[CellModel]] = None


def _require_simplicial(K, what):
    if not isinstance(K, SimplicialComplex):
        raise ValidationError(f"{what} must be simplicial")
    return K


def run_hom(req: HomRequest) -> HomResponse:
    K = _require_simplicial(req.source.to_complex(), "source")
    L = _require_simplicial(req.target.to_complex(), "target")
    H = homcomplex.hom_complex(K, L, max_cells=req.max_cells)
    out = HomResponse(
        cell_count=H.n_cells(),
        cells_by_dim={q: H.n_cells(q) for q in range(H.dim + 1)} if not H.is_empty else {},
        hom0_count=H.n_cells(0),
        hom0=[{str(v): w for v, w in vm.items()} for vm in H.vertex_maps()],
    )
    if req.homology:
        profile = homology.betti(homcomplex.hom_chain_complex(H))
        out.homology = BettiModel(**profile.as_json())
    if req.cells:
        out.cells = [
            CellModel(eta=H.eta_json(c), dim=H.cell_dim(c)) for c in H.cells
        ]
    return out


class TransportRequest(BaseModel):
    complex: ComplexModel
    coefficients: ComplexModel
    path: list[list[Label]]
    k: Optional[int] = None
    cells: bool = False


class ProjectivityModel(BaseModel):
    source: list[Label]
    target: list[Label]
    vertex_map: dict[str, Label]


class TransportResponse(BaseModel):
    projectivity: ProjectivityModel
    fiber_cells: int
    matches_composite: bool
    cell_map: Optional[list[list[int]]] = None


def run_transport(req: TransportRequest) -> TransportResponse:
    K = _require_simplicial(req.complex.to_complex(), "complex")
    L = _require_simplicial(req.coefficients.to_complex(), "coefficients")
    path = [_labels(K, f) for f in req.path]
    result = homcomplex.transport(K, L, path, k=req.k)
    direct = homcomplex.precompose_by_projectivity(
        result.projectivity, L, result.fiber_last, result.fiber_first
    )
    p = result.projectivity
    out = TransportResponse(
        projectivity=ProjectivityModel(
            source=list(p.source),
            target=list(p.target),
            vertex_map={str(v): w for v, w in p.mapping},
        ),
        fiber_cells=result.fiber_last.n_cells(),
        matches_composite=direct.mapping == result.cell_map.mapping,
    )
    if req.cells:
        out.cell_map = [[i, j] for i, j in enumerate(result.cell_map.mapping)]
    return out


# ---------------------------------------------------------------------------
# coloring


class ChiRequest(BaseModel):
    complex: ComplexModel


class ChiResponse(BaseModel):
    chi: int
    witness: dict[str, int]
    clique: Optional[list[Label]]


def run_chi(req: ChiRequest) -> ChiResponse:
    K = _require_simplicial(req.complex.to_complex(), "complex")
    cert = coloring.chi(K)
    return ChiResponse(
        chi=cert.value,
        witness={str(v): c for v, c in cert.witness.vertex_map},
        clique=list(cert.clique) if cert.clique else None,
    )


class PhiCheckRequest(BaseModel):
    complex: ComplexModel
    involution: VertexMapModel
    sigma: list[Label]


class PhiCheckResponse(BaseModel):
    is_phi: bool
    sigma: list[Label]
    tau: Optional[dict[str, Label]]
    evidence: Optional[list[list[Label]]]
    reason: str


def run_phi_check(req: PhiCheckRequest) -> PhiCheckResponse:
    gamma = _require_simplicial(req.complex.to_complex(), "complex")
    omega = _vertex_map(req.involution, gamma, gamma)
    verdict = coloring.is_phi_complex(gamma, omega.as_dict, _labels(gamma, req.sigma))
    return PhiCheckResponse(**verdict.as_json())


class CollapseCheckRequest(BaseModel):
    complex: ComplexModel


class CollapseCheckResponse(BaseModel):
    collapsible: Optional[bool]
    sequence: list[list[Label]]


def run_collapse_check(req: CollapseCheckRequest) -> CollapseCheckResponse:
    K = _require_simplicial(req.complex.to_complex(), "complex")
    result = coloring.vertex_collapsible(K)
    return CollapseCheckResponse(**result.as_json())


# ---------------------------------------------------------------------------
# app wiring

app = FastAPI(
    title="holonomy",
    description="Holonomy groups, cubical parity invariants and Hom-complex transport.",
)

def _guarded(handler, req):
    try:
        return handler(req)
    except SizeLimitError as exc:
        raise HTTPException(status_code=413, detail=str(exc)) from exc
    except ValidationError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/holonomy", response_model=HolonomyResponse)
def holonomy_endpoint(req: HolonomyRequest):
    return _guarded(run_holonomy, req)


@app.post("/invariant", response_model=InvariantResponse)
def invariant_endpoint(req: InvariantRequest):
    return _guarded(run_invariant, req)


@app.post("/embed-check", response_model=EmbedCheckResponse)
def embed_check_endpoint(req: EmbedCheckRequest):
    return _guarded(run_embed_check, req)


@app.post("/hom", response_model=HomResponse, response_model_exclude_none=True)
def hom_endpoint(req: HomRequest):
    return _guarded(run_hom, req)


@app.post("/transport", response_model=TransportResponse, response_model_exclude_none=True)
def transport_endpoint(req: TransportRequest):
    return _guarded(run_transport, req)


@app.post("/chi", response_model=ChiResponse)
def chi_endpoint(req: ChiRequest):
    return _guarded(run_chi, req)


@app.post("/phi-check", response_model=PhiCheckResponse)
def phi_check_endpoint(req: PhiCheckRequest):
    return _guarded(run_phi_check, req)


@app.post("/collapse-check", response_model=CollapseCheckResponse)
def collapse_check_endpoint(req: CollapseCheckRequest):
    return _guarded(run_collapse_check, req)


@app.post("/bubble", response_model=BubbleResponse)
def bubble_endpoint(req: BubbleRequest):
    return _guarded(run_bubble, req)


@app.get("/health")
def health():
    return {"status": "ok"}

# command names shared with the CLI
HANDLERS = {
    "holonomy": (HolonomyRequest, run_holonomy),
    "invariant": (InvariantRequest, run_invariant),
    "embed-check": (EmbedCheckRequest, run_embed_check),
    "hom": (HomRequest, run_hom),
    "transport": (TransportRequest, run_transport),
    "chi": (ChiRequest, run_chi),
    "phi-check": (PhiCheckRequest, run_phi_check),
    "collapse-check": (CollapseCheckRequest, run_collapse_check),
    "bubble": (BubbleRequest, run_bubble),
}
