# Pydantic models for the JSON documents the command line emits
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


# Core values

class ChainModel(BaseModel):
    """HP chain"""
    labels: str = Field(..., pattern=r'^[HP]+$', description="Node labels, node 0 first")
    topology: Literal['open', 'closed']
    length: int = Field(..., ge=1)


class FoldingModel(BaseModel):
    """Direction string; node 0 at the origin, E = +x, N = +y"""
    steps: str = Field(..., pattern=r'^[ENWS]*$')


class BondGraphModel(BaseModel):
    """H-H contacts as sorted index pairs"""
    contacts: List[Tuple[int, int]]
    contact_count: int = Field(..., ge=0)


class MissingBondModel(BaseModel):
    node: int
    direction: Literal['E', 'N', 'W', 'S']
    external: bool
    wall: Optional[Literal['E', 'N', 'W', 'S']] = None


class NodeBondAccountModel(BaseModel):
    node: int
    bond_degree: int = Field(..., ge=0, le=4)
    internal_missing: int = Field(..., ge=0)
    external_missing: int = Field(..., ge=0)
    endpoint: bool


class MissingBondReportModel(BaseModel):
    """Per-H-node bond degrees and missing bonds"""
    nodes: List[NodeBondAccountModel]
    missing: List[MissingBondModel]
    total_missing: int
    external: int
    internal: int
    by_wall: Dict[str, int]


class BondGraphShapeModel(BaseModel):
    kind: Literal['acyclic_path', 'disjoint_even_cycles', 'other']
    component_sizes: List[int]
    node_count: int = Field(..., ge=0)
    edge_count: int = Field(..., ge=0)


class LatticeTreeModel(BaseModel):
    """Lattice tree as coordinate pairs plus unit edges"""
    size: int = Field(..., ge=1)
    nodes: List[Tuple[int, int]]
    edges: List[Tuple[Tuple[int, int], Tuple[int, int]]]


# Search

class SearchStatsModel(BaseModel):
    nodes_expanded: int
    branches_pruned: int
    wall_time: float
    tasks: int = 1


class SearchResultModel(BaseModel):
    """Optimum and optimal folding classes of one chain"""
    chain: ChainModel
    optimum: int = Field(..., ge=0)
    class_count: int = Field(..., ge=1)
    count_exact: bool = True
    quotient_chain_automorphisms: bool = False
    representatives: List[str]
    stats: SearchStatsModel


class SpectrumResponse(BaseModel):
    """Folding classes per contact count"""
    chain: ChainModel
    spectrum: Dict[int, int]
    stability_gap: Optional[int] = None


# Survey and verification

class SurveyRecordModel(BaseModel):
    n: int = Field(..., ge=1)
    topology: Literal['open', 'closed']
    unique_count: int = Field(..., ge=0)
    total_count: int = Field(..., ge=0)
    percentage: float
    engine_version: str
    elapsed: float
    cursor: int = Field(..., ge=0)
    quotient_chain_automorphisms: bool = True
    complete: bool


class ClaimModel(BaseModel):
    claim: str
    expected: str
    observed: str
    passed: bool


class VerifyReportModel(BaseModel):
    suite: str
    passed: bool
    claims: List[ClaimModel]
    duration_seconds: float


# Command responses

class FamilyResponse(BaseModel):
    """Output of the family command"""
    family: Literal['S', 'F', 'Z', 'Zstd', 'PHP']
    k: int = Field(..., ge=1)
    text: str
    chain: Optional[ChainModel] = None
    folding: Optional[FoldingModel] = None


class FoldingReportResponse(BaseModel):
    """Output of render --format json"""
    chain: ChainModel
    folding: FoldingModel
    points: List[Tuple[int, int]]
    bonds: BondGraphModel
    shape: BondGraphShapeModel
    missing_bonds: MissingBondReportModel


class ErrorResponse(BaseModel):
    """Error document written to stderr"""
    error: str
    detail: Optional[str] = None
    exit_code: int
