"""
HP lattice folding engine - Core Package
"""
from .config import ENGINE_VERSION, Settings, get_settings
from .core import (
    BondGraph,
    Chain,
    Embedding,
    Folding,
    InvalidChainError,
    InvalidFoldingError,
    MissingBondReport,
    Topology,
    bond_graph_shape,
    canonicalize,
    contacts,
    embed,
    equivalent,
    isometric,
    max_contact_bound,
    missing_bonds,
    parse_chain,
)
from .render import render
from .search import (
    SearchLimitError,
    SearchOptions,
    SearchResult,
    enumerate_optimal,
    is_unique,
    naive_oracle,
)
from .families import (
    FamilyParameterError,
    LatticeTree,
    enumerate_lattice_trees,
    gen_F,
    gen_PHP,
    gen_S,
    gen_Z,
    standard_Z_embedding,
    tree_to_folding,
)
from .survey import CheckpointError, SurveyRecord, find_unique_examples, sweep, verify_odd_Z

__all__ = [
    'Settings',
    'get_settings',
    'Chain',
    'Folding',
    'Embedding',
    'BondGraph',
    'MissingBondReport',
    'Topology',
    'InvalidChainError',
    'InvalidFoldingError',
    'parse_chain',
    'embed',
    'contacts',
    'max_contact_bound',
    'canonicalize',
    'isometric',
    'equivalent',
    'missing_bonds',
    'bond_graph_shape',
    'render',
    'SearchOptions',
    'SearchResult',
    'SearchLimitError',
    'enumerate_optimal',
    'naive_oracle',
    'is_unique',
    'FamilyParameterError',
    'LatticeTree',
    'gen_S',
    'gen_F',
    'gen_Z',
    'standard_Z_embedding',
    'gen_PHP',
    'tree_to_folding',
    'enumerate_lattice_trees',
    'CheckpointError',
    'SurveyRecord',
    'sweep',
    'find_unique_examples',
    'verify_odd_Z',
]

__version__ = ENGINE_VERSION
