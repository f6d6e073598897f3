"""
Square-lattice HP model: chains, foldings, contacts and canonical forms

A folding is a direction string over {E, N, W, S}. Node 0 sits at the
origin, E is +x and N is +y. Open chains of n nodes take n-1 steps;
closed chains take n steps, the last one returning to the origin.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Point = Tuple[int, int]

# Canonical order: E < N < W < S
DIRECTIONS = 'ENWS'
OFFSETS: Dict[str, Point] = {
    'E': (1, 0),
    'N': (0, 1),
    'W': (-1, 0),
    'S': (0, -1),
}
OPPOSITE = {'E': 'W', 'W': 'E', 'N': 'S', 'S': 'N'}
LABELS = 'HP'


class InvalidChainError(ValueError):
    """Raised when an HP label string or chain topology is invalid"""


class InvalidFoldingError(ValueError):
    """Raised when a direction string is not a valid folding"""


class Topology(str, Enum):
    OPEN = 'open'
    CLOSED = 'closed'


def as_topology(value: Union['Topology', str]) -> 'Topology':
    """Accept 'open'/'closed' strings as well as Topology members"""
    try:
        return Topology(value)
    except ValueError:
        raise InvalidChainError(f"Unknown topology: {value!r} (expected 'open' or 'closed')")


@dataclass(frozen=True)
class Chain:
    """An HP chain: labels over {H, P} plus open/closed topology"""
    labels: str
    topology: Topology = Topology.OPEN

    def __post_init__(self):
        object.__setattr__(self, 'topology', as_topology(self.topology))
        if not self.labels:
            raise InvalidChainError("Chain cannot be empty")
        bad = sorted(set(self.labels) - set(LABELS))
        if bad:
            raise InvalidChainError(f"Invalid label(s) {''.join(bad)!r}: only 'H' and 'P' are allowed")
        if self.closed:
            if len(self.labels) < 4:
                raise InvalidChainError(
                    f"Closed chain needs at least 4 nodes, got {len(self.labels)}"
                )
            if len(self.labels) % 2:
                raise InvalidChainError(
                    f"Closed chain length must be even (lattice polygons are bipartite), got {len(self.labels)}"
                )

    @property
    def closed(self) -> bool:
        return self.topology is Topology.CLOSED

    @property
    def length(self) -> int:
        return len(self.labels)

    @property
    def h_count(self) -> int:
        return self.labels.count('H')

    @property
    def step_count(self) -> int:
        """Number of direction steps a folding of this chain has"""
        return self.length if self.closed else self.length - 1

    def is_h(self, i: int) -> bool:
        return self.labels[i] == 'H'

    def chain_adjacent(self, i: int, j: int) -> bool:
        """True if nodes i and j are joined by a chain edge"""
        d = abs(i - j)
        if d == 1:
            return True
        return self.closed and d == self.length - 1

    def max_degree(self, i: int) -> int:
        """Largest possible bond degree of node i (2 inside the chain, 3 at an open end)"""
        if self.length == 1:
            return 4
        if not self.closed and i in (0, self.length - 1):
            return 3
        return 2

    def __str__(self) -> str:
        return self.labels

    def to_dict(self) -> Dict:
        return {
            'labels': self.labels,
            'topology': self.topology.value,
            'length': self.length,
        }


@dataclass(frozen=True)
class Folding:
    """Direction string over {E, N, W, S}"""
    steps: str

    def __post_init__(self):
        bad = sorted(set(self.steps) - set(DIRECTIONS))
        if bad:
            raise InvalidFoldingError(f"Invalid direction(s) {''.join(bad)!r}: only E, N, W, S are allowed")

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return self.steps

    def to_dict(self) -> Dict:
        return {'steps': self.steps}


FoldingLike = Union[Folding, str]


def as_folding(folding: FoldingLike) -> Folding:
    if isinstance(folding, Folding):
        return folding
    return Folding(str(folding).strip().upper())


@dataclass(frozen=True)
class Embedding:
    """Lattice coordinates of every chain node, in chain order"""
    points: Tuple[Point, ...]

    def bounding_box(self) -> Tuple[int, int, int, int]:
        """(min_x, min_y, max_x, max_y)"""
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def index_of(self) -> Dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    def to_dict(self) -> Dict:
        return {'points': [list(p) for p in self.points]}


@dataclass(frozen=True)
class BondGraph:
    """H-H contacts of an embedded chain, as sorted index pairs (i < j)"""
    contacts: FrozenSet[Tuple[int, int]]

    @property
    def contact_count(self) -> int:
        return len(self.contacts)

    def nodes(self) -> List[int]:
        return sorted({i for pair in self.contacts for i in pair})

    def degree(self, node: int) -> int:
        return sum(1 for pair in self.contacts if node in pair)

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = defaultdict(list)
        for i, j in sorted(self.contacts):
            adj[i].append(j)
            adj[j].append(i)
        return dict(adj)

    def to_dict(self) -> Dict:
        return {
            'contacts': [list(pair) for pair in sorted(self.contacts)],
            'contact_count': self.contact_count,
        }


@dataclass(frozen=True)
class MissingBond:
    """One lattice edge at an H node that is neither a chain edge nor a bond"""
    node: int
    direction: str
    external: bool
    wall: Optional[str] = None  # bounding-box wall for external ones

    def to_dict(self) -> Dict:
        return {
            'node': self.node,
            'direction': self.direction,
            'external': self.external,
            'wall': self.wall,
        }


@dataclass(frozen=True)
class NodeBondAccount:
    """Bond bookkeeping for a single H node"""
    node: int
    bond_degree: int
    internal_missing: int
    external_missing: int
    endpoint: bool

    @property
    def missing(self) -> int:
        return self.internal_missing + self.external_missing

    def to_dict(self) -> Dict:
        return {
            'node': self.node,
            'bond_degree': self.bond_degree,
            'internal_missing': self.internal_missing,
            'external_missing': self.external_missing,
            'endpoint': self.endpoint,
        }


@dataclass(frozen=True)
class MissingBondReport:
    """Per-H-node bond degrees and missing bonds of one embedding"""
    nodes: Tuple[NodeBondAccount, ...]
    missing: Tuple[MissingBond, ...]

    @property
    def total_missing(self) -> int:
        return len(self.missing)

    @property
    def external_count(self) -> int:
        return sum(1 for m in self.missing if m.external)

    @property
    def internal_count(self) -> int:
        return sum(1 for m in self.missing if not m.external)

    def by_wall(self) -> Dict[str, int]:
        """External missing bonds per bounding-box wall"""
        walls = {d: 0 for d in DIRECTIONS}
        for m in self.missing:
            if m.external:
                walls[m.wall] += 1
        return walls

    def account(self, node: int) -> NodeBondAccount:
        for acc in self.nodes:
            if acc.node == node:
                return acc
        raise KeyError(f"Node {node} is not an H node of this report")

    def to_dict(self) -> Dict:
        return {
            'nodes': [acc.to_dict() for acc in self.nodes],
            'missing': [m.to_dict() for m in self.missing],
            'total_missing': self.total_missing,
            'external': self.external_count,
            'internal': self.internal_count,
            'by_wall': self.by_wall(),
        }


class ShapeKind(str, Enum):
    ACYCLIC_PATH = 'acyclic_path'
    DISJOINT_EVEN_CYCLES = 'disjoint_even_cycles'
    OTHER = 'other'


@dataclass(frozen=True)
class BondGraphShape:
    """Structural class of a bond graph"""
    kind: ShapeKind
    component_sizes: Tuple[int, ...]
    node_count: int
    edge_count: int

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind.value,
            'component_sizes': list(self.component_sizes),
            'node_count': self.node_count,
            'edge_count': self.edge_count,
        }


# ---------------------------------------------------------------------------
# Parsing and embedding
# ---------------------------------------------------------------------------

def parse_chain(text: str, topology: Union[Topology, str] = Topology.OPEN) -> Chain:
    """
    Build a Chain from an H/P string

    Args:
        text: Labels, e.g. 'PHPPHP' (case-insensitive, surrounding space ignored)
        topology: 'open' or 'closed'

    Returns:
        Chain

    Raises:
        InvalidChainError: On empty text, bad characters, or a closed chain
            of odd length or fewer than 4 nodes
    """
    if text is None or not text.strip():
        raise InvalidChainError("Chain cannot be empty")
    return Chain(text.strip().upper(), as_topology(topology))


def walk_points(steps: str, origin: Point = (0, 0)) -> List[Point]:
    """Lattice points visited by a direction string (no validity checks)"""
    x, y = origin
    points = [(x, y)]
    for d in steps:
        dx, dy = OFFSETS[d]
        x += dx
        y += dy
        points.append((x, y))
    return points


def validate_walk(steps: str, topology: Union[Topology, str]) -> List[Point]:
    """
    Check that a direction string is self-avoiding (and closes, if closed)

    Returns:
        One point per node (the closing return to the origin is dropped)

    Raises:
        InvalidFoldingError: On a revisited point or a closed walk that does
            not return to its start
    """
    topology = as_topology(topology)
    points = walk_points(steps)
    if topology is Topology.CLOSED:
        if len(steps) < 4:
            raise InvalidFoldingError(f"Closed folding needs at least 4 steps, got {len(steps)}")
        if points[-1] != points[0]:
            raise InvalidFoldingError(
                f"Closed folding does not return to its start: ends at {points[-1]}"
            )
        points = points[:-1]
    seen: Dict[Point, int] = {}
    for i, p in enumerate(points):
        if p in seen:
            raise InvalidFoldingError(
                f"Folding is not self-avoiding: node {i} revisits {p} (node {seen[p]})"
            )
        seen[p] = i
    return points


def embed(chain: Chain, folding: FoldingLike) -> Embedding:
    """
    Place a chain on the lattice according to a folding

    Args:
        chain: HP chain
        folding: Folding or direction string

    Returns:
        Embedding with node 0 at the origin

    Raises:
        InvalidFoldingError: On length mismatch, self-intersection, or a
            closed walk that does not return to the origin
    """
    steps = as_folding(folding).steps
    if len(steps) != chain.step_count:
        raise InvalidFoldingError(
            f"Folding has {len(steps)} steps but a {chain.topology.value} chain of "
            f"length {chain.length} needs {chain.step_count}"
        )
    return Embedding(tuple(validate_walk(steps, chain.topology)))


def find_contacts(labels: str, points: List[Point], closed: bool) -> FrozenSet[Tuple[int, int]]:
    """
    H-H pairs that are lattice neighbours but not chain neighbours

    Shared by contacts() and the search oracle; expects valid points.
    """
    n = len(labels)
    index = {p: i for i, p in enumerate(points)}
    pairs = set()
    for i, (x, y) in enumerate(points):
        if labels[i] != 'H':
            continue
        # E and N only: each pair is seen once
        for q in ((x + 1, y), (x, y + 1)):
            j = index.get(q)
            if j is None or labels[j] != 'H':
                continue
            d = abs(i - j)
            if d == 1 or (closed and d == n - 1):
                continue
            pairs.add((min(i, j), max(i, j)))
    return frozenset(pairs)


def contacts(chain: Chain, folding: FoldingLike) -> BondGraph:
    """
    Bond graph of a folded chain

    Raises:
        InvalidFoldingError: Propagated from embed()
    """
    embedding = embed(chain, folding)
    return BondGraph(find_contacts(chain.labels, list(embedding.points), chain.closed))


def max_contact_bound(chain: Chain) -> int:
    """Upper bound on contacts: h+1 for open chains, h for closed chains"""
    h = chain.h_count
    return h if chain.closed else h + 1


# ---------------------------------------------------------------------------
# Lattice isometries
# ---------------------------------------------------------------------------

def _dihedral_tables() -> List[Dict[int, int]]:
    tables = []
    for reflect in (False, True):
        for rot in range(4):
            mapping = {}
            for d in DIRECTIONS:
                src = {'N': 'S', 'S': 'N'}.get(d, d) if reflect else d
                mapping[d] = DIRECTIONS[(DIRECTIONS.index(src) + rot) % 4]
            tables.append(str.maketrans(mapping))
    return tables


# Index 0 is the identity
DIHEDRAL_TABLES = _dihedral_tables()


def dihedral_images(steps: str) -> List[str]:
    """The 8 images of a direction string under rotations and reflections"""
    return [steps.translate(t) for t in DIHEDRAL_TABLES]


def canonicalize(folding: FoldingLike, topology: Union[Topology, str] = Topology.OPEN) -> Folding:
    """
    Canonical representative of a folding's isometry class

    The lexicographically least of the 8 dihedral images under E < N < W < S.
    Node labels are never permuted.

    Raises:
        InvalidFoldingError: If the folding is not a valid walk for the topology
    """
    steps = as_folding(folding).steps
    validate_walk(steps, topology)
    return Folding(canonical_steps(steps))


def canonical_steps(steps: str) -> str:
    """canonicalize() without validation, for already-valid walks"""
    rank = str.maketrans(DIRECTIONS, '0123')
    return min(dihedral_images(steps), key=lambda s: s.translate(rank))


def isometric(f1: FoldingLike, f2: FoldingLike, topology: Union[Topology, str] = Topology.OPEN) -> bool:
    """
    True if two foldings differ by a lattice isometry

    Raises:
        InvalidFoldingError: On length mismatch or an invalid folding
    """
    a, b = as_folding(f1), as_folding(f2)
    if len(a) != len(b):
        raise InvalidFoldingError(f"Foldings have different lengths: {len(a)} and {len(b)}")
    return canonicalize(a, topology) == canonicalize(b, topology)


# ---------------------------------------------------------------------------
# Chain symmetries
# ---------------------------------------------------------------------------

Automorphism = Tuple[bool, int]  # (reversed, shift)


def chain_automorphisms(chain: Chain) -> List[Automorphism]:
    """
    Label-preserving symmetries of the chain itself, identity first

    Open chains admit reversal when the labels are a palindrome. Closed
    chains admit every rotation and reflection of the cycle that maps the
    label sequence onto itself.
    """
    labels = chain.labels
    n = chain.length
    result: List[Automorphism] = [(False, 0)]
    if not chain.closed:
        if n > 1 and labels == labels[::-1]:
            result.append((True, 0))
        return result
    for reverse in (False, True):
        for shift in range(n):
            if not reverse and shift == 0:
                continue
            if reverse:
                mapped = ''.join(labels[(shift - i) % n] for i in range(n))
            else:
                mapped = labels[shift:] + labels[:shift]
            if mapped == labels:
                result.append((reverse, shift))
    return result


def apply_automorphism(steps: str, automorphism: Automorphism, topology: Union[Topology, str]) -> str:
    """Re-read a folding starting from the relabelled node 0"""
    reverse, shift = automorphism
    if as_topology(topology) is Topology.OPEN:
        if reverse:
            return ''.join(OPPOSITE[d] for d in reversed(steps))
        return steps
    n = len(steps)
    if reverse:
        return ''.join(OPPOSITE[steps[(shift - i - 1) % n]] for i in range(n))
    return steps[shift:] + steps[:shift]


def canonical_key(steps: str, chain: Chain, automorphisms: Optional[List[Automorphism]] = None) -> str:
    """
    Least canonical string over lattice isometries and the given chain symmetries

    With no automorphisms (or only the identity) this is canonical_steps().
    """
    if not automorphisms or len(automorphisms) == 1:
        return canonical_steps(steps)
    return min(
        (canonical_steps(apply_automorphism(steps, a, chain.topology)) for a in automorphisms),
        key=lambda s: s.translate(str.maketrans(DIRECTIONS, '0123')),
    )


def equivalent(chain: Chain, f1: FoldingLike, f2: FoldingLike, quotient: bool = True) -> bool:
    """
    True if two foldings of chain are one class

    With quotient set, foldings related by a chain symmetry also count as
    one class; otherwise only lattice isometries count.

    Raises:
        InvalidFoldingError: If either folding is not valid for the chain
    """
    a, b = as_folding(f1).steps, as_folding(f2).steps
    embed(chain, a)
    embed(chain, b)
    autos = chain_automorphisms(chain) if quotient else None
    return canonical_key(a, chain, autos) == canonical_key(b, chain, autos)


# ---------------------------------------------------------------------------
# Missing bonds and bond graph structure
# ---------------------------------------------------------------------------

def missing_bonds(chain: Chain, folding: FoldingLike) -> MissingBondReport:
    """
    Classify every lattice edge at every H node

    An edge that is neither a chain edge nor a bond is a missing bond; it is
    external when its far end lies outside the bounding box, and then
    belongs to the wall it is perpendicular to, which is the wall in its
    own direction.

    Raises:
        InvalidFoldingError: Propagated from embed()
    """
    embedding = embed(chain, folding)
    points = embedding.points
    index = embedding.index_of()
    min_x, min_y, max_x, max_y = embedding.bounding_box()
    n = chain.length

    accounts = []
    missing = []
    for i, (x, y) in enumerate(points):
        if not chain.is_h(i):
            continue
        degree = internal = external = 0
        for d in DIRECTIONS:
            dx, dy = OFFSETS[d]
            q = (x + dx, y + dy)
            j = index.get(q)
            if j is not None and chain.chain_adjacent(i, j):
                continue
            if j is not None and chain.is_h(j):
                degree += 1
                continue
            outside = not (min_x <= q[0] <= max_x and min_y <= q[1] <= max_y)
            if outside:
                external += 1
            else:
                internal += 1
            missing.append(MissingBond(node=i, direction=d, external=outside, wall=d if outside else None))
        endpoint = not chain.closed and i in (0, n - 1)
        accounts.append(NodeBondAccount(
            node=i,
            bond_degree=degree,
            internal_missing=internal,
            external_missing=external,
            endpoint=endpoint,
        ))
    return MissingBondReport(nodes=tuple(accounts), missing=tuple(missing))


def _components(adj: Dict[int, List[int]]) -> List[List[int]]:
    seen = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        components.append(sorted(comp))
    return components


def bond_graph_shape(bonds: BondGraph) -> BondGraphShape:
    """
    Classify a bond graph

    acyclic_path: every component is a simple path (the empty graph too).
    disjoint_even_cycles: every component is a cycle of even length.
    other: anything else.
    """
    adj = bonds.adjacency()
    components = _components(adj)
    sizes = tuple(sorted((len(c) for c in components), reverse=True))

    def edges_in(comp: List[int]) -> int:
        return sum(len(adj[v]) for v in comp) // 2

    all_paths = all(
        edges_in(c) == len(c) - 1 and max(len(adj[v]) for v in c) <= 2
        for c in components
    )
    all_even_cycles = bool(components) and all(
        all(len(adj[v]) == 2 for v in c) and len(c) % 2 == 0
        for c in components
    )
    if all_paths:
        kind = ShapeKind.ACYCLIC_PATH
    elif all_even_cycles:
        kind = ShapeKind.DISJOINT_EVEN_CYCLES
    else:
        kind = ShapeKind.OTHER
    return BondGraphShape(
        kind=kind,
        component_sizes=sizes,
        node_count=len(adj),
        edge_count=bonds.contact_count,
    )


def random_folding(chain: Chain, rng, attempts: int = 1000) -> Folding:
    """
    A random valid open folding by rejection-free growth with restarts

    Used by property tests and the greedy seed. Closed chains are not
    supported here.

    Raises:
        InvalidChainError: For closed chains
        RuntimeError: If no folding was produced within the attempt budget
    """
    if chain.closed:
        raise InvalidChainError("random_folding only supports open chains")
    for _ in range(attempts):
        x, y = 0, 0
        occupied = {(0, 0)}
        steps = []
        for _ in range(chain.step_count):
            options = [d for d in DIRECTIONS if (x + OFFSETS[d][0], y + OFFSETS[d][1]) not in occupied]
            if not options:
                break
            d = rng.choice(options)
            x, y = x + OFFSETS[d][0], y + OFFSETS[d][1]
            occupied.add((x, y))
            steps.append(d)
        else:
            return Folding(''.join(steps))
    raise RuntimeError(f"Could not grow a random folding in {attempts} attempts")
