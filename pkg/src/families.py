"""
Chain families with known optimal foldings, and lattice trees

S_k: closed, P (HP)^u P (HP)^d, folded optimally by the staircase F_k.
Z_k: open, (HP)^u (PH)^d. Z_2j has a single optimal folding, the standard
embedding. (PHP)^4k: one optimal folding per lattice tree on k nodes,
built from 4-cycle gadgets.

Throughout u = ceil(k/2) and d = floor(k/2).
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

from .core import OFFSETS, Chain, Folding, Point, Topology, as_topology

logger = logging.getLogger(__name__)

MAX_TREE_NODES = 8

Edge = Tuple[Point, Point]


class FamilyParameterError(ValueError):
    """Raised for an out-of-range family parameter or a malformed lattice tree"""


def _check_k(k: int, name: str = 'k') -> int:
    if isinstance(k, bool) or not isinstance(k, int):
        raise FamilyParameterError(f"{name} must be an integer, got {k!r}")
    if k < 1:
        raise FamilyParameterError(f"{name} must be at least 1, got {k}")
    return k


def _up_down(k: int) -> Tuple[int, int]:
    return (k + 1) // 2, k // 2


def gen_S(k: int) -> Chain:
    """Closed chain P (HP)^u P (HP)^d of length 2k+2"""
    u, d = _up_down(_check_k(k))
    return Chain('P' + 'HP' * u + 'P' + 'HP' * d, Topology.CLOSED)


def gen_F(k: int) -> Folding:
    """
    Staircase folding of S_k with k-1 contacts

    E (ES)^d W (WN)^u for even k, E (ES)^d S (WN)^u for odd k. Starts at
    node 0 of gen_S(k).
    """
    u, d = _up_down(_check_k(k))
    turn = 'W' if k % 2 == 0 else 'S'
    return Folding('E' + 'ES' * d + turn + 'WN' * u)


def gen_Z(k: int) -> Chain:
    """Open chain (HP)^u (PH)^d of length 2k"""
    u, d = _up_down(_check_k(k))
    return Chain('HP' * u + 'PH' * d, Topology.OPEN)


def standard_Z_embedding(j: int) -> Folding:
    """
    The optimal folding of Z_2j

    Left half climbs a W/N staircase, the P-P middle turns over the top,
    right half descends an E/S staircase. 2j-1 contacts; the only missing
    bonds are the four external ones at the chain ends.
    """
    _check_k(j, 'j')
    return Folding('WN' * (j - 1) + 'NES' + 'ES' * (j - 1))


def gen_PHP(k: int, topology: Union[Topology, str] = Topology.OPEN) -> Chain:
    """(PHP)^4k, length 12k"""
    _check_k(k)
    return Chain('PHP' * 4 * k, as_topology(topology))


def recognize_family(chain: Chain) -> Optional[Folding]:
    """
    A known good folding when the chain is S_k, Z_2j or (PHP)^4k

    Returns:
        Folding of this exact chain, or None
    """
    n = chain.length
    labels = chain.labels
    if chain.closed and n >= 4 and labels == gen_S((n - 2) // 2).labels:
        return gen_F((n - 2) // 2)
    if not chain.closed and n % 4 == 0 and labels == gen_Z(n // 2).labels:
        return standard_Z_embedding(n // 4)
    if n % 12 == 0 and labels == 'PHP' * (n // 3):
        k = n // 12
        row = LatticeTree.from_edges([((i, 0), (i + 1, 0)) for i in range(k - 1)]) if k > 1 \
            else LatticeTree(frozenset({(0, 0)}), frozenset())
        return tree_to_folding(row, chain.topology)
    return None


# ---------------------------------------------------------------------------
# Lattice trees
# ---------------------------------------------------------------------------

def _edge(p: Point, q: Point) -> Edge:
    return (p, q) if p < q else (q, p)


@dataclass(frozen=True)
class LatticeTree:
    """A tree embedded in the square lattice: unit edges, no cycles"""
    nodes: FrozenSet[Point]
    edges: FrozenSet[Edge]

    def __post_init__(self):
        object.__setattr__(self, 'edges', frozenset(_edge(p, q) for p, q in self.edges))
        self.validate()

    @classmethod
    def from_edges(cls, edges: List[Edge]) -> 'LatticeTree':
        nodes = frozenset(p for e in edges for p in e)
        return cls(nodes, frozenset(edges))

    def validate(self) -> None:
        """
        Raises:
            FamilyParameterError: If the tree is empty, has a non-unit edge or
                a dangling endpoint, or is not connected and acyclic
        """
        if not self.nodes:
            raise FamilyParameterError("Lattice tree must have at least one node")
        for p, q in self.edges:
            if p not in self.nodes or q not in self.nodes:
                raise FamilyParameterError(f"Edge {p}-{q} has an endpoint outside the node set")
            if abs(p[0] - q[0]) + abs(p[1] - q[1]) != 1:
                raise FamilyParameterError(f"Edge {p}-{q} is not a unit lattice edge")
        if len(self.edges) != len(self.nodes) - 1:
            raise FamilyParameterError(
                f"A tree on {len(self.nodes)} nodes needs {len(self.nodes) - 1} edges, got {len(self.edges)}"
            )
        adj = self.adjacency()
        start = min(self.nodes)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(self.nodes):
            raise FamilyParameterError("Lattice tree is not connected")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> Dict[Point, List[Point]]:
        adj: Dict[Point, List[Point]] = {p: [] for p in self.nodes}
        for p, q in self.edges:
            adj[p].append(q)
            adj[q].append(p)
        return adj

    def normalized(self) -> 'LatticeTree':
        """Translate so the smallest x and smallest y are both 0"""
        dx = min(p[0] for p in self.nodes)
        dy = min(p[1] for p in self.nodes)
        shift = lambda p: (p[0] - dx, p[1] - dy)  # noqa: E731
        return LatticeTree(
            frozenset(shift(p) for p in self.nodes),
            frozenset((shift(p), shift(q)) for p, q in self.edges),
        )

    def key(self) -> Tuple:
        return tuple(sorted(self.nodes)), tuple(sorted(self.edges))

    def to_dict(self) -> Dict:
        return {
            'size': self.size,
            'nodes': [list(p) for p in sorted(self.nodes)],
            'edges': [[list(p), list(q)] for p, q in sorted(self.edges)],
        }


def enumerate_lattice_trees(k: int) -> List[LatticeTree]:
    """
    All lattice trees on k nodes, one per translation class

    Grown leaf by leaf from the single point; each tree is normalized and
    deduplicated at every size.

    Raises:
        FamilyParameterError: If k < 1 or k > MAX_TREE_NODES
    """
    _check_k(k)
    if k > MAX_TREE_NODES:
        raise FamilyParameterError(f"Tree enumeration is limited to {MAX_TREE_NODES} nodes, got {k}")
    level: Dict[Tuple, LatticeTree] = {}
    seed = LatticeTree(frozenset({(0, 0)}), frozenset())
    level[seed.key()] = seed
    for _ in range(k - 1):
        grown: Dict[Tuple, LatticeTree] = {}
        for tree in level.values():
            for p in tree.nodes:
                for dx, dy in OFFSETS.values():
                    q = (p[0] + dx, p[1] + dy)
                    if q in tree.nodes:
                        continue
                    child = LatticeTree(tree.nodes | {q}, tree.edges | {_edge(p, q)}).normalized()
                    grown.setdefault(child.key(), child)
        level = grown
    trees = sorted(level.values(), key=LatticeTree.key)
    logger.debug("%d lattice trees on %d nodes", len(trees), k)
    return trees


def staircase_paths(k: int) -> List[LatticeTree]:
    """The 2^(k-1) paths on k nodes whose every step goes north or east"""
    _check_k(k)
    trees = []
    for mask in range(2 ** (k - 1)):
        point = (0, 0)
        edges = []
        for bit in range(k - 1):
            step = (0, 1) if mask >> bit & 1 else (1, 0)
            nxt = (point[0] + step[0], point[1] + step[1])
            edges.append((point, nxt))
            point = nxt
        if edges:
            trees.append(LatticeTree.from_edges(edges))
        else:
            trees.append(LatticeTree(frozenset({(0, 0)}), frozenset()))
    return trees


# Gadget around the H square {0,1}^2, in cycle order starting at the west P
# that precedes H(0,0).
_GADGET = [
    ('P', (-1, 0)), ('H', (0, 0)), ('P', (0, -1)),
    ('P', (1, -1)), ('H', (1, 0)), ('P', (2, 0)),
    ('P', (2, 1)), ('H', (1, 1)), ('P', (1, 2)),
    ('P', (0, 2)), ('H', (0, 1)), ('P', (-1, 1)),
]

_STEP = {delta: d for d, delta in OFFSETS.items()}


def tree_to_folding(tree: LatticeTree, topology: Union[Topology, str] = Topology.OPEN) -> Folding:
    """
    Optimal folding of (PHP)^4k built from a lattice tree on k nodes

    Every tree node becomes a 2x2 square of H nodes ringed by 8 P nodes
    (scale 4). Across each tree edge the two facing P-P edges are swapped
    for two bridging edges, merging the rings into one cycle. The open
    chain drops the west P-P edge of the least tree node.

    Returns:
        Folding with 4k contacts whose bond graph is k disjoint 4-cycles

    Raises:
        FamilyParameterError: If the tree is malformed
    """
    tree.validate()
    topology = as_topology(topology)

    adj: Dict[Point, Set[Point]] = {}

    def link(p: Point, q: Point) -> None:
        adj.setdefault(p, set()).add(q)
        adj.setdefault(q, set()).add(p)

    def unlink(p: Point, q: Point) -> None:
        adj[p].discard(q)
        adj[q].discard(p)

    for a, b in tree.nodes:
        ring = [(4 * a + x, 4 * b + y) for _, (x, y) in _GADGET]
        for i, p in enumerate(ring):
            link(p, ring[(i + 1) % len(ring)])

    for p, q in tree.edges:
        (a, b) = p
        x0, y0 = 4 * a, 4 * b
        if q == (a + 1, b):
            unlink((x0 + 2, y0), (x0 + 2, y0 + 1))
            unlink((x0 + 3, y0), (x0 + 3, y0 + 1))
            link((x0 + 2, y0), (x0 + 3, y0))
            link((x0 + 2, y0 + 1), (x0 + 3, y0 + 1))
        else:
            unlink((x0, y0 + 2), (x0 + 1, y0 + 2))
            unlink((x0, y0 + 3), (x0 + 1, y0 + 3))
            link((x0, y0 + 2), (x0, y0 + 3))
            link((x0 + 1, y0 + 2), (x0 + 1, y0 + 3))

    a, b = min(tree.nodes)
    start = (4 * a - 1, 4 * b)
    path = [start, (4 * a, 4 * b)]
    while True:
        prev, cur = path[-2], path[-1]
        nxt = [p for p in adj[cur] if p != prev]
        if len(nxt) != 1:
            raise RuntimeError(f"Gadget cycle broken at {cur}")
        if nxt[0] == start:
            break
        path.append(nxt[0])
    if len(path) != 12 * tree.size:
        raise RuntimeError(f"Gadget cycle has {len(path)} nodes, expected {12 * tree.size}")

    if topology is Topology.CLOSED:
        path.append(start)
    steps = ''.join(
        _STEP[(q[0] - p[0], q[1] - p[1])] for p, q in zip(path, path[1:])
    )
    return Folding(steps)
