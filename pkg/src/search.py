"""
Exact enumeration of optimal HP foldings

Branch-and-bound depth-first search over self-avoiding walks on a padded
flat grid. The first step is fixed to E and the first turn to N, so every
completed walk is already the canonical member of its dihedral class and
each leaf is counted exactly once.
"""
import logging
import threading
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set

from .config import Settings, get_settings
from .core import (
    DIRECTIONS,
    OFFSETS,
    Automorphism,
    Chain,
    Folding,
    canonical_key,
    canonical_steps,
    chain_automorphisms,
    contacts,
    find_contacts,
)
from .families import recognize_family

logger = logging.getLogger(__name__)

_RANK = str.maketrans(DIRECTIONS, '0123')


def _rank(steps: str) -> str:
    return steps.translate(_RANK)


class SearchLimitError(RuntimeError):
    """Raised when a request exceeds a configured size ceiling"""


@dataclass
class SearchOptions:
    """
    Knobs for enumerate_optimal

    class_limit: stop counting once this many optimal classes are known
    and only look for strictly better foldings. None counts exactly.
    workers: thread count used when the tree is split into prefixes.
    """
    store_limit: Optional[int] = None
    parallel_split_depth: int = 0
    quotient_chain_automorphisms: bool = False
    use_pruning: bool = True
    class_limit: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if self.store_limit is None:
            self.store_limit = get_settings().store_limit
        if self.store_limit < 0:
            raise ValueError(f"store_limit must be non-negative, got {self.store_limit}")
        if self.parallel_split_depth < 0:
            raise ValueError(f"parallel_split_depth must be non-negative, got {self.parallel_split_depth}")
        if self.class_limit is not None and self.class_limit < 1:
            raise ValueError(f"class_limit must be at least 1, got {self.class_limit}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    branches_pruned: int = 0
    wall_time: float = 0.0
    tasks: int = 1

    def to_dict(self) -> Dict:
        return {
            'nodes_expanded': self.nodes_expanded,
            'branches_pruned': self.branches_pruned,
            'wall_time': round(self.wall_time, 6),
            'tasks': self.tasks,
        }


@dataclass
class SearchResult:
    """Optimum, class count and canonical representatives for one chain"""
    chain: Chain
    optimum: int
    class_count: int
    representatives: List[Folding] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    count_exact: bool = True
    quotient: bool = False

    @property
    def unique(self) -> bool:
        return self.class_count == 1

    def to_dict(self) -> Dict:
        return {
            'chain': self.chain.to_dict(),
            'optimum': self.optimum,
            'class_count': self.class_count,
            'count_exact': self.count_exact,
            'quotient_chain_automorphisms': self.quotient,
            'representatives': [f.steps for f in self.representatives],
            'stats': self.stats.to_dict(),
        }

    def get_summary(self) -> str:
        count = f"{self.class_count}" if self.count_exact else f">={self.class_count}"
        lines = [
            f"Chain:     {self.chain.labels} ({self.chain.topology.value}, n={self.chain.length})",
            f"Optimum:   {self.optimum} contacts",
            f"Classes:   {count}" + (" (unique)" if self.unique and self.count_exact else ""),
        ]
        for f in self.representatives:
            lines.append(f"  {f.steps}")
        lines.append(
            f"Search:    {self.stats.nodes_expanded} nodes, {self.stats.branches_pruned} pruned, "
            f"{self.stats.wall_time:.3f}s"
        )
        return "\n".join(lines)


class _SharedBound:
    """Monotone best-known contact count shared by subtree tasks"""

    def __init__(self, value: int):
        self.value = value
        self._lock = threading.Lock()

    def offer(self, value: int) -> None:
        if value > self.value:
            with self._lock:
                if value > self.value:
                    self.value = value


@dataclass
class _TaskResult:
    best: int
    count: int = 0
    reps: List[str] = field(default_factory=list)
    keys: Set[str] = field(default_factory=set)
    truncated: bool = False
    nodes: int = 0
    pruned: int = 0


class _Walker:
    """Depth-first search of one subtree; one instance per task"""

    def __init__(self, chain: Chain, options: SearchOptions, shared: _SharedBound,
                 automorphisms: Optional[List[Automorphism]] = None,
                 spectrum: Optional[Counter] = None):
        n = chain.length
        self.chain = chain
        self.n = n
        self.closed = chain.closed
        self.h = [c == 'H' for c in chain.labels]
        self.options = options
        self.pruning = options.use_pruning and spectrum is None
        self.shared = shared
        self.automorphisms = automorphisms
        self.spectrum = spectrum

        width = 2 * n + 3
        offset = n + 1
        self.deltas = {'E': 1, 'N': width, 'W': -1, 'S': -width}
        self.neighbours = tuple(self.deltas.values())
        self.origin = offset + offset * width
        self.occ = [-1] * (width * width)
        self.dist = [abs(s % width - offset) + abs(s // width - offset) for s in range(width * width)]

        # capacity of H nodes with index >= i, split by index parity
        rem = [[0] * (n + 1) for _ in range(2)]
        for i in range(n - 1, -1, -1):
            rem[0][i] = rem[0][i + 1]
            rem[1][i] = rem[1][i + 1]
            if self.h[i]:
                rem[i & 1][i] += chain.max_degree(i)
        self.rem = rem

        self.sites: List[int] = []
        self.steps: List[str] = []
        self.c = 0
        self.cap = [0, 0]
        self.strict = False
        self.result = _TaskResult(best=shared.value)

    def run(self, prefix: str) -> _TaskResult:
        self._place(0, self.origin)
        for d in prefix:
            k = len(self.sites)
            site = self.sites[-1] + self.deltas[d]
            if self.occ[site] >= 0 or not self._can_close(k, site):
                return self.result
            self._place(k, site)
            self.steps.append(d)
        self._descend(any(d != 'E' for d in prefix))
        self.result.truncated = self.strict and self.pruning
        return self.result

    def _adjacent(self, k: int, m: int) -> bool:
        return m == k - 1 or (self.closed and k == self.n - 1 and m == 0)

    def _can_close(self, k: int, site: int) -> bool:
        return not self.closed or self.dist[site] <= self.n - k

    def _place(self, k: int, site: int):
        saved = (self.c, self.cap[0], self.cap[1])
        occ = self.occ
        h = self.h
        free = 0
        for delta in self.neighbours:
            m = occ[site + delta]
            if m < 0:
                free += 1
            elif h[m]:
                self.cap[m & 1] -= 1
                if h[k] and not self._adjacent(k, m):
                    self.c += 1
        if h[k]:
            self.cap[k & 1] += free
        occ[site] = k
        self.sites.append(site)
        self.result.nodes += 1
        return saved

    def _unplace(self, site: int, saved) -> None:
        self.occ[site] = -1
        self.sites.pop()
        self.c, self.cap[0], self.cap[1] = saved

    def _bound(self, k: int) -> int:
        """Upper bound on contacts still to be made after node k is placed"""
        rem_even = self.rem[0][k + 1]
        rem_odd = self.rem[1][k + 1]
        even = self.cap[0] + rem_even
        odd = self.cap[1] + rem_odd
        # node k+1 takes one free site of the head
        if self.h[k]:
            if k & 1:
                odd -= 1
            else:
                even -= 1
        # node n-1 takes one free site of node 0
        if self.closed and self.h[0]:
            even -= 1
        return max(0, min(even, odd, rem_even + rem_odd))

    def _cut(self, k: int) -> bool:
        total = self.c + self._bound(k)
        best = max(self.result.best, self.shared.value)
        if total < best:
            return True
        return self.strict and total <= self.result.best

    def _descend(self, turned: bool) -> None:
        k = len(self.sites) - 1
        if k == self.n - 1:
            self._leaf()
            return
        if self.pruning and self._cut(k):
            self.result.pruned += 1
            return
        if k == 0:
            directions = 'E'
        elif not turned:
            directions = 'EN'
        else:
            directions = DIRECTIONS
        head = self.sites[-1]
        for d in directions:
            site = head + self.deltas[d]
            if self.occ[site] >= 0 or not self._can_close(k + 1, site):
                continue
            saved = self._place(k + 1, site)
            self.steps.append(d)
            self._descend(turned or d != 'E')
            self.steps.pop()
            self._unplace(site, saved)

    def _closing_step(self) -> str:
        diff = self.origin - self.sites[-1]
        for d, delta in self.deltas.items():
            if delta == diff:
                return d
        raise RuntimeError("Closed walk does not end next to the origin")

    def _leaf(self) -> None:
        c = self.c
        if self.spectrum is not None:
            self.spectrum[c] += 1
            return
        r = self.result
        if c < r.best:
            return
        steps = ''.join(self.steps)
        if self.closed:
            steps += self._closing_step()
        if c > r.best:
            r.best = c
            r.count = 0
            r.reps = []
            r.keys = set()
            self.strict = False
            self.shared.offer(c)
        if self.automorphisms:
            key = canonical_key(steps, self.chain, self.automorphisms)
            if key in r.keys:
                return
            r.keys.add(key)
            r.count = len(r.keys)
        else:
            r.count += 1
            if len(r.reps) < self.options.store_limit:
                r.reps.append(steps)
        limit = self.options.class_limit
        if limit is not None and r.count >= limit:
            self.strict = True


def _prefixes(chain: Chain, depth: int) -> List[str]:
    """Feasible step prefixes of the given depth, in canonical order"""
    depth = min(depth, chain.length - 1)
    n = chain.length
    out: List[str] = []

    def grow(steps: List[str], point, seen, turned):
        k = len(steps)
        if k == depth:
            out.append(''.join(steps))
            return
        directions = 'E' if k == 0 else ('EN' if not turned else DIRECTIONS)
        for d in directions:
            dx, dy = OFFSETS[d]
            q = (point[0] + dx, point[1] + dy)
            if q in seen:
                continue
            if chain.closed and abs(q[0]) + abs(q[1]) > n - (k + 1):
                continue
            seen.add(q)
            steps.append(d)
            grow(steps, q, seen, turned or d != 'E')
            steps.pop()
            seen.discard(q)

    grow([], (0, 0), {(0, 0)}, False)
    return out


def _greedy_value(chain: Chain) -> int:
    """Contacts of a greedy open folding; 0 when it gets stuck or the chain is closed"""
    if chain.closed or chain.length < 2:
        return 0
    labels = chain.labels
    points = [(0, 0)]
    seen = {(0, 0)}
    for k in range(1, chain.length):
        x, y = points[-1]
        best_d, best_score = None, -1
        for d in DIRECTIONS:
            dx, dy = OFFSETS[d]
            q = (x + dx, y + dy)
            if q in seen:
                continue
            exits = sum(1 for e in OFFSETS.values() if (q[0] + e[0], q[1] + e[1]) not in seen)
            if exits == 0 and k < chain.length - 1:
                continue
            score = 0
            if labels[k] == 'H':
                for e in OFFSETS.values():
                    p = (q[0] + e[0], q[1] + e[1])
                    if p in seen and p != points[-1] and labels[points.index(p)] == 'H':
                        score += 1
            if score > best_score:
                best_d, best_score = d, score
        if best_d is None:
            return 0
        dx, dy = OFFSETS[best_d]
        q = (x + dx, y + dy)
        points.append(q)
        seen.add(q)
    return len(find_contacts(labels, points, False))


def seed_value(chain: Chain) -> int:
    """Contact count of some valid folding: a recognised family folding, else greedy"""
    folding = recognize_family(chain)
    if folding is not None:
        return contacts(chain, folding).contact_count
    return _greedy_value(chain)


def _merge(chain: Chain, options: SearchOptions, results: List[_TaskResult], quotient: bool,
           started: float) -> SearchResult:
    stats = SearchStats(
        nodes_expanded=sum(r.nodes for r in results),
        branches_pruned=sum(r.pruned for r in results),
        tasks=len(results),
    )
    live = [r for r in results if r.count > 0]
    if not live:
        raise RuntimeError(f"Search found no folding for {chain.labels!r}")
    optimum = max(r.best for r in live)
    top = [r for r in live if r.best == optimum]
    if quotient:
        keys = set().union(*(r.keys for r in top))
        class_count = len(keys)
        reps = sorted(keys, key=_rank)[:options.store_limit]
    else:
        class_count = sum(r.count for r in top)
        reps = sorted((s for r in top for s in r.reps), key=_rank)[:options.store_limit]
    stats.wall_time = time.perf_counter() - started
    return SearchResult(
        chain=chain,
        optimum=optimum,
        class_count=class_count,
        representatives=[Folding(s) for s in reps],
        stats=stats,
        count_exact=not any(r.truncated for r in top),
        quotient=quotient,
    )


def enumerate_optimal(chain: Chain, options: Optional[SearchOptions] = None,
                      progress_callback: Optional[Callable[[int, int], None]] = None) -> SearchResult:
    """
    Find the optimum contact count and every optimal folding class

    Classes are counted modulo the 8 lattice isometries, and additionally
    modulo label-preserving chain symmetries when
    options.quotient_chain_automorphisms is set.

    Args:
        chain: Chain to fold
        options: Search options (defaults from settings)
        progress_callback: Optional callback(completed_tasks, total_tasks)

    Returns:
        SearchResult with representatives in canonical order
    """
    options = options or SearchOptions()
    started = time.perf_counter()

    automorphisms = None
    if options.quotient_chain_automorphisms:
        autos = chain_automorphisms(chain)
        automorphisms = autos if len(autos) > 1 else None
    quotient = automorphisms is not None

    shared = _SharedBound(seed_value(chain))
    prefixes = _prefixes(chain, options.parallel_split_depth)

    def run_task(prefix: str) -> _TaskResult:
        return _Walker(chain, options, shared, automorphisms).run(prefix)

    if len(prefixes) <= 1:
        results = [run_task(p) for p in prefixes]
    else:
        results = []
        lock = threading.Lock()
        with ThreadPoolExecutor(max_workers=options.workers) as executor:
            futures = [executor.submit(run_task, p) for p in prefixes]
            for future in as_completed(futures):
                result = future.result()
                with lock:
                    results.append(result)
                    if progress_callback:
                        progress_callback(len(results), len(prefixes))

    result = _merge(chain, options, results, quotient, started)
    logger.debug(
        "%s: optimum=%d classes=%d nodes=%d pruned=%d",
        chain.labels, result.optimum, result.class_count,
        result.stats.nodes_expanded, result.stats.branches_pruned,
    )
    return result


def is_unique(chain: Chain, options: Optional[SearchOptions] = None) -> bool:
    """True iff the chain has exactly one optimal folding class"""
    base = options or SearchOptions()
    limited = SearchOptions(
        store_limit=0,
        parallel_split_depth=base.parallel_split_depth,
        quotient_chain_automorphisms=base.quotient_chain_automorphisms,
        use_pruning=base.use_pruning,
        class_limit=2,
        workers=base.workers,
    )
    return enumerate_optimal(chain, limited).class_count == 1


def naive_oracle(chain: Chain, quotient_chain_automorphisms: bool = False,
                 settings: Optional[Settings] = None, store_limit: Optional[int] = None) -> SearchResult:
    """
    Reference enumeration: every self-avoiding folding, no pruning

    Only the first step is fixed (to E). Every optimal folding is
    canonicalised into a set, so the class count does not depend on the
    symmetry rule enumerate_optimal uses.

    Raises:
        SearchLimitError: If the chain is longer than settings.oracle_max_length
    """
    settings = settings or get_settings()
    if chain.length > settings.oracle_max_length:
        raise SearchLimitError(
            f"Chain length {chain.length} exceeds the oracle limit of {settings.oracle_max_length}"
        )
    started = time.perf_counter()
    labels = chain.labels
    n = chain.length
    autos = chain_automorphisms(chain) if quotient_chain_automorphisms else None
    best = -1
    classes: Set[str] = set()
    visited = 0

    def finish(steps: str, points) -> None:
        nonlocal best, classes
        c = len(find_contacts(labels, points, chain.closed))
        if c < best:
            return
        if c > best:
            best = c
            classes = set()
        classes.add(canonical_key(steps, chain, autos) if autos else canonical_steps(steps))

    def walk(steps: List[str], points, seen) -> None:
        nonlocal visited
        visited += 1
        if len(points) == n:
            if chain.closed:
                x, y = points[-1]
                closing = [d for d, (dx, dy) in OFFSETS.items() if (x + dx, y + dy) == (0, 0)]
                if not closing:
                    return
                finish(''.join(steps) + closing[0], points)
            else:
                finish(''.join(steps), points)
            return
        directions = 'E' if not steps else DIRECTIONS
        x, y = points[-1]
        for d in directions:
            dx, dy = OFFSETS[d]
            q = (x + dx, y + dy)
            if q in seen:
                continue
            seen.add(q)
            points.append(q)
            steps.append(d)
            walk(steps, points, seen)
            steps.pop()
            points.pop()
            seen.discard(q)

    walk([], [(0, 0)], {(0, 0)})
    limit = settings.store_limit if store_limit is None else store_limit
    reps = sorted(classes, key=_rank)[:limit]
    return SearchResult(
        chain=chain,
        optimum=best,
        class_count=len(classes),
        representatives=[Folding(s) for s in reps],
        stats=SearchStats(nodes_expanded=visited, wall_time=time.perf_counter() - started),
        quotient=bool(autos and len(autos) > 1),
    )


def degeneracy_spectrum(chain: Chain) -> Dict[int, int]:
    """
    Number of folding classes at each contact count

    Counts every self-avoiding folding once per lattice-isometry class.
    """
    spectrum: Counter = Counter()
    options = SearchOptions(store_limit=0, use_pruning=False)
    _Walker(chain, options, _SharedBound(0), spectrum=spectrum).run('')
    return dict(sorted(spectrum.items()))


def stability_gap(chain: Chain) -> Optional[int]:
    """
    Optimum minus the best non-optimal contact count

    None when every folding is optimal.
    """
    spectrum = degeneracy_spectrum(chain)
    optimum = max(spectrum)
    lower = [c for c in spectrum if c < optimum]
    if not lower:
        return None
    return optimum - max(lower)
