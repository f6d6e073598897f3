"""
Verification suites

Each suite checks a group of structural claims about the chain families by
exhaustive search and reports every claim with expected and observed values.
"""
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .core import ShapeKind, bond_graph_shape, contacts, equivalent, missing_bonds
from .families import (
    LatticeTree,
    gen_F,
    gen_PHP,
    gen_S,
    gen_Z,
    standard_Z_embedding,
    tree_to_folding,
)
from .search import SearchOptions, enumerate_optimal, naive_oracle
from .survey import find_unique_examples, sweep, verify_odd_Z

logger = logging.getLogger(__name__)

# Published tallies of open chains with a unique optimal folding
PUBLISHED_UNIQUE = {
    11: 65, 12: 88, 13: 179, 14: 387, 15: 864,
    16: 1547, 17: 3420, 18: 6363, 19: 13486, 20: 24925,
}


@dataclass
class Claim:
    claim: str
    expected: str
    observed: str
    passed: bool

    def to_dict(self) -> Dict:
        return {
            'claim': self.claim,
            'expected': self.expected,
            'observed': self.observed,
            'passed': self.passed,
        }


@dataclass
class VerifyReport:
    suite: str
    claims: List[Claim] = field(default_factory=list)
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def check(self, claim: str, expected, observed) -> Claim:
        result = Claim(claim, str(expected), str(observed), expected == observed)
        if not result.passed:
            logger.warning("FAILED %s: expected %s, observed %s", claim, expected, observed)
        self.claims.append(result)
        return result

    def to_dict(self) -> Dict:
        return {
            'suite': self.suite,
            'passed': self.passed,
            'claims': [c.to_dict() for c in self.claims],
            'duration_seconds': round(self.duration_seconds, 3),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def get_summary(self) -> str:
        lines = [
            "=" * 60,
            f"VERIFY {self.suite}",
            "=" * 60,
        ]
        for c in self.claims:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.claim}: expected {c.expected}, observed {c.observed}")
        lines.append("-" * 40)
        passed = sum(1 for c in self.claims if c.passed)
        lines.append(f"{passed}/{len(self.claims)} claims passed in {self.duration_seconds:.2f} seconds")
        return "\n".join(lines)


# Uniqueness claims count foldings related by a chain symmetry as one class
def _exact() -> SearchOptions:
    return SearchOptions(store_limit=4, quotient_chain_automorphisms=True)


def suite_sk(report: VerifyReport, k_max: int = 7) -> None:
    for k in range(1, k_max + 1):
        chain = gen_S(k)
        result = enumerate_optimal(chain, _exact())
        report.check(f"S_{k} optimum", k - 1, result.optimum)
        report.check(f"S_{k} optimal classes", 1, result.class_count)
        report.check(
            f"S_{k} optimum is F_{k}",
            True,
            bool(result.representatives) and equivalent(chain, result.representatives[0], gen_F(k)),
        )


def suite_z_even(report: VerifyReport, j_max: int = 4) -> None:
    for j in range(1, j_max + 1):
        chain = gen_Z(2 * j)
        standard = standard_Z_embedding(j)
        result = enumerate_optimal(chain, _exact())
        report.check(f"Z_{2 * j} optimum", 2 * j - 1, result.optimum)
        report.check(f"Z_{2 * j} optimal classes", 1, result.class_count)
        report.check(
            f"Z_{2 * j} optimum is the standard embedding",
            True,
            bool(result.representatives) and equivalent(chain, result.representatives[0], standard),
        )
        bonds = missing_bonds(chain, standard)
        report.check(
            f"Z_{2 * j} standard embedding missing bonds (external, internal)",
            (4, 0),
            (bonds.external_count, bonds.internal_count),
        )


def suite_z_odd(report: VerifyReport, k_max: int = 7) -> None:
    expected = {1: 1, 3: 1}
    for k, count in verify_odd_Z(k_max):
        report.check(f"Z_{k} optimal classes", expected.get(k, 2), count)


def suite_php(report: VerifyReport) -> None:
    single = LatticeTree(frozenset({(0, 0)}), frozenset())
    for topology in ('open', 'closed'):
        chain = gen_PHP(1, topology)
        folding = tree_to_folding(single, topology)
        bonds = contacts(chain, folding)
        shape = bond_graph_shape(bonds)
        report.check(f"(PHP)^4 {topology}: gadget contacts", 4, bonds.contact_count)
        report.check(
            f"(PHP)^4 {topology}: gadget bond graph",
            (ShapeKind.DISJOINT_EVEN_CYCLES.value, (4,)),
            (shape.kind.value, shape.component_sizes),
        )
        result = enumerate_optimal(chain, _exact())
        oracle = naive_oracle(chain, quotient_chain_automorphisms=True)
        report.check(f"(PHP)^4 {topology}: optimum", 4, result.optimum)
        report.check(
            f"(PHP)^4 {topology}: classes agree with the oracle",
            oracle.class_count,
            result.class_count,
        )
    pair = LatticeTree.from_edges([((0, 0), (1, 0))])
    chain = gen_PHP(2, 'closed')
    bonds = contacts(chain, tree_to_folding(pair, 'closed'))
    report.check("(PHP)^8 closed: two-node tree contacts", 8, bonds.contact_count)
    report.check(
        "(PHP)^8 closed: two-node tree bond graph",
        (ShapeKind.DISJOINT_EVEN_CYCLES.value, (4, 4)),
        (bond_graph_shape(bonds).kind.value, bond_graph_shape(bonds).component_sizes),
    )


def suite_published_rows(report: VerifyReport, rows=(11, 12),
                       progress_callback: Optional[Callable[[int, int], None]] = None,
                       workers: Optional[int] = None) -> None:
    for n in rows:
        record = sweep(n, 'open', workers=workers, progress_callback=progress_callback)
        report.check(f"n={n} unique chains", (PUBLISHED_UNIQUE[n], 2 ** n), (record.unique_count, record.total_count))


def suite_unique_examples(report: VerifyReport, n_max: int = 8) -> None:
    for n in range(1, n_max + 1):
        found = bool(find_unique_examples(n, limit=1))
        report.check(f"n={n} has a uniquely folding chain", n not in (3, 5), found)


SUITES: Dict[str, Callable[..., None]] = {
    'sk': suite_sk,
    'z-even': suite_z_even,
    'z-odd': suite_z_odd,
    'php': suite_php,
    'table1-small': suite_published_rows,
    'unique-examples': suite_unique_examples,
}


def run_suite(name: str, **kwargs) -> VerifyReport:
    """
    Run one named suite

    Raises:
        ValueError: On an unknown suite name
    """
    if name not in SUITES:
        raise ValueError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}")
    started = time.time()
    report = VerifyReport(suite=name)
    SUITES[name](report, **kwargs)
    report.duration_seconds = time.time() - started
    return report
