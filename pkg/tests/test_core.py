"""
Unit tests for core lattice model
"""
import random

import pytest

from src.core import (
    DIHEDRAL_TABLES,
    BondGraph,
    Chain,
    Folding,
    InvalidChainError,
    InvalidFoldingError,
    ShapeKind,
    Topology,
    apply_automorphism,
    bond_graph_shape,
    canonicalize,
    chain_automorphisms,
    contacts,
    embed,
    equivalent,
    isometric,
    max_contact_bound,
    missing_bonds,
    parse_chain,
    random_folding,
)
from src.families import gen_F, gen_S, gen_Z, standard_Z_embedding
from src.search import SearchOptions, enumerate_optimal


@pytest.fixture
def square_chain():
    """S_2 folded as a 3x2 rectangle"""
    return gen_S(2), Folding('EESWWN')


def _random_open_cases(count, max_n, seed):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_n)
        chain = Chain(''.join(rng.choice('HP') for _ in range(n)))
        yield chain, random_folding(chain, rng)


@pytest.fixture(scope='module')
def polygon_pool():
    """Every closed walk class up to length 12 plus the F_k rectangles up to length 20"""
    pool = []
    for n in range(4, 13, 2):
        result = enumerate_optimal(Chain('P' * n, 'closed'), SearchOptions(store_limit=10000))
        pool.extend(f.steps for f in result.representatives)
    pool.extend(gen_F(k).steps for k in range(1, 10))
    return pool


def _random_closed_cases(pool, count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        steps = rng.choice(pool)
        start = rng.randrange(len(steps))
        table = rng.choice(DIHEDRAL_TABLES)
        image = (steps[start:] + steps[:start]).translate(table)
        chain = Chain(''.join(rng.choice('HP') for _ in steps), 'closed')
        yield chain, image


class TestParseChain:
    """Tests for chain parsing and validation"""

    def test_parse_normalises_case(self):
        """Test labels are trimmed and upper-cased"""
        chain = parse_chain(' phpphp ', 'closed')
        assert chain.labels == 'PHPPHP'
        assert chain.topology is Topology.CLOSED
        assert chain.length == 6
        assert chain.h_count == 2

    def test_empty_rejected(self):
        """Test an empty label string is refused"""
        with pytest.raises(InvalidChainError, match="empty"):
            parse_chain('')

    def test_bad_character_rejected(self):
        """Test labels outside H and P are refused"""
        with pytest.raises(InvalidChainError, match="Invalid label"):
            parse_chain('HXP')

    def test_closed_odd_length_rejected(self):
        """Test a closed chain of odd length is refused"""
        with pytest.raises(InvalidChainError, match="even"):
            parse_chain('HPHPH', 'closed')

    def test_closed_too_short_rejected(self):
        """Test a closed chain shorter than four is refused"""
        with pytest.raises(InvalidChainError, match="at least 4"):
            parse_chain('HP', 'closed')

    def test_unknown_topology_rejected(self):
        """Test an unknown topology name is refused"""
        with pytest.raises(InvalidChainError, match="topology"):
            parse_chain('HP', 'circular')

    def test_single_node_chain_is_valid(self):
        """Test a one-node open chain"""
        assert parse_chain('H').step_count == 0

    def test_to_dict(self):
        """Test the chain document"""
        assert parse_chain('HPPH').to_dict() == {'labels': 'HPPH', 'topology': 'open', 'length': 4}


class TestEmbed:
    """Tests for folding a chain onto the lattice"""

    def test_points(self):
        """Test the embedded coordinates of a folding"""
        embedding = embed(Chain('HPPH'), 'NES')
        assert embedding.points == ((0, 0), (0, 1), (1, 1), (1, 0))

    def test_lowercase_string_accepted(self):
        """Test lower-case direction strings are accepted"""
        assert embed(Chain('HPH'), 'en').points[-1] == (1, 1)

    def test_length_mismatch(self):
        """Test a folding of the wrong length is refused"""
        with pytest.raises(InvalidFoldingError, match="steps"):
            embed(Chain('HPPH'), 'NE')

    def test_self_intersection(self):
        """Test a self-intersecting walk is refused"""
        with pytest.raises(InvalidFoldingError, match="self-avoiding"):
            embed(Chain('HPH'), 'EW')

    def test_closed_must_return(self):
        """Test a closed folding must end next to its start"""
        with pytest.raises(InvalidFoldingError, match="return"):
            embed(gen_S(2), 'EEEEEE')

    def test_invalid_direction(self):
        """Test unknown direction letters are refused"""
        with pytest.raises(InvalidFoldingError, match="Invalid direction"):
            Folding('EXN')

    def test_closed_embedding_drops_return(self, square_chain):
        """Test a closed embedding has one point per node"""
        chain, folding = square_chain
        assert len(embed(chain, folding).points) == 6

    def test_random_embeddings_injective(self):
        """Test random foldings embed without collisions"""
        for chain, folding in _random_open_cases(200, 20, seed=1):
            points = embed(chain, folding).points
            assert len(set(points)) == len(points)
            for a, b in zip(folding.steps, folding.steps[1:]):
                assert {a, b} not in ({'E', 'W'}, {'N', 'S'})


class TestContacts:
    """Tests for contact detection and bounds"""

    def test_rectangle_has_one_bond(self, square_chain):
        """Test the S_2 rectangle has one contact"""
        chain, folding = square_chain
        bonds = contacts(chain, folding)
        assert bonds.contacts == frozenset({(1, 4)})
        assert bonds.contact_count == 1

    def test_chain_neighbours_are_not_contacts(self):
        """Test chain neighbours never count as contacts"""
        assert contacts(Chain('HH'), 'E').contact_count == 0
        assert contacts(Chain('HHHH', 'closed'), 'ENWS').contact_count == 0

    def test_max_contact_bound(self):
        """Test the contact upper bound"""
        assert max_contact_bound(Chain('HPPH')) == 3
        assert max_contact_bound(gen_S(2)) == 2

    def test_parity_and_bound_on_random_foldings(self):
        """Test contacts join opposite parity and respect the bound"""
        for chain, folding in _random_open_cases(300, 20, seed=2):
            bonds = contacts(chain, folding)
            assert bonds.contact_count <= max_contact_bound(chain)
            for i, j in bonds.contacts:
                assert (i + j) % 2 == 1
                assert j - i >= 3

    def test_contacts_isometry_invariant(self):
        """Test contacts survive every lattice isometry"""
        for chain, folding in _random_open_cases(100, 16, seed=3):
            base = contacts(chain, folding).contacts
            for table in DIHEDRAL_TABLES:
                assert contacts(chain, folding.steps.translate(table)).contacts == base

    def test_bond_graph_helpers(self):
        """Test bond graph nodes and degrees"""
        graph = BondGraph(frozenset({(0, 3), (3, 6)}))
        assert graph.nodes() == [0, 3, 6]
        assert graph.degree(3) == 2
        assert graph.degree(1) == 0
        assert graph.to_dict() == {'contacts': [[0, 3], [3, 6]], 'contact_count': 2}


class TestCanonicalize:
    """Tests for canonical forms under lattice isometries"""

    def test_known_images(self):
        """Test canonical forms of small walks"""
        assert canonicalize('ENW').steps == 'ENW'
        assert canonicalize('WSE').steps == 'ENW'
        assert canonicalize('ESW').steps == 'ENW'
        assert canonicalize('NNN').steps == 'EEE'

    def test_empty_folding(self):
        """Test the empty folding is its own canonical form"""
        assert canonicalize('').steps == ''

    def test_rejects_invalid_walk(self):
        """Test a self-intersecting walk has no canonical form"""
        with pytest.raises(InvalidFoldingError):
            canonicalize('ENWS')

    def test_closed_topology(self):
        """Test closed foldings canonicalise over start rotations"""
        assert canonicalize('SWNE', 'closed').steps == 'ENWS'

    def test_idempotent_and_invariant(self):
        """Test canonical forms are stable under isometries"""
        for _, folding in _random_open_cases(150, 18, seed=4):
            canon = canonicalize(folding)
            assert canonicalize(canon) == canon
            for table in DIHEDRAL_TABLES:
                assert canonicalize(folding.steps.translate(table)) == canon

    def test_isometric(self):
        """Test isometry between small walks"""
        assert isometric('ENW', 'ESW')
        assert not isometric('EE', 'EN')

    def test_isometric_length_mismatch(self):
        """Test walks of different lengths are refused"""
        with pytest.raises(InvalidFoldingError, match="different lengths"):
            isometric('EE', 'EEE')


class TestMissingBonds:
    """Tests for the missing-bond accounting"""

    def test_single_node(self):
        """Test a single H node misses all four bonds"""
        report = missing_bonds(Chain('H'), '')
        assert report.total_missing == 4
        assert report.external_count == 4
        assert report.by_wall() == {'E': 1, 'N': 1, 'W': 1, 'S': 1}

    def test_rectangle(self, square_chain):
        """Test missing bonds of the S_2 rectangle"""
        chain, folding = square_chain
        report = missing_bonds(chain, folding)
        assert report.account(1).bond_degree == 1
        assert report.account(4).bond_degree == 1
        assert report.total_missing == 2
        assert report.internal_count == 0
        assert report.by_wall() == {'E': 0, 'N': 1, 'W': 0, 'S': 1}

    def test_p_nodes_not_reported(self, square_chain):
        """Test only H nodes are accounted"""
        chain, folding = square_chain
        with pytest.raises(KeyError):
            missing_bonds(chain, folding).account(0)

    def test_internal_missing_bond(self):
        """Test an H node with a P neighbour on the lattice"""
        # node 2 (a P) sits inside the bounding box next to H node 5
        report = missing_bonds(Chain('HPPPPH'), 'ENNWS')
        hole = [m for m in report.missing if not m.external]
        assert hole
        assert all(m.wall is None for m in hole)

    def test_degree_identity_random(self):
        """Test bond degree plus missing bonds is two on random open foldings"""
        for chain, folding in _random_open_cases(1000, 20, seed=5):
            for account in missing_bonds(chain, folding).nodes:
                assert account.bond_degree + account.missing == chain.max_degree(account.node)

    def test_degree_identity_random_closed(self, polygon_pool):
        """Test bond degree plus missing bonds is two on random closed foldings"""
        for chain, steps in _random_closed_cases(polygon_pool, 1000, seed=6):
            for account in missing_bonds(chain, steps).nodes:
                assert account.bond_degree + account.missing == 2

    def test_degree_identity_closed(self):
        """Test the degree identity on the F_k rectangles"""
        for k in range(1, 8):
            chain = gen_S(k)
            for account in missing_bonds(chain, gen_F(k)).nodes:
                assert account.bond_degree + account.missing == 2

    def test_to_dict_totals(self, square_chain):
        """Test the missing bond document totals"""
        chain, folding = square_chain
        data = missing_bonds(chain, folding).to_dict()
        assert data['total_missing'] == 2
        assert data['external'] == 2
        assert len(data['nodes']) == 2


class TestBondGraphShape:
    """Tests for bond graph classification"""

    def test_empty_graph_is_path(self):
        """Test the empty bond graph is an acyclic path"""
        shape = bond_graph_shape(BondGraph(frozenset()))
        assert shape.kind is ShapeKind.ACYCLIC_PATH
        assert shape.component_sizes == ()

    def test_path(self):
        """Test a path of contacts"""
        shape = bond_graph_shape(BondGraph(frozenset({(0, 3), (3, 6), (6, 9)})))
        assert shape.kind is ShapeKind.ACYCLIC_PATH
        assert shape.component_sizes == (4,)
        assert shape.edge_count == 3

    def test_even_cycle(self):
        """Test a single even cycle"""
        shape = bond_graph_shape(BondGraph(frozenset({(1, 4), (4, 7), (7, 10), (1, 10)})))
        assert shape.kind is ShapeKind.DISJOINT_EVEN_CYCLES
        assert shape.component_sizes == (4,)

    def test_star_is_other(self):
        """Test a branching graph is neither shape"""
        shape = bond_graph_shape(BondGraph(frozenset({(0, 3), (0, 5), (0, 7)})))
        assert shape.kind is ShapeKind.OTHER

    def test_odd_cycle_is_other(self):
        """Test an odd cycle is neither shape"""
        shape = bond_graph_shape(BondGraph(frozenset({(0, 1), (1, 2), (0, 2)})))
        assert shape.kind is ShapeKind.OTHER


class TestChainAutomorphisms:
    """Tests for label-preserving chain symmetries"""

    def test_open_palindrome(self):
        """Test a palindromic open chain admits reversal"""
        assert chain_automorphisms(Chain('HPPH')) == [(False, 0), (True, 0)]

    def test_open_asymmetric(self):
        """Test an asymmetric open chain has only the identity"""
        assert chain_automorphisms(Chain('HPP')) == [(False, 0)]

    def test_closed(self):
        """Test the rotations and reflections of a closed chain"""
        assert chain_automorphisms(Chain('HPHP', 'closed')) == [
            (False, 0), (False, 2), (True, 0), (True, 2),
        ]

    def test_open_reversal(self):
        """Test reading an open folding from the far end"""
        assert apply_automorphism('EEN', (True, 0), 'open') == 'SWW'

    def test_closed_rotation_and_reflection(self):
        """Test re-reading a closed folding"""
        assert apply_automorphism('ENWS', (False, 1), 'closed') == 'NWSE'
        assert apply_automorphism('ENWS', (True, 0), 'closed') == 'NESW'

    def test_images_keep_contacts(self):
        """Test chain symmetry images keep their contact count"""
        for k in range(2, 7):
            chain = gen_S(k)
            folding = gen_F(k).steps
            count = contacts(chain, folding).contact_count
            for automorphism in chain_automorphisms(chain):
                image = apply_automorphism(folding, automorphism, chain.topology)
                assert contacts(chain, image).contact_count == count

    def test_equivalent_under_reversal(self):
        """Test reversal images are one class only under the quotient"""
        chain = gen_Z(4)
        standard = standard_Z_embedding(2).steps
        image = apply_automorphism(standard, (True, 0), chain.topology)
        assert not isometric(standard, image)
        assert equivalent(chain, standard, image)
        assert not equivalent(chain, standard, image, quotient=False)

    def test_equivalent_rejects_invalid(self):
        """Test equivalence checks validate both foldings"""
        with pytest.raises(InvalidFoldingError):
            equivalent(Chain('HPPH'), 'ENW', 'EEEE')
