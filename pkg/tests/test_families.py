"""
Unit tests for chain families and lattice trees
"""
import math

import pytest

from src.core import (
    Chain,
    ShapeKind,
    Topology,
    bond_graph_shape,
    canonical_steps,
    canonicalize,
    contacts,
    embed,
    missing_bonds,
)
from src.families import (
    FamilyParameterError,
    LatticeTree,
    enumerate_lattice_trees,
    gen_F,
    gen_PHP,
    gen_S,
    gen_Z,
    recognize_family,
    staircase_paths,
    standard_Z_embedding,
    tree_to_folding,
)


class TestGenerators:
    """Tests for the chain and folding generators"""

    def test_s_chains(self):
        """Test the S_k label sequences"""
        assert gen_S(1).labels == 'PHPP'
        assert gen_S(2).labels == 'PHPPHP'
        assert gen_S(3).labels == 'PHPHPPHP'
        assert gen_S(3).topology is Topology.CLOSED

    def test_z_chains(self):
        """Test the Z_k label sequences"""
        assert gen_Z(1).labels == 'HP'
        assert gen_Z(4).labels == 'HPHPPHPH'
        assert gen_Z(5).labels == 'HPHPHPPHPH'
        assert gen_Z(4).topology is Topology.OPEN

    def test_z_is_s_without_its_outer_ps(self):
        """Test Z_k is S_k with both end Ps removed"""
        for k in range(1, 10):
            assert gen_Z(k).labels == gen_S(k).labels[1:-1]

    def test_php(self):
        """Test the (PHP)^4k chains"""
        assert gen_PHP(1).labels == 'PHP' * 4
        assert gen_PHP(2, 'closed').length == 24
        assert gen_PHP(2, 'closed').topology is Topology.CLOSED

    def test_f_is_valid_closed_walk(self):
        """Test F_k embeds S_k"""
        for k in range(1, 10):
            embedding = embed(gen_S(k), gen_F(k))
            assert len(embedding.points) == 2 * k + 2

    @pytest.mark.parametrize('bad', [0, -3, 1.5, True, '2'])
    def test_bad_parameter(self, bad):
        """Test non-positive or non-integer k is refused"""
        with pytest.raises(FamilyParameterError):
            gen_S(bad)
        with pytest.raises(FamilyParameterError):
            gen_Z(bad)

    def test_bad_j(self):
        """Test a non-positive j is refused"""
        with pytest.raises(FamilyParameterError, match="j must be"):
            standard_Z_embedding(0)


class TestKnownFoldings:
    """Contact counts of the named foldings"""

    @pytest.mark.parametrize('k', range(1, 10))
    def test_staircase_contacts(self, k):
        """Test F_k has k-1 contacts"""
        assert contacts(gen_S(k), gen_F(k)).contact_count == k - 1

    def test_small_staircases(self):
        """Test the first F_k foldings"""
        assert gen_F(2).steps == 'EESWWN'
        assert contacts(gen_S(3), gen_F(3)).contact_count == 2
        assert contacts(gen_S(4), gen_F(4)).contact_count == 3

    @pytest.mark.parametrize('j', range(1, 7))
    def test_standard_embedding(self, j):
        """Test the standard Z_2j embedding misses only the end bonds"""
        chain = gen_Z(2 * j)
        folding = standard_Z_embedding(j)
        assert contacts(chain, folding).contact_count == 2 * j - 1
        report = missing_bonds(chain, folding)
        assert report.external_count == 4
        assert report.internal_count == 0

    def test_standard_embedding_z4(self):
        """Test the standard Z_4 embedding"""
        assert standard_Z_embedding(2).steps == 'WNNESES'

    def test_standard_embedding_end_walls(self):
        """Test the walls of the end missing bonds"""
        report = missing_bonds(gen_Z(6), standard_Z_embedding(3))
        assert sorted(m.wall for m in report.missing) == ['E', 'S', 'S', 'W']

    def test_bond_graph_is_path(self):
        """Test the standard Z_2j bond graph is one path"""
        for j in range(1, 6):
            shape = bond_graph_shape(contacts(gen_Z(2 * j), standard_Z_embedding(j)))
            assert shape.kind is ShapeKind.ACYCLIC_PATH
            assert shape.component_sizes == (2 * j,)


class TestRecognizeFamily:
    """Tests for family recognition"""

    def test_s(self):
        """Test an S_k chain is recognised"""
        assert recognize_family(gen_S(5)) == gen_F(5)

    def test_even_z(self):
        """Test an even Z_k chain is recognised"""
        assert recognize_family(gen_Z(6)) == standard_Z_embedding(3)

    def test_odd_z_not_recognised(self):
        """Test an odd Z_k chain has no named folding"""
        assert recognize_family(gen_Z(5)) is None

    def test_php(self):
        """Test both (PHP)^8 topologies fold with full contacts"""
        for topology in ('open', 'closed'):
            chain = gen_PHP(2, topology)
            folding = recognize_family(chain)
            assert contacts(chain, folding).contact_count == 8

    def test_other(self):
        """Test an unrelated chain is not recognised"""
        assert recognize_family(Chain('HHPPHH')) is None


class TestLatticeTrees:
    """Tests for lattice tree construction and enumeration"""

    def test_counts(self):
        """Test the number of lattice trees on few nodes"""
        assert [len(enumerate_lattice_trees(k)) for k in (1, 2, 3)] == [1, 2, 6]

    def test_trees_are_normalized(self):
        """Test enumerated trees touch both axes"""
        for tree in enumerate_lattice_trees(4):
            assert min(p[0] for p in tree.nodes) == 0
            assert min(p[1] for p in tree.nodes) == 0
            assert tree.size == 4

    def test_tree_limit(self):
        """Test tree enumeration refuses large sizes"""
        with pytest.raises(FamilyParameterError, match="limited"):
            enumerate_lattice_trees(9)

    def test_staircase_count(self):
        """Test staircase paths are distinct"""
        for k in range(1, 7):
            paths = staircase_paths(k)
            assert len(paths) == 2 ** (k - 1)
            assert len({p.key() for p in paths}) == len(paths)

    @pytest.mark.parametrize('k', range(1, 7))
    def test_staircases_are_trees(self, k):
        """Test every staircase path is an enumerated tree"""
        staircases = {p.key() for p in staircase_paths(k)}
        assert len(staircases) == 2 ** (k - 1)
        assert staircases <= {t.key() for t in enumerate_lattice_trees(k)}

    def test_edges_are_normalised(self):
        """Test edge endpoints are ordered"""
        tree = LatticeTree.from_edges([((1, 0), (0, 0))])
        assert tree.edges == frozenset({((0, 0), (1, 0))})

    def test_non_unit_edge(self):
        """Test edges longer than one are refused"""
        with pytest.raises(FamilyParameterError, match="unit"):
            LatticeTree.from_edges([((0, 0), (2, 0))])

    def test_cycle_rejected(self):
        """Test a cycle is not a tree"""
        square = [((0, 0), (1, 0)), ((1, 0), (1, 1)), ((0, 1), (1, 1)), ((0, 0), (0, 1))]
        with pytest.raises(FamilyParameterError, match="edges"):
            LatticeTree.from_edges(square)

    def test_disconnected_rejected(self):
        """Test a disconnected graph is not a tree"""
        with pytest.raises(FamilyParameterError, match="connected"):
            LatticeTree(
                frozenset({(0, 0), (1, 0), (0, 1), (1, 1), (3, 0)}),
                frozenset({((0, 0), (1, 0)), ((1, 0), (1, 1)), ((0, 1), (1, 1)), ((0, 0), (0, 1))}),
            )

    def test_empty_rejected(self):
        """Test a tree needs a node"""
        with pytest.raises(FamilyParameterError, match="at least one"):
            LatticeTree(frozenset(), frozenset())

    def test_to_dict(self):
        """Test the lattice tree document"""
        tree = LatticeTree.from_edges([((0, 0), (0, 1))])
        assert tree.to_dict() == {'size': 2, 'nodes': [[0, 0], [0, 1]], 'edges': [[[0, 0], [0, 1]]]}


class TestTreeToFolding:
    """Gadget foldings of (PHP)^4k"""

    @pytest.mark.parametrize('k', [1, 2, 3, 4])
    @pytest.mark.parametrize('topology', ['open', 'closed'])
    def test_every_tree_gives_full_contacts(self, k, topology):
        """Test every tree folds (PHP)^4k with disjoint 4-cycles"""
        chain = gen_PHP(k, topology)
        for tree in enumerate_lattice_trees(k):
            bonds = contacts(chain, tree_to_folding(tree, topology))
            assert bonds.contact_count == 4 * k
            shape = bond_graph_shape(bonds)
            assert shape.kind is ShapeKind.DISJOINT_EVEN_CYCLES
            assert shape.component_sizes == (4,) * k

    def test_open_starts_east(self):
        """Test open gadget foldings start east"""
        assert tree_to_folding(LatticeTree(frozenset({(0, 0)}), frozenset())).steps[0] == 'E'

    def test_open_drops_closing_step(self):
        """Test open gadget foldings drop the closing step"""
        tree = LatticeTree.from_edges([((0, 0), (1, 0))])
        assert len(tree_to_folding(tree, 'open').steps) == 23
        assert len(tree_to_folding(tree, 'closed').steps) == 24

    def test_distinct_trees_give_distinct_foldings(self):
        """Test distinct trees fold differently"""
        trees = enumerate_lattice_trees(3)
        foldings = {tree_to_folding(t, 'closed').steps for t in trees}
        assert len(foldings) == len(trees)
        bent = LatticeTree.from_edges([((0, 0), (1, 0)), ((1, 0), (1, 1))])
        straight = LatticeTree.from_edges([((0, 0), (1, 0)), ((1, 0), (2, 0))])
        assert canonical_steps(tree_to_folding(bent).steps) != canonical_steps(tree_to_folding(straight).steps)

    @pytest.mark.parametrize('k', [1, 2, 3, 4])
    @pytest.mark.parametrize('topology', ['open', 'closed'])
    def test_tree_images_cover_classes(self, k, topology):
        """Test tree images reach at least one class per eight trees"""
        trees = enumerate_lattice_trees(k)
        classes = {canonicalize(tree_to_folding(t, topology), topology).steps for t in trees}
        assert len(classes) >= math.ceil(len(trees) / 8)
