import math
import random
from fractions import Fraction

import pytest

from specgraph import (SecularError, betti, build_secular_matrix, components,
                       from_edge_list, metric_isospectral, poly_mul,
                       poly_normalize, poly_pow, poly_roots_unit_circle,
                       scale_lengths, secular_poly, spectrum_report,
                       subdivide_edge, unit_subdivided)
from specgraph.constructions import catalog

from conftest import random_connected_multigraph

K5_FACTORS = poly_mul(poly_mul(poly_pow([-1, 1], 7), poly_pow([1, 1], 5)),
                      poly_pow([2, 1, 2], 4))
PAIR_FACTORS = poly_mul(poly_mul(poly_pow([-1, 1], 6), poly_pow([1, 1], 4)),
                        poly_mul(poly_pow([2, 1, 2], 3), [2, 1, 2, 1, 2]))


class TestSecularMatrix:
    def test_single_edge_blocks(self):
        layout = build_secular_matrix(from_edge_list(2, [(0, 1)]))
        assert layout.pairs == ((0, 1),)
        m = layout.entry_matrix(Fraction(2))
        assert m == [[Fraction(-1), Fraction(2)], [Fraction(2), Fraction(-1)]]

    def test_loop_block(self):
        layout = build_secular_matrix(from_edge_list(1, [(0, 0)]))
        m = layout.entry_matrix(Fraction(3))
        # E couples the two ends by z; the degree-2 block is J - I
        assert m == [[Fraction(0), Fraction(2)], [Fraction(2), Fraction(0)]]

    def test_k5_blocks_are_half_j_minus_i(self):
        layout = build_secular_matrix(catalog("K5"))
        m = layout.entry_matrix(Fraction(0))
        for block in layout.blocks:
            assert len(block) == 4
            for a in block:
                for b in block:
                    expected = Fraction(2, 4) - (1 if a == b else 0)
                    assert m[a][b] == -expected

    def test_rejects_noninteger_lengths(self):
        g = from_edge_list(2, [(0, 1, Fraction(1, 2))])
        with pytest.raises(SecularError, match="not unilateral"):
            build_secular_matrix(g)
        with pytest.raises(SecularError, match="unit edges"):
            secular_poly(g)


class TestSecularPoly:
    def test_k5(self):
        assert secular_poly(catalog("K5")) == poly_normalize(K5_FACTORS)

    def test_chopped_pair(self):
        target = poly_normalize(PAIR_FACTORS)
        assert secular_poly(catalog("Gamma1")) == target
        assert secular_poly(catalog("Gamma2")) == target

    def test_single_edge(self):
        assert secular_poly(from_edge_list(2, [(0, 1)])).coeffs == (-1, 0, 1)

    def test_integer_lengths_subdivide_automatically(self):
        g = from_edge_list(2, [(0, 1, 2), (0, 1, 2)])
        assert secular_poly(g) == secular_poly(unit_subdivided(g))

    def test_degree_is_twice_edge_count(self):
        rng = random.Random(41)
        for _ in range(15):
            g = random_connected_multigraph(rng)
            assert secular_poly(g).degree == 2 * g.n_edges

    def test_palindromic(self):
        rng = random.Random(43)
        graphs = [catalog(n) for n in ("K5", "Gamma1", "Gamma2", "C3", "path_3")]
        graphs += [random_connected_multigraph(rng) for _ in range(10)]
        for g in graphs:
            c = list(secular_poly(g).coeffs)
            assert c[::-1] == c or c[::-1] == [-x for x in c]


class TestIsospectral:
    def test_pair(self):
        assert metric_isospectral(catalog("Gamma1"), catalog("Gamma2"))

    def test_k5_vs_partner(self):
        assert not metric_isospectral(catalog("K5"), catalog("Gamma1"))

    def test_reflexive(self):
        rng = random.Random(47)
        for _ in range(5):
            g = random_connected_multigraph(rng)
            assert metric_isospectral(g, g)

    def test_component_counts_compared(self):
        one = from_edge_list(2, [(0, 1)])
        two = from_edge_list(4, [(0, 1), (2, 3)])
        assert not metric_isospectral(one, two)


class TestSpectrumReport:
    def test_k5_report(self):
        rep = spectrum_report(catalog("K5"))
        roots = dict((round(k, 9), m) for k, m in rep.fundamental_roots)
        k1 = math.acos(-0.25)
        assert roots[round(2 * math.pi, 9)] == 7
        assert roots[round(math.pi, 9)] == 5
        assert roots[round(k1, 9)] == 4
        assert roots[round(2 * math.pi - k1, 9)] == 4
        assert rep.components == 1

    def test_loop(self):
        rep = spectrum_report(from_edge_list(1, [(0, 0)]))
        assert rep.fundamental_roots == ((2 * math.pi, 2),)
        assert rep.components == 1

    def test_first_partner_pi_roots(self):
        rep = spectrum_report(catalog("Gamma1"))
        assert rep.multiplicity_at(2 * math.pi) == 6
        assert rep.multiplicity_at(math.pi) == 4

    def test_multiplicities_sum_to_degree(self):
        rng = random.Random(53)
        for _ in range(10):
            g = random_connected_multigraph(rng)
            rep = spectrum_report(g)
            assert sum(m for _, m in rep.fundamental_roots) == 2 * g.n_edges

    def test_roots_on_circle_for_random_graphs(self):
        rng = random.Random(59)
        for _ in range(15):
            g = random_connected_multigraph(rng)
            poly_roots_unit_circle(secular_poly(g), 1e-8)

    def test_unit_root_multiplicity_is_one_plus_betti(self):
        for name in ("K5", "Gamma1", "Gamma2", "Gamma1p", "Gamma2p",
                     "C1", "C3", "path_2", "path_4", "S4", "K4"):
            g = catalog(name)
            assert components(g) == 1
            rep = spectrum_report(g)
            assert rep.multiplicity_at(2 * math.pi) == 1 + betti(g)

    def test_half_subdivision_doubles_the_report(self):
        for g in (catalog("K4"), catalog("C3"), catalog("K5")):
            half = g
            for e in range(g.n_edges):
                # halve edge e; the second piece lands at the end each time
                half = subdivide_edge(half, e, Fraction(1, 2))
            doubled = scale_lengths(half, 2)
            rep = spectrum_report(g)
            rep2 = spectrum_report(doubled)
            expected = sorted([(k / 2, m) for k, m in rep.fundamental_roots]
                              + [(k / 2 + math.pi, m) for k, m in rep.fundamental_roots])
            assert len(rep2.fundamental_roots) == len(expected)
            for (ka, ma), (kb, mb) in zip(rep2.fundamental_roots, expected):
                assert ka == pytest.approx(kb, abs=1e-8)
                assert ma == mb
