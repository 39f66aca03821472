"""Secular polynomials of unilateral metric graphs and exact isospectrality.

For a graph with all edge lengths 1 the Laplacian spectrum is encoded by
the secular polynomial det(E(z) - S_v), where E(z) couples the two ends
of each edge by z and S_v is the block-diagonal vertex scattering matrix
with blocks (2/d)J - I for standard (Kirchhoff) conditions.  Nonzero
eigenvalues are (k + 2*pi*m)^2 for each unit-circle root z = e^{ik}; the
eigenvalue 0 has multiplicity equal to the number of components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import ProjectivePoly, polymat_det, poly_roots_unit_circle
from .graphs import GraphError, MetricGraph, components, unit_subdivided


class SecularError(GraphError):
    pass


@dataclass(frozen=True)
class SecularMatrixSpec:
    """Structure of the 2N x 2N matrix E(z) - S_v for a unilateral graph.

    `pairs` lists the endpoint index pairs receiving the z entries (one per
    edge); `blocks` lists each vertex's endpoint indices, whose scattering
    block is (2/d)J - I with d the vertex degree.
    """

    size: int
    pairs: tuple[tuple[int, int], ...]
    blocks: tuple[tuple[int, ...], ...]

    def entry_matrix(self, z: Fraction) -> list[list[Fraction]]:
        m = [[Fraction(0)] * self.size for _ in range(self.size)]
        for a, b in self.pairs:
            m[a][b] += z
            m[b][a] += z
        for block in self.blocks:
            d = len(block)
            off = Fraction(2, d)
            for a in block:
                for b in block:
                    m[a][b] -= off - (1 if a == b else 0)
        return m


def build_secular_matrix(g: MetricGraph) -> SecularMatrixSpec:
    """Secular matrix structure of g; requires all edge lengths equal to 1."""
    if not g.is_unilateral:
        raise SecularError(
            "graph not unilateral; subdivide integer lengths into unit edges first")
    pairs = tuple((2 * i, 2 * i + 1) for i in range(g.n_edges))
    return SecularMatrixSpec(2 * g.n_edges, pairs, g.vertices)


def _as_unilateral(g: MetricGraph) -> MetricGraph:
    if g.is_unilateral:
        return g
    try:
        return unit_subdivided(g)
    except GraphError:
        raise SecularError(
            "graph not unilateral and lengths are not integers; "
            "secular analysis needs unit edges") from None


@lru_cache(maxsize=4096)
def secular_poly(g: MetricGraph) -> ProjectivePoly:
    """Exact secular polynomial of g, degree 2N, projectively normalized.

    Integer edge lengths are subdivided into unit edges first (the metric
    space, hence the spectrum, is unchanged); other lengths are rejected.
    """
    gu = _as_unilateral(g)
    layout = build_secular_matrix(gu)
    return polymat_det(layout.entry_matrix, layout.size, layout.size)


def metric_isospectral(g1: MetricGraph, g2: MetricGraph) -> bool:
    """Exact equality of Laplacian spectra of two (integer-length) graphs.

    True iff the secular polynomials agree projectively and the component
    counts (the multiplicity of the eigenvalue 0) agree.
    """
    if components(g1) != components(g2):
        return False
    return secular_poly(g1) == secular_poly(g2)


@dataclass(frozen=True)
class SpectrumReport:
    """Unit-circle root data of a secular polynomial.

    fundamental_roots lists (k, multiplicity) with k in (0, 2*pi],
    strictly increasing; each k stands for the eigenvalues (k + 2*pi*m)^2,
    m >= 0, except that k = 2*pi encodes (2*pi*m)^2 for m >= 1.  The
    eigenvalue 0 has multiplicity `components`.
    """

    fundamental_roots: tuple[tuple[float, int], ...]
    components: int

    def multiplicity_at(self, k: float, tol: float = 1e-6) -> int:
        for root, mult in self.fundamental_roots:
            if abs(root - k) < tol:
                return mult
        return 0


def spectrum_report(g: MetricGraph, tol: float = 1e-8) -> SpectrumReport:
    """Fundamental roots of the secular polynomial, with multiplicities."""
    roots = poly_roots_unit_circle(secular_poly(g), tol)
    return SpectrumReport(tuple(roots), components(g))
