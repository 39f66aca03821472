"""specgraph: exact and numeric spectral computation for metric graphs.

Secular polynomials and normalized-Laplacian characteristic polynomials
are computed in exact rational arithmetic; M-functions, Steklov
eigenvalue branches and detectable spectra numerically.  Construction
methods assemble isospectral graph pairs and certify them exactly.
"""

from .constructions import (CATALOG_IDS, ComposedHost, Slot, assemble,
                            build_clarifying_example, catalog,
                            inner_symmetry_quotient, method1_extend,
                            method2_exchange, method2_permute, substitute)
from .discrete import (LnCharpoly, PropositionReport, VonBelowReport,
                       ln_charpoly, ln_eigenvalues, ln_isospectral,
                       proposition_check, von_below_check)
from .exact import (ExactError, ProjectivePoly, RationalMatrix, charpoly_exact,
                    det_exact, poly_mul, poly_normalize, poly_pow,
                    poly_roots_unit_circle, polymat_det, squarefree_factors)
from .graphs import (DiscreteGraph, GraphError, GraphFormatError, MetricGraph,
                     betti, canonical_form, chop_vertex, components,
                     discrete_betti, discrete_components, discrete_from_adj,
                     disjoint_union, format_graph, from_edge_list, glue,
                     join_points, merge_vertices, metric_from_discrete,
                     metric_isomorphic, parse_graph, scale_lengths,
                     subdivide_edge, suppress_degree2, to_discrete,
                     unit_subdivided, validate)
from .mfunction import (DEFAULT_SAMPLES, DetectionResult, EquivalenceResult,
                        MFunEval, Method3Report, SingularSampleError,
                        SteklovCurve, detectable_spectrum, edge_m_block,
                        invisible_multiplicity, m_function, method3_verify,
                        steklov_eigs, steklov_equivalent, steklov_sweep)
from .search import (IsospectralFamily, classify, enumerate_connected_multi,
                     enumerate_connected_simple)
from .secular import (SecularError, SecularMatrixSpec, SpectrumReport,
                      build_secular_matrix, metric_isospectral, secular_poly,
                      spectrum_report)

__version__ = "0.1.0"
