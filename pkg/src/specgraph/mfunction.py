"""Titchmarsh-Weyl M-functions on the contact set, evaluated numerically.

M(lambda) maps boundary values on the contact vertices to summed outgoing
derivatives of the lambda-solution that satisfies standard (Kirchhoff)
conditions at all interior vertices.  It is assembled from per-edge 2x2
blocks and a Schur complement over the interior vertices.  Its
eigenvalues at fixed real lambda are the Steklov eigenvalues; their zero
crossings as lambda increases mark the detectable part of the spectrum.

Singularities (an edge at a Dirichlet resonance, or an interior Dirichlet
eigenvalue) are flagged values, never exceptions, so sweeps are total.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graphs import GraphError, MetricGraph
from .secular import spectrum_report

EDGE_SINGULAR_TOL = 1e-10
INTERIOR_COND_LIMIT = 1e10
CLUSTER_TOL = 1e-7

#: sample set used by default for equivalence checks: the negative half
#: line is pole-free, a few positive values catch sign conventions.
DEFAULT_SAMPLES: tuple[float, ...] = (-5.0, -4.0, -3.0, -2.0, -1.0, 0.3, 0.7, 1.3, 2.1)


class SingularSampleError(GraphError):
    """An operation hit a flagged singular lambda and cannot proceed."""


def edge_m_block(length: Fraction | float, lam: float) -> np.ndarray | None:
    """2x2 M-function block of a single edge, or None at a singular lambda.

    Diagonal -k*cot(k*l) and off-diagonal k/sin(k*l) for lam = k^2 > 0;
    the hyperbolic analogue for lam < 0 and the -1/l, 1/l limit at 0.
    """
    l = float(length)
    if lam > 0:
        k = math.sqrt(lam)
        s = math.sin(k * l)
        if abs(s) < EDGE_SINGULAR_TOL:
            return None
        a = -k * math.cos(k * l) / s
        b = k / s
    elif lam < 0:
        kappa = math.sqrt(-lam)
        a = -kappa / math.tanh(kappa * l)
        x = kappa * l
        b = kappa / math.sinh(x) if x < 350.0 else 0.0
    else:
        a = -1.0 / l
        b = 1.0 / l
    return np.array([[a, b], [b, a]])


@dataclass(frozen=True)
class MFunEval:
    """M-function value at one real lambda (matrix is None when singular)."""

    lam: float
    matrix: np.ndarray | None
    regular: bool


def _assemble(g: MetricGraph, lam: float) -> np.ndarray | None:
    """Vertex-indexed derivative map T(lambda), or None if an edge is singular."""
    n = g.n_vertices
    t = np.zeros((n, n))
    for u, v, length in g.edge_list():
        block = edge_m_block(length, lam)
        if block is None:
            return None
        a, b = block[0, 0], block[0, 1]
        t[u, u] += a
        t[v, v] += a
        t[u, v] += b
        t[v, u] += b
    return t


def m_function(g: MetricGraph, lam: float) -> MFunEval:
    """M-function of g on its contact set at real lambda.

    Interior vertices are eliminated by a Schur complement; the evaluation
    is flagged singular when an edge block is singular or the interior
    block is numerically non-invertible (interior Dirichlet eigenvalue).
    """
    if not g.contacts:
        raise GraphError("empty contact set")
    t = _assemble(g, lam)
    if t is None:
        return MFunEval(lam, None, False)
    contact = list(g.contacts)
    interior = [v for v in range(g.n_vertices) if v not in set(contact)]
    a = t[np.ix_(contact, contact)]
    if not interior:
        return MFunEval(lam, a, True)
    b = t[np.ix_(contact, interior)]
    c = t[np.ix_(interior, interior)]
    sv = np.linalg.svd(c, compute_uv=False)
    if sv[-1] < max(1.0, sv[0]) / INTERIOR_COND_LIMIT:
        return MFunEval(lam, None, False)
    m = a - b @ np.linalg.solve(c, b.T)
    return MFunEval(lam, m, True)


def steklov_eigs(g: MetricGraph, lam: float) -> np.ndarray | None:
    """Sorted Steklov eigenvalues at lambda, or None at a singular point."""
    ev = m_function(g, lam)
    if not ev.regular:
        return None
    return np.linalg.eigvalsh(ev.matrix)


@dataclass(frozen=True)
class SteklovCurve:
    """Steklov eigenvalue branches sampled over a lambda grid.

    branches[i] is the ascending eigenvalue tuple at grid[i], or None when
    the sample is singular.
    """

    grid: tuple[float, ...]
    branches: tuple[tuple[float, ...] | None, ...]

    @property
    def n_singular(self) -> int:
        return sum(1 for b in self.branches if b is None)


def steklov_sweep(g: MetricGraph, lambda_min: float, lambda_max: float,
                  steps: int) -> SteklovCurve:
    """Uniform sweep of the Steklov branches over [lambda_min, lambda_max]."""
    if not lambda_min < lambda_max:
        raise GraphError("need lambda_min < lambda_max")
    if steps < 2:
        raise GraphError("need at least two steps")
    grid = [lambda_min + (lambda_max - lambda_min) * i / (steps - 1)
            for i in range(steps)]
    branches: list[tuple[float, ...] | None] = []
    for lam in grid:
        eigs = steklov_eigs(g, lam)
        branches.append(None if eigs is None else tuple(float(x) for x in eigs))
    return SteklovCurve(tuple(grid), tuple(branches))


# ---------------------------------------------------------------------------
# detectable spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionResult:
    """Zero crossings of Steklov branches: (k, multiplicity), plus warnings."""

    points: tuple[tuple[float, int], ...]
    warnings: tuple[str, ...]


def _negative_count(g: MetricGraph, k: float) -> int | None:
    eigs = steklov_eigs(g, k * k)
    if eigs is None:
        return None
    return int(np.sum(eigs < 0.0))


_POLE_MAGNITUDE = 1e4


def detectable_spectrum(g: MetricGraph, k_max: float,
                        grid_step: float = 0.01,
                        refine_tol: float = 1e-8) -> DetectionResult:
    """Detectable eigenvalues k in (grid_step, k_max] with multiplicities.

    Tracks the number of negative Steklov eigenvalues along a k grid and
    bisects every net decrease; the drop across the refined bracket is the
    multiplicity.  Crossings sitting exactly at an edge pole (k a multiple
    of pi over an edge length) are invisible to the count, so those
    candidate points are checked separately by counting branches that pass
    through zero from both sides of the pole.  Remaining brackets with
    flagged singular samples are skipped and reported; the exact secular
    route is the authority for zeros merged with interior poles.
    """
    if not g.contacts:
        raise GraphError("empty contact set")
    raw: list[tuple[float, int, bool]] = []
    notes: list[str] = []

    ks: list[float] = []
    k = grid_step
    while k <= k_max + 1e-12:
        ks.append(k)
        k += grid_step
    counts = [_negative_count(g, k) for k in ks]

    def crossing_at(k0: float, fallback: int) -> tuple[int, bool]:
        return _crossing_multiplicity(g, k0, fallback)

    def refine(k1: float, n1: int, k2: float, n2: int) -> None:
        if n1 == n2:
            return
        if k2 - k1 <= refine_tol:
            drop = n1 - n2
            if drop > 0:
                k0 = (k1 + k2) / 2
                mult, at_pole = crossing_at(k0, drop)
                raw.append((k0, mult, at_pole))
            # a negative net change this tight is a pole, not a crossing
            return
        mid = 0.5 * (k1 + k2)
        n_mid = _negative_count(g, mid)
        if n_mid is None:
            mid += 0.01 * (k2 - k1)
            n_mid = _negative_count(g, mid)
            if n_mid is None:
                notes.append(f"singular midpoints near k={mid:.6g}; bracket skipped")
                return
        refine(k1, n1, mid, n_mid)
        refine(mid, n_mid, k2, n2)

    prev: tuple[float, int] | None = None
    pending_flag = False
    for k, n in zip(ks, counts):
        if n is None:
            notes.append(f"singular sample at k={k:.6g}")
            pending_flag = True
            continue
        if prev is not None:
            k1, n1 = prev
            if pending_flag:
                if n1 != n:
                    notes.append(
                        f"count change across singular sample in ({k1:.6g}, {k:.6g}) "
                        "not refined")
            elif n1 > n:
                refine(k1, n1, k, n)
        prev = (k, n)
        pending_flag = False

    # crossings exactly at a pole may not change the negative count at all
    # (the pole jump cancels them), so pole locations are probed explicitly
    eps = 1e-4
    candidates = _edge_pole_candidates(g, k_max)
    candidates += _interior_pole_candidates(g, ks, counts, refine_tol)
    for k0 in sorted(candidates):
        if k0 <= grid_step + eps:
            continue
        if any(abs(k0 - kp) < 10 * eps for kp, _, _ in raw):
            continue
        mult = _pole_crossing_count(g, k0, eps=eps)
        if mult > 0:
            raw.append((k0, mult, True))

    # adjacent refined brackets at one pole re-count the same crossings
    raw.sort()
    points: list[tuple[float, int, bool]] = []
    for k0, mult, at_pole in raw:
        if points and abs(k0 - points[-1][0]) < 10 * refine_tol:
            pk, pm, ppole = points[-1]
            combined = max(pm, mult) if (at_pole or ppole) else pm + mult
            points[-1] = (pk, combined, ppole or at_pole)
        else:
            points.append((k0, mult, at_pole))
    return DetectionResult(tuple((k, m) for k, m, _ in points), tuple(notes))


def _edge_pole_candidates(g: MetricGraph, k_max: float) -> list[float]:
    """Distinct k values in (0, k_max] where some edge block is singular."""
    out: list[float] = []
    for length in sorted(set(g.lengths)):
        step = math.pi / float(length)
        m = 1
        while m * step <= k_max + 1e-12:
            k0 = m * step
            if not any(abs(k0 - other) < 1e-9 for other in out):
                out.append(k0)
            m += 1
    return sorted(out)


def _interior_pole_candidates(g: MetricGraph, ks: Sequence[float],
                              counts: Sequence[int | None],
                              refine_tol: float) -> list[float]:
    """Interior Dirichlet eigenvalues in k, the poles of the Schur complement.

    The interior block C(lambda) has nondecreasing eigenvalue branches
    between edge poles, so its zero crossings are bracketed by the drop in
    its negative-eigenvalue count, exactly like the detectable spectrum.
    """
    contact_set = set(g.contacts)
    interior = [v for v in range(g.n_vertices) if v not in contact_set]
    if not interior:
        return []

    def neg_count(k: float) -> int | None:
        t = _assemble(g, k * k)
        if t is None:
            return None
        return int(np.sum(np.linalg.eigvalsh(t[np.ix_(interior, interior)]) < 0.0))

    poles: list[float] = []

    def refine(k1: float, n1: int, k2: float, n2: int) -> None:
        if n1 <= n2:
            return
        if k2 - k1 <= refine_tol:
            poles.append((k1 + k2) / 2)
            return
        mid = 0.5 * (k1 + k2)
        n_mid = neg_count(mid)
        if n_mid is None:
            mid += 0.01 * (k2 - k1)
            n_mid = neg_count(mid)
            if n_mid is None:
                return
        refine(k1, n1, mid, n_mid)
        refine(mid, n_mid, k2, n2)

    prev: tuple[float, int] | None = None
    for k, main_count in zip(ks, counts):
        n = neg_count(k) if main_count is not None else None
        if n is None:
            prev = None
            continue
        if prev is not None and prev[1] > n:
            refine(prev[0], prev[1], k, n)
        prev = (k, n)
    return poles


# ---------------------------------------------------------------------------
# equivalence and subspace comparisons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    max_residual: float

    def __bool__(self) -> bool:
        return self.equivalent


def steklov_equivalent(g1: MetricGraph, g2: MetricGraph,
                       bijection: Sequence[tuple[int, int]] | None = None,
                       samples: Sequence[float] = DEFAULT_SAMPLES,
                       tol: float = 1e-9) -> EquivalenceResult:
    """Whether M_{g1} and M_{g2} agree under a contact pairing at the samples.

    The bijection pairs contact positions of g1 with contact positions of
    g2 (identity by default).  A flagged singular sample raises; pick
    samples away from the singularities of both graphs.
    """
    b1, b2 = len(g1.contacts), len(g2.contacts)
    if b1 != b2:
        raise GraphError("contact counts differ")
    if bijection is None:
        bijection = [(i, i) for i in range(b1)]
    if (sorted(p for p, _ in bijection) != list(range(b1))
            or sorted(q for _, q in bijection) != list(range(b1))):
        raise GraphError("bijection must pair all contacts exactly once")
    sigma = [0] * b1
    for p, q in bijection:
        sigma[p] = q
    worst = 0.0
    for lam in samples:
        e1 = m_function(g1, lam)
        e2 = m_function(g2, lam)
        if not (e1.regular and e2.regular):
            raise SingularSampleError(
                f"singular sample lambda={lam}; choose different samples")
        permuted = e2.matrix[np.ix_(sigma, sigma)]
        worst = max(worst, float(np.max(np.abs(e1.matrix - permuted))))
    return EquivalenceResult(worst < tol, worst)


def _crossing_multiplicity(g: MetricGraph, k: float, fallback: int,
                           eps: float = 1e-4,
                           window: float = 0.05) -> tuple[int, bool]:
    """Branches crossing zero at k, robust to a pole sitting at k.

    Away from poles the drop in the negative-eigenvalue count across the
    bracket (the fallback) is authoritative.  At a pole, branches passing
    straight through zero are O(eps) on both sides while pole branches are
    O(1/eps), so small negatives before and small positives after are
    counted instead.  Returns (multiplicity, pole seen).
    """
    before = steklov_eigs(g, (k - eps) ** 2)
    after = steklov_eigs(g, (k + eps) ** 2)
    if before is None or after is None:
        raise SingularSampleError(f"singular bracket around k={k:.6g}")
    if max(np.max(np.abs(before)), np.max(np.abs(after))) < _POLE_MAGNITUDE:
        return fallback, False
    nb = int(np.sum((before > -window) & (before < 0.0)))
    na = int(np.sum((after < window) & (after > 0.0)))
    if nb != na:
        warnings.warn(
            f"asymmetric crossing count at pole k={k:.6g}: {nb} before, {na} after",
            stacklevel=2)
    return min(nb, na), True


def _pole_crossing_count(g: MetricGraph, k: float, eps: float = 1e-4) -> int:
    return _crossing_multiplicity(g, k, 0, eps=eps)[0]


def invisible_multiplicity(g: MetricGraph, k: float) -> int:
    """Secular multiplicity at the fundamental root k minus detectable part.

    The detectable part is the number of Steklov branches crossing zero at
    k, counted pole-robustly from both sides of a tight bracket.
    """
    report = spectrum_report(g)
    sec = report.multiplicity_at(k)
    if sec == 0:
        raise GraphError(f"k={k:.6g} is not a fundamental root")
    before = _negative_count(g, k - 1e-4)
    after = _negative_count(g, k + 1e-4)
    if before is None or after is None:
        raise SingularSampleError(f"singular bracket around k={k:.6g}")
    det, _ = _crossing_multiplicity(g, k, max(before - after, 0))
    invisible = sec - det
    if invisible < 0:
        warnings.warn(
            f"detectable multiplicity {det} exceeds secular multiplicity {sec} "
            f"at k={k:.6g}; clamping to 0", stacklevel=2)
        return 0
    return invisible


@dataclass(frozen=True)
class Method3Sample:
    lam: float
    degenerate_found: bool
    eigenvalues_match: bool
    complement_match: bool

    @property
    def ok(self) -> bool:
        return self.degenerate_found and self.eigenvalues_match and self.complement_match


@dataclass(frozen=True)
class Method3Report:
    samples: tuple[Method3Sample, ...]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.samples)


def method3_verify(k_graph: MetricGraph, q1: MetricGraph, q2: MetricGraph,
                   samples: Sequence[float] = DEFAULT_SAMPLES,
                   tol: float = 1e-8) -> Method3Report:
    """Check the subspace-swapping hypotheses at each sample lambda.

    (a) M of the common graph has a degenerate eigenvalue with eigenspace
    V(lambda); (b) M_{q1} and M_{q2} have identical sorted eigenvalues;
    (c) their compressions to the orthogonal complement of V(lambda)
    coincide.  Contact order is the declared pairing for all three graphs.
    """
    if not len(k_graph.contacts) == len(q1.contacts) == len(q2.contacts):
        raise GraphError("contact counts differ")
    out: list[Method3Sample] = []
    for lam in samples:
        ek = m_function(k_graph, lam)
        e1 = m_function(q1, lam)
        e2 = m_function(q2, lam)
        if not (ek.regular and e1.regular and e2.regular):
            raise SingularSampleError(
                f"singular sample lambda={lam}; choose different samples")
        w, vecs = np.linalg.eigh(ek.matrix)
        clusters: list[list[int]] = [[0]]
        for i in range(1, len(w)):
            if w[i] - w[clusters[-1][0]] < CLUSTER_TOL:
                clusters[-1].append(i)
            else:
                clusters.append([i])
        best = max(clusters, key=len)
        degenerate = len(best) > 1
        w1 = np.linalg.eigvalsh(e1.matrix)
        w2 = np.linalg.eigvalsh(e2.matrix)
        eig_match = bool(np.max(np.abs(w1 - w2)) < tol)
        if degenerate:
            comp_idx = [i for i in range(len(w)) if i not in best]
            comp = vecs[:, comp_idx]
            diff = comp.T @ (e1.matrix - e2.matrix) @ comp
            comp_match = bool(
                diff.size == 0 or np.linalg.norm(diff, 2) < tol)
        else:
            comp_match = False
        out.append(Method3Sample(lam, degenerate, eig_match, comp_match))
    return Method3Report(tuple(out))
