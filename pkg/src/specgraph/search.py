"""Exhaustive enumeration of small graphs and isospectral classification.

Connected simple graphs are enumerated by edge-subset bitmask with
canonical-form deduplication; connected multigraphs by breadth-first
augmentation (add a loop, a parallel edge, or a pendant vertex), which
reaches every class because any connected multigraph loses an edge to a
connected parent.  Classification groups graphs by exact spectral keys.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Literal, Sequence

from .discrete import ln_charpoly
from .graphs import (DiscreteGraph, GraphError, canonical_form, discrete_betti,
                     discrete_components, discrete_from_adj, metric_from_discrete)
from .secular import secular_poly

SIMPLE_BOUND = 7
MULTI_VERTEX_BOUND = 4
MULTI_EDGE_BOUND = 8


# ---------------------------------------------------------------------------
# fast invariant canonical keys (refinement-pruned; used only for dedup)
# ---------------------------------------------------------------------------

def _refined_blocks(d: DiscreteGraph) -> list[list[int]]:
    """Vertex classes of an iterated neighborhood-coloring, in invariant order."""
    n = d.n
    colors = [(sum(d.adj[v]), d.adj[v][v]) for v in range(n)]
    ranks = _rank(colors)
    for _ in range(n):
        signatures = [
            (ranks[v],
             tuple(sorted((d.adj[v][u], ranks[u]) for u in range(n)
                          if u != v and d.adj[v][u])))
            for v in range(n)]
        new_ranks = _rank(signatures)
        if len(set(new_ranks)) == len(set(ranks)):
            ranks = new_ranks
            break
        ranks = new_ranks
    blocks: dict[int, list[int]] = {}
    for v in range(n):
        blocks.setdefault(ranks[v], []).append(v)
    return [blocks[r] for r in sorted(blocks)]


def _rank(values: Sequence) -> list[int]:
    order = {val: i for i, val in enumerate(sorted(set(values)))}
    return [order[val] for val in values]


def _fast_canonical(d: DiscreteGraph) -> bytes:
    """Complete isomorphism invariant: minimal encoding over block-respecting
    orderings of the refined coloring (usually far fewer than n!)."""
    blocks = _refined_blocks(d)
    best: tuple[int, ...] | None = None
    for choice in product(*(permutations(block) for block in blocks)):
        perm = [v for block in choice for v in block]
        enc = tuple(d.adj[perm[i]][perm[j]]
                    for i in range(d.n) for j in range(d.n))
        if best is None or enc < best:
            best = enc
    assert best is not None
    return bytes(best) if max(best, default=0) < 256 else repr(best).encode()


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_connected_simple(n: int) -> Iterator[DiscreteGraph]:
    """One representative per isomorphism class of connected simple graphs."""
    if n < 1:
        raise GraphError("need at least one vertex")
    if n > SIMPLE_BOUND:
        raise GraphError(f"enumeration bound: n <= {SIMPLE_BOUND}")
    if n == 1:
        yield discrete_from_adj([[0]])
        return
    pairs = list(combinations(range(n), 2))
    seen: set[bytes] = set()
    for mask in range(1, 1 << len(pairs)):
        if mask.bit_count() < n - 1:
            continue
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        adj = [[0] * n for _ in range(n)]
        for p, (u, v) in enumerate(pairs):
            if mask >> p & 1:
                adj[u][v] = adj[v][u] = 1
                parent[find(u)] = find(v)
        if len({find(v) for v in range(n)}) != 1:
            continue
        d = discrete_from_adj(adj)
        key = _fast_canonical(d)
        if key not in seen:
            seen.add(key)
            yield d


def enumerate_connected_multi(n: int, m_max: int,
                              vertex_bound: int = MULTI_VERTEX_BOUND,
                              edge_bound: int = MULTI_EDGE_BOUND,
                              ) -> Iterator[DiscreteGraph]:
    """One representative per class of connected multigraphs (loops allowed)
    on exactly n vertices with 1..m_max edges.

    The default bounds keep the breadth-first augmentation desk-sized;
    raise them explicitly for larger one-off runs.
    """
    if not 1 <= n <= vertex_bound:
        raise GraphError(f"enumeration bound: n <= {vertex_bound}")
    if not 1 <= m_max <= edge_bound:
        raise GraphError(f"enumeration bound: m_max <= {edge_bound}")
    loop = discrete_from_adj([[2]])
    level: dict[bytes, DiscreteGraph] = {_fast_canonical(loop): loop}
    if n >= 2:
        edge = discrete_from_adj([[0, 1], [1, 0]])
        level[_fast_canonical(edge)] = edge
    for m in range(1, m_max + 1):
        for key in sorted(level):
            d = level[key]
            if d.n == n:
                yield d
        if m == m_max:
            break
        nxt: dict[bytes, DiscreteGraph] = {}
        for d in level.values():
            for child in _augmentations(d, n):
                ckey = _fast_canonical(child)
                if ckey not in nxt:
                    nxt[ckey] = child
        level = nxt


def _augmentations(d: DiscreteGraph, max_vertices: int) -> Iterator[DiscreteGraph]:
    rows = [list(r) for r in d.adj]
    for u in range(d.n):
        bumped = [r[:] for r in rows]
        bumped[u][u] += 2
        yield discrete_from_adj(bumped)
        for v in range(u + 1, d.n):
            bumped = [r[:] for r in rows]
            bumped[u][v] += 1
            bumped[v][u] += 1
            yield discrete_from_adj(bumped)
    if d.n < max_vertices:
        grown = [r[:] + [0] for r in rows]
        grown.append([0] * (d.n + 1))
        for u in range(d.n):
            bumped = [r[:] for r in grown]
            bumped[u][d.n] = bumped[d.n][u] = 1
            yield discrete_from_adj(bumped)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

SpectralKey = Literal["secular", "ln"]


@dataclass(frozen=True)
class IsospectralFamily:
    """Graphs sharing one exact spectral key.

    `key` is the serialized polynomial; members are canonical adjacency
    encodings with per-member Betti numbers and component counts.
    """

    key: str
    members: tuple[bytes, ...]
    betti: tuple[int, ...]
    components: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def _spectral_key(d: DiscreteGraph, key: SpectralKey) -> str:
    if key == "secular":
        return secular_poly(metric_from_discrete(d)).line()
    if key == "ln":
        cp = ln_charpoly(d)
        return "lncp: " + " ".join(str(c) for c in cp.coeffs)
    raise GraphError(f"unknown spectral key {key!r}")


def _classify_one(args: tuple[DiscreteGraph, SpectralKey]) -> tuple[str, bytes, int, int]:
    d, key = args
    return (_spectral_key(d, key), canonical_form(d),
            discrete_betti(d), discrete_components(d))


def classify(graphs: Iterable[DiscreteGraph], key: SpectralKey,
             jobs: int = 1) -> list[IsospectralFamily]:
    """Group graphs into exact isospectral families under the chosen key.

    Families are sorted by size descending, then by key; the result does
    not depend on the job count (per-graph keys are exact and the merge
    is a plain grouping).
    """
    items = [(d, key) for d in graphs]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            rows = pool.map(_classify_one, items, chunksize=8)
    else:
        rows = [_classify_one(item) for item in items]
    groups: dict[str, list[tuple[bytes, int, int]]] = {}
    for key_text, canon, bet, comp in rows:
        groups.setdefault(key_text, []).append((canon, bet, comp))
    families = []
    for key_text, members in groups.items():
        members.sort()
        families.append(IsospectralFamily(
            key=key_text,
            members=tuple(m for m, _, _ in members),
            betti=tuple(b for _, b, _ in members),
            components=tuple(c for _, _, c in members),
        ))
    families.sort(key=lambda fam: (-fam.size, fam.key))
    return families
