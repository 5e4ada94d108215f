"""r-fold graphs: the model, exact random samplers, and structural utilities.

An r-fold graph is one vertex set 0..n-1 carrying r independent undirected
edge sets ("colours"). The r-fold binomial random graph draws each colour as
an independent G(n, p_i). Everything downstream (percolation engines, witness
algorithms, experiment harness) runs on :class:`RFoldGraph`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import fill_adjacency
from .rng import COLOUR_SALT, derive_stream, generator

# Vertices are dense 0-based int32; pair keys u*n+v must stay below 2**63.
MAX_VERTICES = 2**31 - 1

# Samplers index pairs in float64; keep pair counts where that is exact.
_SAMPLER_PAIR_CAP = 2**52

# Largest pair count the naive per-pair sampler will materialize.
_NAIVE_PAIR_CAP = 200_000_000


def pair_count(n: int) -> int:
    """Number of unordered vertex pairs C(n, 2)."""
    return n * (n - 1) // 2


def headline_constant(r: int) -> int:
    """The proved supercritical constant 2**(8 r^2), exact integer (r >= 2)."""
    if r < 2:
        raise ValueError("headline constant is defined for r >= 2")
    return 2 ** (8 * r * r)


def headline_root(r: int) -> float:
    """(r-1)-th root of the headline constant, 2**(8 r^2 / (r-1)) (r >= 2)."""
    if r < 2:
        raise ValueError("headline root is defined for r >= 2")
    return 2.0 ** (8.0 * r * r / (r - 1.0))


@dataclass(frozen=True)
class ProfileParametrization:
    """How a probability vector was generated (for provenance in outputs)."""

    n: int
    c: float
    kind: str
    a: float | None = None


@dataclass(frozen=True)
class ProbabilityProfile:
    """Sorted edge-probability vector (p_1 <= ... <= p_r) with prefix products.

    Unsorted input is rejected; use :meth:`from_unsorted` to sort-and-build
    explicitly. ``prefix_products[i]`` is p_1 * ... * p_{i+1}.
    """

    p: tuple[float, ...]
    parametrization: ProfileParametrization | None = None
    prefix_products: tuple[float, ...] = field(init=False, compare=False)

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) < 1:
            raise ValueError("profile needs at least one probability")
        for x in p:
            if not (0.0 <= x <= 1.0) or math.isnan(x):
                raise ValueError(f"probability {x!r} outside [0, 1]")
        if any(a > b for a, b in zip(p, p[1:])):
            raise ValueError(
                "probabilities must be sorted ascending; "
                "use ProbabilityProfile.from_unsorted to sort-and-build"
            )
        object.__setattr__(self, "p", p)
        prods = []
        acc = 1.0
        for x in p:
            acc *= x
            prods.append(acc)
        object.__setattr__(self, "prefix_products", tuple(prods))

    @classmethod
    def from_unsorted(
        cls, ps, parametrization: ProfileParametrization | None = None
    ) -> "ProbabilityProfile":
        return cls(tuple(sorted(float(x) for x in ps)), parametrization)

    @property
    def r(self) -> int:
        return len(self.p)

    def scaled(self, factor: float) -> "ProbabilityProfile":
        """Profile with every probability multiplied by ``factor`` (<= 1)."""
        return ProbabilityProfile(tuple(x * factor for x in self.p))


def _canonical_colour(pairs, n: int) -> np.ndarray:
    """Canonicalize one colour's edge list: orient u < v, sort, dedupe."""
    a = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if a.size == 0:
        return np.empty((0, 2), dtype=np.int32)
    if a.min() < 0 or a.max() >= n:
        raise ValueError("edge endpoint out of range")
    u = a.min(axis=1)
    v = a.max(axis=1)
    if np.any(u == v):
        raise ValueError("self-loops are not allowed")
    keys = np.unique(u * np.int64(n) + v)
    out = np.empty((keys.shape[0], 2), dtype=np.int32)
    out[:, 0] = keys // n
    out[:, 1] = keys % n
    return out


@dataclass(frozen=True, eq=False)
class RFoldGraph:
    """Immutable r-fold graph on vertices 0..n-1.

    ``edges[i]`` is colour i's (m_i, 2) int32 array with rows (u, v), u < v,
    sorted lexicographically with no duplicates. Instances are safe to share
    between threads.
    """

    n: int
    edges: tuple[np.ndarray, ...]
    _adj: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (0 <= self.n <= MAX_VERTICES):
            raise ValueError(f"vertex count {self.n} out of supported range")
        if len(self.edges) < 1:
            raise ValueError("need at least one colour")
        object.__setattr__(self, "edges", tuple(self.edges))
        for e in self.edges:
            if not isinstance(e, np.ndarray) or e.ndim != 2 or e.shape[1] != 2:
                raise ValueError("each colour must be an (m, 2) array")
            if e.shape[0] == 0:
                continue
            if e[:, 0].min() < 0 or e[:, 1].max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if not (e[:, 0] < e[:, 1]).all():
                raise ValueError("edges must be canonically oriented (u < v)")
            keys = e[:, 0].astype(np.int64) * self.n + e[:, 1]
            if not (np.diff(keys) > 0).all():
                raise ValueError("edges must be sorted and duplicate-free")

    @classmethod
    def from_edge_lists(cls, n: int, colour_lists) -> "RFoldGraph":
        """Build from per-colour iterables of (u, v) pairs, canonicalizing."""
        return cls(n, tuple(_canonical_colour(c, n) for c in colour_lists))

    @property
    def r(self) -> int:
        return len(self.edges)

    def edge_counts(self) -> tuple[int, ...]:
        return tuple(int(e.shape[0]) for e in self.edges)

    def edge_keys(self, colour: int) -> np.ndarray:
        """Colour's edges as sorted int64 keys u * n + v."""
        e = self.edges[colour]
        return e[:, 0].astype(np.int64) * self.n + e[:, 1]

    def adjacency(self, colour: int) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency (indptr, nbrs) of one colour, built on demand."""
        if colour not in self._adj:
            e = self.edges[colour]
            self._adj[colour] = fill_adjacency(
                self.n, np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1])
            )
        return self._adj[colour]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RFoldGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and all(np.array_equal(a, b) for a, b in zip(self.edges, other.edges))
        )


def _pairs_from_indices(idx: np.ndarray, n: int) -> np.ndarray:
    """Map lexicographic pair indices to (u, v) rows, exactly.

    Row u starts at index u*(2n-u-1)/2; the float solve is corrected by one
    integer step each way so the mapping is exact for any representable index.
    """
    b = n - 0.5
    u = np.floor(b - np.sqrt(b * b - 2.0 * idx)).astype(np.int64)
    np.clip(u, 0, n - 2, out=u)
    for _ in range(2):
        start = u * (2 * n - u - 1) // 2
        too_far = start > idx
        if too_far.any():
            u[too_far] -= 1
        start_next = (u + 1) * (2 * n - u - 2) // 2
        too_short = start_next <= idx
        if too_short.any():
            u[too_short] += 1
    start = u * (2 * n - u - 1) // 2
    v = idx - start + u + 1
    out = np.empty((idx.shape[0], 2), dtype=np.int32)
    out[:, 0] = u
    out[:, 1] = v
    return out


def _complete_pairs(n: int) -> np.ndarray:
    iu, iv = np.triu_indices(n, k=1)
    out = np.empty((iu.shape[0], 2), dtype=np.int32)
    out[:, 0] = iu
    out[:, 1] = iv
    return out


def _sample_colour(n: int, p: float, stream_seed: int) -> np.ndarray:
    """Sample one G(n, p) colour class as canonical sorted pairs.

    Stream contract (documented for reproducibility): a Philox generator
    keyed by ``stream_seed`` supplies uniforms U in [0, 1).

    * p < 1/2: geometric skipping over lexicographic pair indices. Each
      uniform yields skip = floor(ln(1-U) / ln(1-p)); the next edge index is
      previous + skip + 1. Uniforms are consumed in batches; indices past the
      last pair terminate the stream and any batch remainder is discarded.
      Cost is proportional to the number of edges produced.
    * 1/2 <= p < 1: exact per-pair enumeration, one uniform per pair in index
      order, keeping pairs with U < p.
    * p >= 1 (i.e. 1-p underflows): the complete colour class, no draws.
    * p <= 0: empty, no draws.
    """
    total = pair_count(n)
    if total >= _SAMPLER_PAIR_CAP:
        raise ValueError("vertex count too large for the samplers")
    if total == 0 or p <= 0.0:
        return np.empty((0, 2), dtype=np.int32)
    if p >= 1.0:
        return _complete_pairs(n)
    rng = generator(stream_seed)
    if p >= 0.5:
        chunk = 1 << 22
        parts = []
        start = 0
        while start < total:
            mlen = min(chunk, total - start)
            hit = np.nonzero(rng.random(mlen) < p)[0]
            if hit.size:
                parts.append(hit.astype(np.int64) + start)
            start += mlen
        if not parts:
            return np.empty((0, 2), dtype=np.int32)
        return _pairs_from_indices(np.concatenate(parts), n)

    # Skip arithmetic runs in float64, exact below 2**52 (enforced by caller).
    log1mp = math.log1p(-p)
    fl_total = float(total)
    pos = -1.0
    parts = []
    done = False
    while not done:
        remaining = total - int(pos) - 1
        if remaining <= 0:
            break
        est = int(remaining * p) + 16
        batch = min(max(est, 1024), 1 << 22)
        skips = np.floor(np.log1p(-rng.random(batch)) / log1mp)
        np.minimum(skips, fl_total, out=skips)
        skips += 1.0
        np.cumsum(skips, out=skips)
        skips += pos
        if skips[-1] >= fl_total:
            skips = skips[: np.searchsorted(skips, fl_total)]
            done = True
        if skips.size:
            parts.append(skips.astype(np.int64))
            pos = skips[-1]
    if not parts:
        return np.empty((0, 2), dtype=np.int32)
    return _pairs_from_indices(np.concatenate(parts), n)


def _colour_seeds(seed: int, r: int) -> list[int]:
    return [derive_stream(seed, COLOUR_SALT + i) for i in range(r)]


def sample_rfold(n: int, profile: ProbabilityProfile, seed: int) -> RFoldGraph:
    """Sample the r-fold binomial random graph G(n, p_1, ..., p_r).

    Colour classes are independent: colour i draws from the sub-stream
    ``mix64(seed XOR (COLOUR_SALT + i))``. Identical (n, profile, seed) give
    bit-identical graphs on every platform, regardless of which colours are
    sampled first.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    cols = [
        _sample_colour(n, p, s)
        for p, s in zip(profile.p, _colour_seeds(seed, profile.r))
    ]
    return RFoldGraph(n, tuple(cols))


def sample_rfold_naive(n: int, profile: ProbabilityProfile, seed: int) -> RFoldGraph:
    """Reference sampler: one uniform per pair per colour, kept when U < p_i.

    Same per-colour sub-streams as :func:`sample_rfold` but a different
    consumption pattern, so edge sets differ draw-for-draw; distributions
    agree. Materializes all C(n, 2) uniforms per colour - small n only.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    total = pair_count(n)
    if total > _NAIVE_PAIR_CAP:
        raise ValueError("naive sampler is for oracle-scale n only")
    cols = []
    for p, s in zip(profile.p, _colour_seeds(seed, profile.r)):
        rng = generator(s)
        if total == 0:
            cols.append(np.empty((0, 2), dtype=np.int32))
            continue
        hit = np.nonzero(rng.random(total) < p)[0].astype(np.int64)
        cols.append(_pairs_from_indices(hit, n))
    return RFoldGraph(n, tuple(cols))


def induce(g: RFoldGraph, w) -> RFoldGraph:
    """Induced r-fold subgraph on vertex subset w, relabeled order-preservingly."""
    w = np.unique(np.asarray(list(w) if not isinstance(w, np.ndarray) else w))
    if w.size and (w.min() < 0 or w.max() >= g.n):
        raise ValueError("subset contains out-of-range vertices")
    inw = np.zeros(g.n, dtype=bool)
    inw[w] = True
    cols = []
    for e in g.edges:
        if e.shape[0] == 0:
            cols.append(np.empty((0, 2), dtype=np.int32))
            continue
        keep = inw[e[:, 0]] & inw[e[:, 1]]
        sub = e[keep]
        relabeled = np.searchsorted(w, sub).astype(np.int32)
        cols.append(relabeled)
    return RFoldGraph(int(w.size), tuple(cols))


def union_graphs(gs) -> RFoldGraph:
    """Colour-wise union of r-fold graphs sharing (n, r); duplicates collapse."""
    gs = list(gs)
    if not gs:
        raise ValueError("need at least one graph")
    n, r = gs[0].n, gs[0].r
    for g in gs[1:]:
        if g.n != n or g.r != r:
            raise ValueError("graphs must share vertex count and colour count")
    cols = []
    for i in range(r):
        stacked = np.concatenate([g.edges[i] for g in gs], axis=0)
        cols.append(_canonical_colour(stacked, n))
    return RFoldGraph(n, tuple(cols))


def restrict_colours(g: RFoldGraph, colours) -> RFoldGraph:
    """Sub-colour-set restriction: keep only the listed colours, in order."""
    colours = list(colours)
    if not colours:
        raise ValueError("need at least one colour")
    for c in colours:
        if not (0 <= c < g.r):
            raise ValueError(f"colour {c} out of range")
    return RFoldGraph(g.n, tuple(g.edges[c] for c in colours))


def permute(g: RFoldGraph, pi) -> RFoldGraph:
    """Relabel vertices by a permutation pi (vertex v becomes pi[v])."""
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (g.n,) or not np.array_equal(np.sort(pi), np.arange(g.n)):
        raise ValueError("pi must be a permutation of 0..n-1")
    cols = [_canonical_colour(pi[e], g.n) for e in g.edges]
    return RFoldGraph(g.n, tuple(cols))


def is_connected(g: RFoldGraph, colour: int) -> bool:
    """Breadth-first connectivity of one colour class (independent oracle)."""
    if not (0 <= colour < g.r):
        raise ValueError(f"colour {colour} out of range")
    if g.n < 1:
        raise ValueError("need at least one vertex")
    if g.n == 1:
        return True
    indptr, nbrs = g.adjacency(colour)
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int32)
    reached = 1
    while frontier.size:
        nxt = []
        for x in frontier:
            block = nbrs[indptr[x] : indptr[x + 1]]
            fresh = block[~seen[block]]
            if fresh.size:
                seen[fresh] = True
                nxt.append(np.unique(fresh))
        if nxt:
            frontier = np.concatenate(nxt)
            reached += int(frontier.size)
        else:
            frontier = np.empty(0, dtype=np.int32)
    return reached == g.n
