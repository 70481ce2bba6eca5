"""Undirected communication graphs and consensus operators.

Network states are held as ``(n, p)`` arrays: row ``i`` is agent ``i``'s
decision vector. All Kronecker-product actions ``(M (x) I_p) x`` are
computed blockwise as ``M @ X``, never by materializing the product.
Laplacians are dense; every graph in this library is desk scale.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import TopologyError
from .rng import STREAM_GRAPH, substream

logger = logging.getLogger(__name__)

_CONNECTIVITY_TOL = 1e-10
_MAX_RESAMPLES = 10_000


@dataclass(frozen=True)
class Topology:
    """A connected undirected graph on nodes ``0..n-1`` with no self-loops.

    Edges are stored as a frozenset of sorted pairs, so each undirected
    edge has exactly one representation.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise TopologyError(f"node count must be positive, got {self.n}")
        canonical = set()
        for a, b in self.edges:
            if a == b:
                raise TopologyError(f"self-loop on node {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise TopologyError(f"edge ({a}, {b}) out of range for n={self.n}")
            canonical.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(canonical))
        if not self._connected():
            raise TopologyError("graph is disconnected")

    def _connected(self):
        neighbors = {i: [] for i in range(self.n)}
        for a, b in self.edges:
            neighbors[a].append(b)
            neighbors[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            node = stack.pop()
            for other in neighbors[node]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return len(seen) == self.n

    @property
    def edge_count(self):
        return len(self.edges)

    def degrees(self):
        deg = np.zeros(self.n, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Spectral quantities of a graph Laplacian that gate the consensus gain.

    ``rho2`` is the second-smallest eigenvalue (algebraic connectivity),
    ``rho_L2`` the spectral radius of ``L @ L``, and ``alpha_max`` the
    supremum of admissible consensus gains, ``rho2 / (2 * rho_L2)``.
    """

    rho2: float
    rho_L2: float
    alpha_max: float
    eigenvalues: tuple


def ring(n):
    """Cycle graph ``0-1-...-(n-1)-0``; every node has degree 2."""
    if n < 3:
        raise TopologyError(f"ring graph needs at least 3 nodes, got {n}")
    return Topology(n, frozenset((i, (i + 1) % n) for i in range(n)))


def complete(n):
    """Complete graph on ``n`` nodes."""
    if n < 2:
        raise TopologyError(f"complete graph needs at least 2 nodes, got {n}")
    return Topology(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def erdos_renyi(n, prob, seed):
    """Connected Erdos-Renyi sample: each pair kept with probability ``prob``.

    Disconnected samples are resampled under an incremented sub-seed so the
    result is deterministic in ``seed``; the resample count is logged.
    """
    if n < 2:
        raise TopologyError(f"random graph needs at least 2 nodes, got {n}")
    if not 0.0 < prob <= 1.0:
        raise TopologyError(f"edge probability must lie in (0, 1], got {prob}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for attempt in range(_MAX_RESAMPLES):
        rng = substream(seed, STREAM_GRAPH, attempt)
        keep = rng.random(len(pairs)) < prob
        edges = frozenset(pair for pair, k in zip(pairs, keep) if k)
        try:
            topology = Topology(n, edges)
        except TopologyError:
            continue
        if attempt:
            logger.info("erdos_renyi(n=%d, prob=%g, seed=%d): %d resamples", n, prob, seed, attempt)
        return topology
    raise TopologyError(
        f"failed to sample a connected graph after {_MAX_RESAMPLES} attempts "
        f"(n={n}, prob={prob})"
    )


def laplacian(topology):
    """Dense graph Laplacian ``L = D - A``."""
    L = np.zeros((topology.n, topology.n))
    for a, b in topology.edges:
        L[a, b] = -1.0
        L[b, a] = -1.0
        L[a, a] += 1.0
        L[b, b] += 1.0
    return L


def spectrum(L):
    """Spectral quantities of a symmetric Laplacian via a dense eigensolve."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"Laplacian must be square, got shape {L.shape}")
    if not np.allclose(L, L.T, atol=1e-12):
        raise ValueError("Laplacian must be symmetric")
    if np.max(np.abs(L.sum(axis=1))) > 1e-9:
        raise ValueError("Laplacian rows must sum to zero")
    if L.shape[0] < 2:
        raise ValueError("spectrum needs at least two nodes")
    eigs = np.linalg.eigvalsh(L)
    rho2 = float(eigs[1])
    if rho2 <= _CONNECTIVITY_TOL:
        raise TopologyError(f"graph is disconnected (algebraic connectivity {rho2:.3e})")
    rho_L2 = float(eigs[-1]) ** 2
    return LaplacianSpectrum(
        rho2=rho2,
        rho_L2=rho_L2,
        alpha_max=rho2 / (2.0 * rho_L2),
        eigenvalues=tuple(float(v) for v in eigs),
    )


def _check_state(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"network state must be (n, p), got shape {x.shape}")
    return x


def consensus_step(x, L, alpha):
    """One Laplacian averaging step, ``x - alpha * (L (x) I_p) x``, blockwise."""
    x = _check_state(x)
    if x.shape[0] != L.shape[0]:
        raise ValueError(f"state has {x.shape[0]} agent rows but Laplacian is {L.shape[0]}x{L.shape[1]}")
    return x - alpha * (L @ x)


def network_average(x):
    """Blockwise mean decision vector across agents."""
    return _check_state(x).mean(axis=0)


def disagreement(x):
    """Mean squared distance of agent rows from their average."""
    x = _check_state(x)
    dev = x - x.mean(axis=0)
    return float(np.einsum("ij,ij->", dev, dev) / x.shape[0])
