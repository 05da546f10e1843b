"""Vertex layer: backbone lattice path, Poisson points, connection function.

The graph lives on [0, N]^d. Its vertex set is a deterministic Hamiltonian
path through the integer lattice points of the box (the backbone) plus a
homogeneous Poisson point process of intensity rho. Two vertices at 1-norm
distance r are joined by a random edge with probability
1 - exp(-beta * r**-s).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ParityError(ValueError):
    """No unit-step lattice path from 0 to (N,...,N) exists (d >= 2, N odd)."""


class OutOfScopeError(ValueError):
    """Parameter range the harness does not model (s < d regimes)."""


@dataclass(frozen=True)
class ModelParams:
    """Full parameterization of one random graph instance."""

    d: int
    N: int
    s: float
    beta: float
    rho: float
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.s > 0:
            raise ValueError(f"s must be > 0, got {self.s}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if not self.rho > 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.d >= 2 and self.N % 2 == 1:
            raise ParityError(
                f"d={self.d}, N={self.N}: endpoints 0 and (N,...,N) share "
                "bipartite color on an even vertex count; no unit-step "
                "Hamiltonian path exists. Use even N for d >= 2."
            )

    @property
    def backbone_count(self) -> int:
        return (self.N + 1) ** self.d


@dataclass(frozen=True)
class PointCloud:
    """Vertex coordinates: backbone path first (in path order), then Poisson.

    Index k < backbone_count is backbone vertex X_k; the rest are Poisson
    points. Index 0 is the origin, index backbone_count - 1 the far corner.
    """

    coords: np.ndarray  # (n, d) float
    backbone_count: int

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    @property
    def roles(self) -> list:
        """Parallel role labels: ('backbone', k) or ('poisson', None)."""
        z = self.backbone_count
        return [("backbone", k) if k < z else ("poisson", None)
                for k in range(self.n)]


def connection_probability(r, params: ModelParams):
    """Probability that two vertices at 1-norm distance r get a random edge.

    Returns 1 at r = 0 (the decay exponent diverges) and 0 for beta = 0,
    r > 0. Accepts scalars or arrays.
    """
    scalar = np.isscalar(r) or np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=np.float64))
    out = np.ones_like(r)
    pos = r > 0
    if params.beta == 0.0:
        out[pos] = 0.0
    else:
        with np.errstate(over="ignore"):
            out[pos] = -np.expm1(-params.beta * r[pos] ** (-params.s))
    return float(out[0]) if scalar else out


def build_backbone(d: int, N: int) -> np.ndarray:
    """Boustrophedon Hamiltonian path on [0,N]^d ∩ Z^d, 0 to (N,...,N).

    Coordinate 1 sweeps alternately forward/backward within each slice of
    coordinate 2, recursively up to coordinate d. Unit 1-norm steps
    throughout. Rejects (d >= 2, N odd), where no such path exists.
    """
    if d < 1 or N < 1:
        raise ValueError(f"need d >= 1 and N >= 1, got d={d}, N={N}")
    if d >= 2 and N % 2 == 1:
        raise ParityError(
            f"d={d}, N={N}: no unit-step Hamiltonian path joins the origin "
            "to the far corner (bipartite parity obstruction)."
        )
    line = np.arange(N + 1, dtype=np.int64)[:, None]
    path = line
    for _ in range(1, d):
        slices = []
        for c in range(N + 1):
            block = path if c % 2 == 0 else path[::-1]
            col = np.full((block.shape[0], 1), c, dtype=np.int64)
            slices.append(np.hstack([block, col]))
        path = np.vstack(slices)
    return path


def sample_poisson_points(params: ModelParams, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson process on [0,N]^d: count ~ Poisson(rho * N^d),
    positions i.i.d. uniform."""
    k = rng.poisson(params.rho * float(params.N) ** params.d)
    return rng.uniform(0.0, params.N, size=(k, params.d))


def assemble_vertex_set(params: ModelParams, rng: np.random.Generator) -> PointCloud:
    """Backbone path (path order) followed by Poisson points."""
    backbone = build_backbone(params.d, params.N).astype(np.float64)
    poisson = sample_poisson_points(params, rng)
    coords = np.vstack([backbone, poisson]) if poisson.size else backbone
    return PointCloud(coords=coords, backbone_count=backbone.shape[0])
