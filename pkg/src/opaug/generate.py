"""Seeded generator of connected outerplanar graphs with controllable block structure.

The pseudorandom stream is splitmix64, so the same ``GenSpec`` yields the same
graph on every platform:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)            (all arithmetic mod 2**64)

Integers below ``k`` are ``next() % k``; floats are ``(next() >> 11) * 2**-53``.
"""
from __future__ import annotations

import dataclasses

from .graph import Graph

MASK64 = (1 << 64) - 1
ATTACH_MODES = ("uniform", "chain", "fan")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        return self.next() % k

    def uniform(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclasses.dataclass(frozen=True)
class GenSpec:
    """Generator parameters.

    ``block_count_bias`` is the probability that a block gets a random size in
    ``[2, max_block_size]`` instead of the largest size that still fits; with 0
    and a large enough ``max_block_size`` the graph is a single block.
    ``attach_mode`` picks where each new block hangs: a uniform existing vertex,
    the newest vertex (long block chains) or vertex 0 (many blocks at one cut vertex).
    """

    seed: int
    n: int
    block_count_bias: float = 0.5
    chord_density: float = 0.5
    max_block_size: int = 8
    attach_mode: str = "uniform"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.attach_mode not in ATTACH_MODES:
            raise ValueError(f"attach_mode must be one of {ATTACH_MODES}")


def _triangulation_diagonals(rng: SplitMix64, k: int) -> list[tuple[int, int]]:
    """Diagonals of a random triangulation of the polygon with corners ``0..k-1``."""
    out = []
    stack = [(0, k - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        t = i + 1 + rng.below(j - i - 1)
        if t - i >= 2:
            out.append((i, t))
        if j - t >= 2:
            out.append((t, j))
        stack.append((t, j))
        stack.append((i, t))
    return out


def generate(spec: GenSpec) -> Graph:
    rng = SplitMix64(spec.seed)
    n = spec.n
    edges: list[tuple[int, int]] = []
    count = 1
    kmax_cap = max(2, spec.max_block_size)
    while count < n:
        if spec.attach_mode == "chain":
            x = count - 1
        elif spec.attach_mode == "fan":
            x = 0
        else:
            x = rng.below(count)
        kmax = min(kmax_cap, n - count + 1)
        if spec.block_count_bias > 0 and rng.uniform() < spec.block_count_bias:
            k = 2 + rng.below(kmax - 1)
        else:
            k = kmax
        new = list(range(count, count + k - 1))
        rng.shuffle(new)
        poly = [x] + new
        count += k - 1
        if k == 2:
            edges.append((poly[0], poly[1]))
            continue
        for i in range(k):
            edges.append((poly[i], poly[(i + 1) % k]))
        for i, j in _triangulation_diagonals(rng, k):
            if rng.uniform() < spec.chord_density:
                edges.append((poly[i], poly[j]))
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, [(perm[u], perm[v]) for u, v in edges])


def random_spec(rng: SplitMix64, n_max: int, n_min: int = 1) -> GenSpec:
    """A varied spec for corpus generation: sizes, densities and attach modes drawn from ``rng``."""
    n = n_min + rng.below(n_max - n_min + 1)
    mode = ATTACH_MODES[rng.below(3)]
    return GenSpec(
        seed=rng.next(),
        n=n,
        block_count_bias=rng.uniform(),
        chord_density=rng.uniform(),
        max_block_size=2 + rng.below(min(n, 20)),
        attach_mode=mode,
    )


def random_tree(rng: SplitMix64, n: int) -> Graph:
    """Random labeled tree: each vertex ``i > 0`` links to a uniform earlier vertex, then relabel."""
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, [(perm[i], perm[rng.below(i)]) for i in range(1, n)])
