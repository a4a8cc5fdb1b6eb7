"""Infinitesimal holonomy algebras at the chart base point.

The algebra is generated by the curvature endomorphisms R(d_h, d_j) and their
covariant derivatives, all evaluated at the base point, and closed under
commutators. Everything is exact; spans are tracked by fraction-free
echelon forms over the integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import OrderExhausted
from .linalg import Echelon, primitive_row
from .tensors import ConnectionChart, covariant_derivative, curvature

__all__ = ["Generator", "EndoSet", "HolonomyResult", "bracket", "curvature_endos",
           "lie_closure", "infinitesimal_holonomy", "span_contains"]


@dataclass(frozen=True)
class Generator:
    matrix: np.ndarray
    depth: int
    directions: tuple[int, ...]
    pair: tuple[int, int]

    @property
    def tag(self) -> str:
        d = ",".join(map(str, self.directions))
        return f"d{self.depth}[{d}]R({self.pair[0]},{self.pair[1]})"


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) - b.dot(a)


def _flat(m: np.ndarray) -> list:
    return list(m.flat)


def _unflat(row: Sequence[int], n: int) -> np.ndarray:
    return np.array(list(row), dtype=object).reshape(n, n)


@dataclass
class EndoSet:
    """Endomorphisms of an n-dimensional fiber: generators and a basis of their span."""

    dim: int
    generators: list[Generator] = field(default_factory=list)
    basis: list[np.ndarray] = field(default_factory=list)
    closed: bool = False

    def __post_init__(self):
        self._echelon = Echelon(self.dim * self.dim)
        basis, self.basis = self.basis, []
        for b in basis:
            self.add(b)

    def __len__(self):
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def add(self, m: np.ndarray) -> bool:
        """Add a matrix to the span; True when the span grew."""
        row = self._echelon.reduce(_flat(m))
        if not any(row):
            return False
        self._echelon.add(row)
        self.basis.append(_unflat(row, self.dim))
        return True

    def contains(self, m: np.ndarray) -> bool:
        return self._echelon.contains(_flat(m))

    def is_bracket_closed(self) -> bool:
        return all(self.contains(bracket(a, b))
                   for i, a in enumerate(self.basis) for b in self.basis[i + 1:])


def span_contains(algebra: EndoSet, m: np.ndarray) -> bool:
    return algebra.contains(np.asarray(m, dtype=object))


def curvature_endos(conn: ConnectionChart, depth: int, _cache: dict | None = None) -> EndoSet:
    """Generators (nabla^k R)(d_z1..d_zk; d_h, d_j) at the base point, k = 0..depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if conn.order < depth + 1:
        raise OrderExhausted(f"jet order {conn.order} cannot reach derivative depth {depth}")
    n = conn.dim
    cache = {} if _cache is None else _cache
    if 0 not in cache:
        cache[0] = curvature(conn)
    out = EndoSet(n)
    for k in range(depth + 1):
        if k not in cache:
            cache[k] = covariant_derivative(cache[k - 1], conn)
        vals = cache[k].at_base()
        for dirs in np.ndindex((n,) * k):
            for h in range(n):
                for j in range(h + 1, n):
                    mat = vals[dirs + (h, j)]
                    if any(x != 0 for x in mat.flat):
                        mat = np.array([[mpq(x) for x in r] for r in mat], dtype=object)
                        out.generators.append(Generator(mat, k, tuple(dirs), (h, j)))
                        out.add(mat)
    return out


def lie_closure(gens: EndoSet | Iterable[np.ndarray], dim: int | None = None) -> EndoSet:
    """Smallest bracket-closed subspace containing the generators."""
    if isinstance(gens, EndoSet):
        dim = gens.dim
        generators = list(gens.generators)
        seeds = [g.matrix for g in generators] or list(gens.basis)
    else:
        seeds = [np.asarray(g, dtype=object) for g in gens]
        if dim is None:
            if not seeds:
                raise ValueError("dim is required for an empty generator list")
            dim = seeds[0].shape[0]
        generators = []
    out = EndoSet(dim, generators)
    for s in seeds:
        out.add(s)
    i = 0
    while i < len(out.basis):
        a = out.basis[i]
        for j in range(i):
            out.add(bracket(out.basis[j], a))
        i += 1
    out.closed = True
    return out


@dataclass
class HolonomyResult:
    algebra: EndoSet
    depth: int
    stabilized: bool
    dims_by_depth: list[int]
    label: str = "infinitesimal holonomy at base point"

    @property
    def dimension(self) -> int:
        return self.algebra.dimension


def infinitesimal_holonomy(conn: ConnectionChart, max_depth: int | None = None) -> HolonomyResult:
    """Lie closure at increasing depth until two consecutive depths agree.

    The hard cap is jet order - 1; reaching it without two agreeing depths
    gives ``stabilized = False``.
    """
    if conn.order < 2:
        raise OrderExhausted(f"infinitesimal holonomy needs jet order >= 2, got {conn.order}; "
                             "raise --order for the base chart")
    cap = conn.order - 1
    if max_depth is not None:
        cap = min(cap, max_depth)
    cache: dict = {}
    dims: list[int] = []
    algebra = None
    for d in range(cap + 1):
        gens = curvature_endos(conn, d, cache)
        algebra = lie_closure(gens)
        dims.append(algebra.dimension)
        if d >= 1 and dims[-1] == dims[-2]:
            return HolonomyResult(algebra, d, True, dims)
    return HolonomyResult(algebra, cap, False, dims)
