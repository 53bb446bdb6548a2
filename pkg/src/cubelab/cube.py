"""Vertices, vertex sets and real functions on the discrete cube {0,1}^n.

A vertex is an integer in ``[0, 2**n)``; bit ``i`` of the integer is the
coordinate ``x_i``.  Two vertices are adjacent iff their XOR is a power of
two, so neighbourhoods are a single XOR away.

Vertex sets keep a sorted index array, which lets a few operations (ball
and subcube construction, degree tallies, walk counts) run in dimensions
far above the dense cap.  Anything that needs a length ``2**n`` array goes
through :func:`require_dense` first.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import settings


def require_dense(n: int) -> None:
    """Raise unless ``2**n`` arrays are allowed for dimension ``n``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    if n > settings.max_dim:
        raise ValueError(
            f"dimension {n} exceeds the dense cap {settings.max_dim} "
            "(raise cubelab.config.settings.max_dim to allow it)")


def _require_sparse(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    if n > settings.max_sparse_dim:
        raise ValueError(f"dimension {n} exceeds {settings.max_sparse_dim}")


def _check_vertex(v: int, n: int) -> int:
    v = int(v)
    if not 0 <= v < (1 << n):
        raise ValueError(f"vertex {v} outside [0, 2**{n})")
    return v


class VertexSet:
    """A subset of {0,1}^n stored as a sorted array of vertex indices."""

    __slots__ = ("n", "indices", "_mask")

    def __init__(self, n: int, indices: Iterable[int] = ()):
        _require_sparse(n)
        idx = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray)
                                   else indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= (1 << n)):
            raise ValueError(f"vertex indices must lie in [0, 2**{n})")
        idx.setflags(write=False)
        self.n = int(n)
        self.indices = idx
        self._mask = None

    @classmethod
    def from_mask(cls, mask) -> "VertexSet":
        mask = np.asarray(mask, dtype=bool)
        n = int(mask.size).bit_length() - 1
        if mask.ndim != 1 or (1 << n) != mask.size:
            raise ValueError("mask length must be a power of two")
        return cls(n, np.flatnonzero(mask))

    @classmethod
    def from_int(cls, n: int, bits: int) -> "VertexSet":
        """Set whose member ``v`` corresponds to bit ``v`` of ``bits``."""
        bits = int(bits)
        if bits < 0 or bits >> (1 << n):
            raise ValueError(f"bitmask does not fit 2**{n} vertices")
        return cls(n, [v for v in range(bits.bit_length()) if bits >> v & 1])

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        require_dense(n)
        return cls(n, np.arange(1 << n, dtype=np.int64))

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return (int(v) for v in self.indices)

    def __contains__(self, v) -> bool:
        pos = np.searchsorted(self.indices, v)
        return bool(pos < self.size and self.indices[pos] == v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self) -> str:
        if self.size <= 8:
            return f"VertexSet(n={self.n}, {self.indices.tolist()})"
        return f"VertexSet(n={self.n}, size={self.size})"

    @property
    def mask(self) -> np.ndarray:
        """Dense boolean membership array of length ``2**n``."""
        if self._mask is None:
            require_dense(self.n)
            m = np.zeros(1 << self.n, dtype=bool)
            m[self.indices] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    def is_empty(self) -> bool:
        return self.size == 0

    def is_full(self) -> bool:
        return self.size == (1 << self.n)

    def to_int(self) -> int:
        bits = 0
        for v in self.indices.tolist():
            bits |= 1 << v
        return bits

    def to_hex(self) -> str:
        return format(self.to_int(), "x")

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, np.flatnonzero(~self.mask))

    def positions(self, vertices) -> np.ndarray:
        """Row position of each vertex in ``indices``, or -1 when absent."""
        vertices = np.asarray(vertices, dtype=np.int64)
        if self.size == 0:
            return np.full(vertices.shape, -1, dtype=np.int64)
        pos = np.searchsorted(self.indices, vertices)
        pos = np.minimum(pos, self.size - 1)
        return np.where(self.indices[pos] == vertices, pos, -1)

    def neighbor_table(self) -> np.ndarray:
        """``(|A|, n)`` table: column ``i`` holds the position of ``x ^ (1<<i)``, -1 if outside."""
        flips = np.left_shift(np.int64(1), np.arange(self.n, dtype=np.int64))
        return self.positions(self.indices[:, None] ^ flips[None, :])

    def internal_degrees(self) -> np.ndarray:
        """Number of neighbours inside the set, per member, in index order."""
        return (self.neighbor_table() >= 0).sum(axis=1)


class CubeFunction:
    """A real function on {0,1}^n given by its ``2**n`` values."""

    __slots__ = ("n", "values")

    def __init__(self, values):
        values = np.array(values, dtype=float)
        n = int(values.size).bit_length() - 1
        if values.ndim != 1 or values.size < 2 or (1 << n) != values.size:
            raise ValueError("a cube function needs exactly 2**n values, n >= 1")
        require_dense(n)
        values.setflags(write=False)
        self.n = n
        self.values = values

    @classmethod
    def indicator(cls, A: VertexSet) -> "CubeFunction":
        return cls(A.mask.astype(float))

    @classmethod
    def zeros(cls, n: int) -> "CubeFunction":
        require_dense(n)
        return cls(np.zeros(1 << n))

    def support(self) -> VertexSet:
        return VertexSet(self.n, np.flatnonzero(self.values != 0))

    def abs_sum(self) -> float:
        return float(np.abs(self.values).sum())

    def __repr__(self) -> str:
        return f"CubeFunction(n={self.n}, values={self.values.tolist() if self.n <= 3 else '...'})"


def neighbors(v: int, n: int) -> list[int]:
    """The ``n`` vertices at Hamming distance one from ``v``."""
    _require_sparse(n)
    v = _check_vertex(v, n)
    return [v ^ (1 << i) for i in range(n)]


def make_subcube(n: int, free_coords: Iterable[int],
                 fixed_values: Mapping[int, int] | None = None) -> VertexSet:
    """Subcube with the given free coordinates.

    ``fixed_values`` maps every non-free coordinate to 0 or 1; when omitted
    all non-free coordinates are fixed to 0.
    """
    _require_sparse(n)
    free = sorted(set(int(i) for i in free_coords))
    if any(not 0 <= i < n for i in free):
        raise ValueError(f"free coordinates must lie in [0, {n})")
    if fixed_values is None:
        fixed_values = {i: 0 for i in range(n) if i not in free}
    fixed = {int(i): int(b) for i, b in fixed_values.items()}
    if set(fixed) & set(free):
        raise ValueError(f"coordinates {sorted(set(fixed) & set(free))} are both free and fixed")
    if set(fixed) | set(free) != set(range(n)):
        missing = sorted(set(range(n)) - set(fixed) - set(free))
        extra = sorted(set(fixed) - set(range(n)))
        raise ValueError(f"coordinate assignment incomplete: missing {missing}, unknown {extra}")
    if any(b not in (0, 1) for b in fixed.values()):
        raise ValueError("fixed coordinate values must be 0 or 1")
    base = sum(1 << i for i, b in fixed.items() if b)
    members = [base | sum(1 << free[j] for j in range(len(free)) if k >> j & 1)
               for k in range(1 << len(free))]
    return VertexSet(n, members)


def make_ball(n: int, center: int, radius: int) -> VertexSet:
    """Hamming ball of the given radius around ``center``."""
    _require_sparse(n)
    center = _check_vertex(center, n)
    if not 0 <= radius <= n:
        raise ValueError(f"radius must lie in [0, {n}], got {radius}")
    members = [center]
    for r in range(1, radius + 1):
        for coords in itertools.combinations(range(n), r):
            members.append(center ^ sum(1 << i for i in coords))
    return VertexSet(n, members)


def edge_boundary(A: VertexSet) -> int:
    """Number of cube edges with exactly one endpoint in ``A``."""
    if A.size == 0:
        return 0
    return int(A.size * A.n - A.internal_degrees().sum())


def _pairs(values: np.ndarray, i: int) -> np.ndarray:
    # axis 1 of the view separates x_i = 0 (index 0) from x_i = 1 (index 1)
    return values.reshape(-1, 2, 1 << i)


def dirichlet_form(g: CubeFunction) -> float:
    """E_x sum_{y ~ x} (g(x) - g(y))^2 under the uniform measure."""
    total = 0.0
    for i in range(g.n):
        p = _pairs(g.values, i)
        total += float(np.square(p[:, 0, :] - p[:, 1, :]).sum())
    # every unordered edge is seen twice in the ordered sum
    return 2.0 * total / g.values.size


def shift_direction(g: CubeFunction, i: int) -> CubeFunction:
    """Downward shift: along each edge in direction ``i`` put the larger value on the 0 side."""
    if not 0 <= i < g.n:
        raise ValueError(f"direction must lie in [0, {g.n}), got {i}")
    p = _pairs(g.values, i)
    out = np.empty_like(p)
    out[:, 0, :] = np.maximum(p[:, 0, :], p[:, 1, :])
    out[:, 1, :] = np.minimum(p[:, 0, :], p[:, 1, :])
    return CubeFunction(out.reshape(-1))


def monotonize(g: CubeFunction, order: Sequence[int] | None = None) -> CubeFunction:
    """Shift in every direction, ascending unless ``order`` is given."""
    for i in (range(g.n) if order is None else order):
        g = shift_direction(g, i)
    return g


def is_downward_monotone(g: CubeFunction) -> bool:
    """True iff g(x) >= g(y) whenever x <= y coordinatewise.

    Comparability is generated by single-coordinate covers, so checking each
    edge in each direction is enough.
    """
    for i in range(g.n):
        p = _pairs(g.values, i)
        if np.any(p[:, 0, :] < p[:, 1, :]):
            return False
    return True
