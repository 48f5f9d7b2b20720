from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from django.db import models
from django.utils.translation import gettext_lazy as _

from core.exceptions import InvalidInput, ZeroEdgeWeight
from core.models import frozen_array


class NormMode(models.TextChoices):
    COEFFICIENTS = 'coefficients', _('Kernel coefficients')
    VALUES = 'values', _('Function values')


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A finite rooted tree given by its parent array.

    The root is the unique vertex whose parent is -1. ``edge_len[v]`` is the
    length of the edge from v to its parent (ignored at the root).
    """

    parent: tuple[int, ...]
    edge_len: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        parent = tuple(int(p) for p in self.parent)
        V = len(parent)
        if V == 0:
            raise InvalidInput("a tree needs at least one vertex")
        roots = [v for v, p in enumerate(parent) if p == -1]
        if len(roots) != 1:
            raise InvalidInput(f"expected exactly one root, found {len(roots)}")
        if any(p != -1 and not 0 <= p < V for p in parent) or any(p == v for v, p in enumerate(parent)):
            raise InvalidInput("parent entries must be vertex indices different from the vertex")
        object.__setattr__(self, 'parent', parent)

        lengths = (1.0,) * V if self.edge_len is None else tuple(float(x) for x in self.edge_len)
        if len(lengths) != V:
            raise InvalidInput(f"{len(lengths)} edge lengths for {V} vertices")
        if any(not (x > 0 and np.isfinite(x)) for v, x in enumerate(lengths) if parent[v] != -1):
            raise InvalidInput("edge lengths must be positive and finite")
        object.__setattr__(self, 'edge_len', lengths)

        if len(self.bfs_order) != V:
            raise InvalidInput("parent array contains a cycle or a vertex unreachable from the root")

    @property
    def V(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.V)]
        for v, p in enumerate(self.parent):
            if p != -1:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def bfs_order(self) -> tuple[int, ...]:
        order, queue, seen = [], deque([self.root]), {self.root}
        while queue:
            v = queue.popleft()
            order.append(v)
            for c in self.children[v]:
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        return tuple(order)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        depth = [0] * self.V
        for v in self.bfs_order[1:]:
            depth[v] = depth[self.parent[v]] + 1
        return tuple(depth)

    @cached_property
    def root_distance(self) -> tuple[float, ...]:
        """Weighted distance d(o, v)"""
        dist = [0.0] * self.V
        for v in self.bfs_order[1:]:
            dist[v] = dist[self.parent[v]] + self.edge_len[v]
        return tuple(dist)

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] != -1:
            path.append(self.parent[path[-1]])
        return path

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def __repr__(self):
        return f"RootedTree(V={self.V}, root={self.root})"


@dataclass(frozen=True, eq=False)
class TreeWeight:
    """Vertex weight Omega, normalized at the root and increasing away from it."""

    omega_big: np.ndarray

    def __post_init__(self):
        omega = np.ravel(np.array(self.omega_big, dtype=float))
        if not np.all(np.isfinite(omega)) or np.any(omega <= 0):
            raise InvalidInput("Omega must be positive and finite")
        object.__setattr__(self, 'omega_big', frozen_array(omega, dtype=float))

    def check(self, T: RootedTree):
        if self.omega_big.size != T.V:
            raise InvalidInput(f"Omega has {self.omega_big.size} entries for {T.V} vertices")
        if not np.isclose(self.omega_big[T.root], 1.0):
            raise InvalidInput(f"Omega at the root is {self.omega_big[T.root]}, expected 1")
        increments = self.edge_weights(T)
        bad = [v for v in range(T.V) if v != T.root and increments[v] <= 0]
        if bad:
            raise ZeroEdgeWeight(
                f"Omega does not increase along the edge into vertex {bad[0]}", vertex=bad[0]
            )

    def edge_weights(self, T: RootedTree) -> np.ndarray:
        """omega(z) = Omega(z) - Omega(z^-), with omega(o) = Omega(o)"""
        omega = self.omega_big.copy()
        for v, p in enumerate(T.parent):
            if p != -1:
                omega[v] = self.omega_big[v] - self.omega_big[p]
        return omega


@dataclass(frozen=True, eq=False)
class TreeFunction:
    values: np.ndarray

    def __post_init__(self):
        values = np.ravel(np.array(self.values, dtype=complex))
        if not np.all(np.isfinite(values)):
            raise InvalidInput("tree function has non-finite values")
        object.__setattr__(self, 'values', frozen_array(values))

    def __len__(self):
        return self.values.size
