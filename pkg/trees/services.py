import logging
from typing import Optional

import numpy as np

from core.exceptions import InvalidInput, NotTreeKernel, ValidationFailure, ZeroEdgeWeight
from core.models import GramSpace, Tolerances
from core.services import validate_gram
from hyperbolic.models import PointSet
from invariants.services import delta

from .models import NormMode, RootedTree, TreeFunction, TreeWeight

logger = logging.getLogger(__name__)

TREE_PROVENANCE = 'tree'


class TreeService:
    """Kernels of the form Omega(x ^ y) on rooted trees"""

    @staticmethod
    def meet(T: RootedTree, x: int, y: int) -> int:
        """Deepest common ancestor x ^ y"""
        depth = T.depth
        while depth[x] > depth[y]:
            x = T.parent[x]
        while depth[y] > depth[x]:
            y = T.parent[y]
        while x != y:
            x, y = T.parent[x], T.parent[y]
        return x

    @staticmethod
    def meet_matrix(T: RootedTree) -> np.ndarray:
        M = np.empty((T.V, T.V), dtype=int)
        for x in range(T.V):
            for y in range(x, T.V):
                M[x, y] = M[y, x] = TreeService.meet(T, x, y)
        return M

    @staticmethod
    def tree_distance(T: RootedTree, x: int, y: int) -> float:
        d = T.root_distance
        return d[x] + d[y] - 2.0 * d[TreeService.meet(T, x, y)]

    @staticmethod
    def gromov_product(T: RootedTree, x: int, y: int, base: Optional[int] = None) -> float:
        """(x | y)_base = (d(base, x) + d(base, y) - d(x, y)) / 2"""
        b = T.root if base is None else base
        dist = TreeService.tree_distance
        return (dist(T, b, x) + dist(T, b, y) - dist(T, x, y)) / 2.0

    @staticmethod
    def tree_kernel(T: RootedTree, W: TreeWeight, tol: Optional[Tolerances] = None) -> GramSpace:
        W.check(T)
        K = W.omega_big[TreeService.meet_matrix(T)]
        return validate_gram(K, tol, provenance=TREE_PROVENANCE)

    @staticmethod
    def spine_embedding(T: RootedTree, W: TreeWeight) -> PointSet:
        """Phi(z) = Phi(z^-) + c(z) e_z with c(z)^2 = 1/Omega(z^-) - 1/Omega(z)"""
        W.check(T)
        omega = W.omega_big
        position = {v: i for i, v in enumerate(T.bfs_order)}
        points = np.zeros((T.V, T.V))
        for z in T.bfs_order[1:]:
            p = T.parent[z]
            points[z] = points[p]
            points[z, position[z]] = np.sqrt(1.0 / omega[p] - 1.0 / omega[z])
        return PointSet(points)

    @staticmethod
    def co_integral(T: RootedTree, f: TreeFunction) -> np.ndarray:
        """I*f(z): the sum of f over the subtree rooted at z"""
        out = np.array(f.values, dtype=complex)
        for v in reversed(T.bfs_order[1:]):
            out[T.parent[v]] += out[v]
        return out

    @staticmethod
    def summation_by_parts_check(
        T: RootedTree, h: TreeFunction, f: TreeFunction
    ) -> tuple[float, float]:
        """Both sides of sum h(x ^ y) f(x) conj(f(y)) = h(o)|I*f(o)|^2 + sum (h(z) - h(z^-))|I*f(z)|^2"""
        if len(h) != T.V or len(f) != T.V:
            raise InvalidInput(f"tree functions must have {T.V} values")
        H = h.values[TreeService.meet_matrix(T)]
        v = f.values
        lhs = complex(v @ H @ v.conj())

        star = TreeService.co_integral(T, f)
        increments = np.array(h.values, dtype=complex)
        for z, p in enumerate(T.parent):
            if p != -1:
                increments[z] = h.values[z] - h.values[p]
        rhs = complex(np.sum(increments * np.abs(star) ** 2))
        return float(lhs.real), float(rhs.real)

    @staticmethod
    def tree_norm(T: RootedTree, W: TreeWeight, f: TreeFunction, mode: str = NormMode.COEFFICIENTS) -> float:
        """||f||^2 from kernel coefficients or from function values"""
        if len(f) != T.V:
            raise InvalidInput(f"tree function must have {T.V} values")
        omega = W.edge_weights(T)
        bad = [z for z in range(T.V) if omega[z] <= 0]
        if bad:
            raise ZeroEdgeWeight(f"edge weight at vertex {bad[0]} is {omega[bad[0]]}", vertex=bad[0])

        if mode == NormMode.COEFFICIENTS:
            star = TreeService.co_integral(T, f)
            return float(np.sum(omega * np.abs(star) ** 2))
        if mode == NormMode.VALUES:
            values = f.values
            diffs = np.array(values, dtype=complex)
            for z, p in enumerate(T.parent):
                if p != -1:
                    diffs[z] = values[z] - values[p]
            # at the root omega(o) = 1, so the first term is |f(o)|^2
            return float(np.sum(np.abs(diffs) ** 2 / omega))
        raise InvalidInput(f"unknown norm mode {mode!r}")

    @staticmethod
    def gromov_kernel(T: RootedTree, Lambda: float, tol: Optional[Tolerances] = None) -> GramSpace:
        """Omega(s) = Lambda ** d(o, s), so k_xy = Lambda ** (x | y)_o"""
        if not Lambda > 1.0:
            raise InvalidInput(f"Lambda must exceed 1, got {Lambda}")
        W = TreeWeight(np.power(Lambda, np.array(T.root_distance)))
        return TreeService.tree_kernel(T, W, tol)

    @staticmethod
    def distance_kernel(T: RootedTree, Gamma: float, tol: Optional[Tolerances] = None) -> GramSpace:
        """k_xy = Gamma ** d(x, y)"""
        if not 0.0 < Gamma < 1.0:
            raise InvalidInput(f"Gamma must lie in (0, 1), got {Gamma}")
        D = np.array([[TreeService.tree_distance(T, x, y) for y in range(T.V)] for x in range(T.V)])
        return validate_gram(np.power(Gamma, D), tol)

    @staticmethod
    def power_kernel(G: GramSpace, lam: float) -> GramSpace:
        """Entrywise power k_xy ** lambda of a tree kernel"""
        if G.provenance != TREE_PROVENANCE:
            raise NotTreeKernel("entrywise powers are only supported for kernels built on a tree")
        if not lam > 0:
            raise InvalidInput(f"lambda must be positive, got {lam}")
        return validate_gram(np.power(G.K.real, lam), G.tol, labels=G.labels, provenance=TREE_PROVENANCE)

    @staticmethod
    def reroot(T: RootedTree, new_root: int) -> RootedTree:
        """Same vertices and edges with the root moved to new_root"""
        if not 0 <= new_root < T.V:
            raise InvalidInput(f"vertex {new_root} outside 0..{T.V - 1}")
        parent = list(T.parent)
        lengths = list(T.edge_len)
        path = T.path_to_root(new_root)
        # reverse every edge on the path from new_root to the old root
        for child, up in zip(path, path[1:]):
            parent[up] = child
            lengths[up] = T.edge_len[child]
        parent[new_root] = -1
        lengths[new_root] = 1.0
        return RootedTree(parent=tuple(parent), edge_len=tuple(lengths))

    @staticmethod
    def edge_delta(G: GramSpace, T: RootedTree, y: int) -> float:
        """delta(y, y^-); equals sqrt(omega(y) / Omega(y)) for tree kernels"""
        p = T.parent[y]
        if p == -1:
            raise InvalidInput("the root has no parent edge")
        return delta(G, y, p)

    @staticmethod
    def dyadic_tree(depth: int) -> RootedTree:
        """Full binary tree with 2 ** (depth + 1) - 1 vertices in heap order"""
        if depth < 0:
            raise InvalidInput(f"depth must be nonnegative, got {depth}")
        V = 2 ** (depth + 1) - 1
        return RootedTree(parent=(-1,) + tuple((v - 1) // 2 for v in range(1, V)))

    @staticmethod
    def tree_from_kernel(G: GramSpace) -> tuple[RootedTree, TreeWeight]:
        """Recover the tree and Omega from a kernel of the form Omega(x ^ y).

        The root is the kernel whose row is all ones; sigma precedes tau when
        k_sigma,tau = k_sigma,sigma, and the parent of a vertex is its latest
        proper predecessor.
        """
        tol = G.tol
        K = G.K
        if np.max(np.abs(K.imag)) > tol.tol_eq * (1.0 + np.max(np.abs(K))):
            raise NotTreeKernel("tree kernels are real")
        K = K.real
        roots = [v for v in range(G.n) if np.allclose(K[v], 1.0, rtol=0, atol=tol.tol_eq)]
        if len(roots) != 1:
            raise NotTreeKernel(f"expected one kernel identically 1, found {len(roots)}")

        diag = K.diagonal()
        scale = tol.tol_eq * (1.0 + np.abs(K))
        precedes = np.abs(K - diag[:, None]) <= scale
        parent = []
        for v in range(G.n):
            preds = [s for s in range(G.n) if s != v and precedes[s, v]]
            if v == roots[0]:
                parent.append(-1)
            elif not preds:
                raise NotTreeKernel(f"kernel {v} has no predecessor")
            else:
                parent.append(max(preds, key=lambda s: diag[s]))

        try:
            T = RootedTree(parent=tuple(parent))
            W = TreeWeight(diag)
            W.check(T)
        except ValidationFailure as e:
            raise NotTreeKernel(f"the kernel order is not a rooted tree: {e.msg}") from e

        rebuilt = diag[TreeService.meet_matrix(T)]
        if np.max(np.abs(rebuilt - K)) > tol.tol_eq * (1.0 + np.max(np.abs(K))):
            raise NotTreeKernel("the kernel is not of the form Omega(x ^ y)")
        logger.debug(f"Recovered a {T.V}-vertex tree rooted at {T.root}")
        return T, W


meet = TreeService.meet
tree_distance = TreeService.tree_distance
gromov_product = TreeService.gromov_product
tree_kernel = TreeService.tree_kernel
spine_embedding = TreeService.spine_embedding
co_integral = TreeService.co_integral
summation_by_parts_check = TreeService.summation_by_parts_check
tree_norm = TreeService.tree_norm
gromov_kernel = TreeService.gromov_kernel
distance_kernel = TreeService.distance_kernel
power_kernel = TreeService.power_kernel
reroot = TreeService.reroot
edge_delta = TreeService.edge_delta
dyadic_tree = TreeService.dyadic_tree
tree_from_kernel = TreeService.tree_from_kernel
