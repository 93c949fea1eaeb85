"""Right G-modules over GF(2).

A module is acted on by a set of element indices of a parent FiniteGroup
(all of G, or the members of a subgroup H). Vectors are F2Vector values;
bulk operations take uint8 arrays whose last axis is the module dimension.
Matrices use the row convention, so ``v * a`` is ``v @ matrix(a)``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .f2 import F2Matrix, F2Vector, pack, unpack
from .groups import FiniteGroup, Subgroup, Transversal


class GModule:
    kind = "generic"

    def __init__(self, parent: FiniteGroup, elements: Sequence[int], dim: int,
                 matrices: Mapping[int, np.ndarray] | None = None):
        self.parent = parent
        self.elements = np.array(sorted(int(e) for e in elements), dtype=np.int64)
        if len(self.elements) == 0 or self.elements[0] != 0:
            raise ValueError("the acting set must contain the identity")
        self.dim = dim
        self._mats = None
        if matrices is not None:
            mats = np.zeros((len(self.elements), dim, dim), dtype=np.uint8)
            for a, m in matrices.items():
                mats[self.position(a)] = np.asarray(m, dtype=np.uint8) & 1
            self._mats = mats
            if not np.array_equal(mats[0], np.eye(dim, dtype=np.uint8)):
                raise ValueError("the identity must act trivially")
        self._matrix_cache: dict[int, F2Matrix] = {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} dim={self.dim} acting={len(self.elements)}>"

    # -- acting set ---------------------------------------------------------

    @cached_property
    def positions(self) -> np.ndarray:
        """Parent element index -> position in ``elements`` (-1 if absent)."""
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[self.elements] = np.arange(len(self.elements))
        return pos

    def position(self, a: int) -> int:
        p = int(self.positions[a])
        if p < 0:
            raise ValueError(f"element {a} does not act on this module")
        return p

    @cached_property
    def domain_mul(self) -> np.ndarray:
        """Multiplication table of the acting group on positions."""
        e = self.elements
        prod = self.parent.mul_many(e[:, None], e[None, :])
        table = self.positions[prod]
        if np.any(table < 0):
            raise ValueError("acting set is not closed under multiplication")
        return table

    @property
    def order(self) -> int:
        return len(self.elements)

    # -- action -------------------------------------------------------------

    def dense_matrix(self, a: int) -> np.ndarray:
        return self._mats[self.position(a)]

    def matrix(self, a: int) -> F2Matrix:
        m = self._matrix_cache.get(a)
        if m is None:
            m = F2Matrix.from_array(self.dense_matrix(a))
            self._matrix_cache[a] = m
        return m

    def act(self, v: F2Vector, a: int) -> F2Vector:
        return self.matrix(a).left_apply(v)

    def act_array(self, arr: np.ndarray, a: int) -> np.ndarray:
        return (arr.astype(np.int64) @ self.dense_matrix(a)).astype(np.uint8) & 1

    def act_batch(self, arr: np.ndarray, elems: np.ndarray) -> np.ndarray:
        """Row i of ``arr`` acted on by ``elems[i]``."""
        mats = self._mats[self.positions[elems]].astype(np.int64)
        return (np.einsum("bi,bij->bj", arr.astype(np.int64), mats) & 1).astype(np.uint8)

    def check_action(self, pairs=None) -> bool:
        """action(1) = id and action(a) action(b) = action(ab) on ``pairs``
        (all pairs of the acting set by default)."""
        if not np.array_equal(self.dense_matrix(0), np.eye(self.dim, dtype=np.uint8)):
            return False
        if pairs is None:
            pairs = [(int(a), int(b)) for a in self.elements for b in self.elements]
        G = self.parent
        for a, b in pairs:
            lhs = (self.dense_matrix(a).astype(np.int64) @ self.dense_matrix(b)) & 1
            if not np.array_equal(lhs, self.dense_matrix(G.mul(a, b))):
                return False
        return True


class TrivialModule(GModule):
    kind = "trivial"

    def __init__(self, parent: FiniteGroup, elements: Sequence[int], dim: int = 1):
        super().__init__(parent, elements, dim)

    def dense_matrix(self, a: int) -> np.ndarray:
        self.position(a)
        return np.eye(self.dim, dtype=np.uint8)

    def act(self, v: F2Vector, a: int) -> F2Vector:
        return v

    def act_array(self, arr: np.ndarray, a: int) -> np.ndarray:
        return arr

    def act_batch(self, arr: np.ndarray, elems: np.ndarray) -> np.ndarray:
        return arr


def _acting_set(group: FiniteGroup | Subgroup) -> tuple[FiniteGroup, Sequence[int]]:
    if isinstance(group, Subgroup):
        return group.parent, group.members
    return group, range(group.order)


def trivial_module(group: FiniteGroup | Subgroup, dim: int = 1) -> TrivialModule:
    """The principal module (dim 1) or a direct sum of copies of it."""
    parent, elems = _acting_set(group)
    return TrivialModule(parent, elems, dim)


def generic_module(group: FiniteGroup | Subgroup,
                   matrices: Mapping[int, np.ndarray]) -> GModule:
    parent, elems = _acting_set(group)
    dim = next(iter(matrices.values())).shape[0]
    return GModule(parent, elems, dim, matrices)


def module_from_generators(group: FiniteGroup | Subgroup,
                           gen_matrices: Mapping[int, np.ndarray]) -> GModule:
    """Extend matrices given on generators to the whole acting set.
    Raises ValueError if the assignment is not a homomorphism."""
    parent, elems = _acting_set(group)
    dim = next(iter(gen_matrices.values())).shape[0]
    mats = {0: np.eye(dim, dtype=np.uint8)}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, m in gen_matrices.items():
                y = parent.mul(x, g)
                my = (mats[x].astype(np.int64) @ m) & 1
                if y in mats:
                    if not np.array_equal(mats[y], my):
                        raise ValueError("generator matrices do not define an action")
                else:
                    mats[y] = my.astype(np.uint8)
                    nxt.append(y)
        frontier = nxt
    if set(mats) != set(int(e) for e in elems):
        raise ValueError("generators do not generate the acting set")
    return GModule(parent, elems, dim, mats)


class CoinducedModule(GModule):
    """Functions f: G -> U with f(gh) = f(g)h, acted on by (fa)(g) = f(ag).

    Stored by values on the representatives: block ``c`` (``base.dim``
    coordinates) holds f(reps[c]).
    """

    kind = "coinduced"

    def __init__(self, transversal: Transversal, base: GModule):
        H = transversal.subgroup
        if base.parent is not transversal.group or \
                set(int(e) for e in base.elements) != set(H.members):
            raise ValueError("base module must be a module for the subgroup H")
        G = transversal.group
        super().__init__(G, range(G.order), transversal.index * base.dim)
        self.transversal = transversal
        self.base = base
        self._maps: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def index(self) -> int:
        return self.transversal.index

    @property
    def is_permutation_module(self) -> bool:
        return self.base.kind == "trivial" and self.base.dim == 1

    def coset_maps(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """(c', h') per coset c with a * reps[c] = reps[c'] * h'."""
        m = self._maps.get(a)
        if m is None:
            m = self.transversal.coset_action(a)
            self._maps[a] = m
        return m

    def coset_permutation(self, a: int) -> np.ndarray:
        return self.coset_maps(a)[0]

    @cached_property
    def _coset_table(self) -> tuple[np.ndarray, np.ndarray]:
        T = self.transversal
        G = T.group
        ys = np.array(T.reps, dtype=np.int64)
        ay = G.mul_many(np.arange(G.order)[:, None], ys[None, :])
        return T.coset_of[ay], T.h_part[ay]

    # -- action -------------------------------------------------------------

    def _blocks(self, arr: np.ndarray) -> np.ndarray:
        return arr.reshape(arr.shape[:-1] + (self.index, self.base.dim))

    def act_array(self, arr: np.ndarray, a: int) -> np.ndarray:
        cp, hp = self.coset_maps(a)
        blocks = self._blocks(arr)[..., cp, :]
        if self.base.kind != "trivial":
            blocks = blocks.copy()
            for h in np.unique(hp):
                sel = hp == h
                blocks[..., sel, :] = self.base.act_array(blocks[..., sel, :], int(h))
        return blocks.reshape(arr.shape)

    def act_batch(self, arr: np.ndarray, elems: np.ndarray) -> np.ndarray:
        cps, hps = self._coset_table
        cp = cps[elems]
        blocks = np.take_along_axis(self._blocks(arr), cp[:, :, None], axis=1)
        if self.base.kind != "trivial":
            hp = hps[elems]
            flat = blocks.reshape(-1, self.base.dim)
            flat = self.base.act_batch(flat, hp.ravel())
            blocks = flat.reshape(blocks.shape)
        return blocks.reshape(arr.shape)

    def matrix(self, a: int) -> F2Matrix:
        m = self._matrix_cache.get(a)
        if m is not None:
            return m
        cp, hp = self.coset_maps(a)
        if self.base.kind == "trivial" and self.base.dim == 1:
            rows = [0] * self.index
            for c, d in enumerate(cp):
                rows[int(d)] = 1 << c
            m = F2Matrix(self.dim, self.dim, tuple(rows))
        else:
            m = F2Matrix.from_array(self.dense_matrix(a))
        self._matrix_cache[a] = m
        return m

    def dense_matrix(self, a: int) -> np.ndarray:
        cp, hp = self.coset_maps(a)
        du = self.base.dim
        out = np.zeros((self.dim, self.dim), dtype=np.uint8)
        for c in range(self.index):
            d = int(cp[c])
            out[d * du:(d + 1) * du, c * du:(c + 1) * du] = self.base.dense_matrix(int(hp[c]))
        return out

    # -- functions on G -----------------------------------------------------

    def evaluate(self, f: F2Vector, g: int) -> F2Vector:
        """f(g) = f(y) h for g = y h."""
        T = self.transversal
        du = self.base.dim
        c = int(T.coset_of[g])
        block = F2Vector(du, (f.bits >> (c * du)) & ((1 << du) - 1))
        return self.base.act(block, int(T.h_part[g]))

    def evaluate_array(self, arr: np.ndarray, g: int) -> np.ndarray:
        T = self.transversal
        block = self._blocks(arr)[..., int(T.coset_of[g]), :]
        return self.base.act_array(block, int(T.h_part[g]))

    def from_function(self, fn: Callable[[int], F2Vector], check: bool = True) -> F2Vector:
        """Element of W from a function on G; with ``check`` the condition
        f(gh) = f(g)h is verified on all of G."""
        T = self.transversal
        du = self.base.dim
        bits = 0
        for c, y in enumerate(T.reps):
            bits |= fn(y).bits << (c * du)
        f = F2Vector(self.dim, bits)
        if check:
            for g in range(self.parent.order):
                if fn(g) != self.evaluate(f, g):
                    raise ValueError(f"function is not H-equivariant at element {g}")
        return f

    def as_function(self, f: F2Vector) -> list[F2Vector]:
        return [self.evaluate(f, g) for g in range(self.parent.order)]

    def indicator(self, coset: int) -> F2Vector:
        """For trivial U: the function that is u on one coset, 0 elsewhere."""
        if not self.is_permutation_module:
            raise ValueError("indicator functions need a one-dimensional trivial U")
        return F2Vector.unit(self.dim, coset)


def coinduce(G: FiniteGroup, H: Subgroup, U: GModule, T: Transversal) -> CoinducedModule:
    if T.group is not G or T.subgroup != H:
        raise ValueError("transversal does not match (G, H)")
    return CoinducedModule(T, U)


def vector_array(v: F2Vector) -> np.ndarray:
    return unpack(v.bits, v.dim)


def array_vector(arr: np.ndarray) -> F2Vector:
    return F2Vector(arr.shape[-1], pack(arr))
