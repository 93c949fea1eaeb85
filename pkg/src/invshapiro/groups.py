"""Finite permutation groups, subgroups, left transversals.

Elements are indices into an enumerated table; index 0 is the identity.
Permutations are 0-based image arrays and compose left to right, so
``mul(a, b)`` means "apply a, then b" (points are acted on from the right).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InvalidPermutation

DEFAULT_CAP = 50_000
# full |G| x |G| multiplication tables only below this order
TABLE_CAP = 2048

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


# ---------------------------------------------------------------------------
# permutation input

def parse_perm(text: str) -> tuple[int, ...]:
    """Parse one permutation, 1-based, in cycle or image-list notation.

    ``"(1 2 3)(4 5)"`` and ``"2 3 1 5 4"`` give the same permutation.
    Commas are accepted as separators inside cycles.
    """
    text = text.strip()
    if not text:
        raise InvalidPermutation("empty permutation")
    if text.startswith("("):
        if _CYCLE_RE.sub("", text).strip():
            raise InvalidPermutation(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            pts = [int(tok) for tok in body.replace(",", " ").split()]
            cycles.append(pts)
        points = [p for c in cycles for p in c]
        if any(p < 1 for p in points):
            raise InvalidPermutation("points are 1-based")
        if len(set(points)) != len(points):
            raise InvalidPermutation(f"repeated point in {text!r}")
        degree = max(points, default=1)
        img = list(range(degree))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        return tuple(img)
    try:
        img = [int(tok) - 1 for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InvalidPermutation(f"cannot parse {text!r}") from exc
    check_perm(img)
    return tuple(img)


def check_perm(img: Sequence[int]) -> None:
    if sorted(img) != list(range(len(img))):
        raise InvalidPermutation(f"not a bijection of 1..{len(img)}: "
                                 f"{[i + 1 for i in img]}")


def parse_group_file(text: str) -> list[tuple[int, ...]]:
    """One generator per line; blank lines and ``#`` comments are ignored."""
    gens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            gens.append(parse_perm(line))
    return gens


def read_group_file(path: str | Path) -> list[tuple[int, ...]]:
    return parse_group_file(Path(path).read_text())


def format_cycles(img: Sequence[int]) -> str:
    """1-based cycle notation; the identity is ``()``."""
    seen = set()
    out = []
    for start in range(len(img)):
        if start in seen or img[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = img[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = img[x]
        out.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(out) or "()"


# ---------------------------------------------------------------------------
# groups

class FiniteGroup:
    """An enumerated permutation group.

    Products are looked up in a full table when the order is at most
    ``TABLE_CAP``; beyond that permutations are composed on the fly and
    located through a hash index.
    """

    def __init__(self, perms: np.ndarray, name: str | None = None,
                 table_cap: int = TABLE_CAP):
        perms = np.ascontiguousarray(perms)
        if perms.ndim != 2 or len(perms) == 0:
            raise ValueError("expected a non-empty (order, degree) array")
        if not np.array_equal(perms[0], np.arange(perms.shape[1])):
            raise ValueError("element 0 must be the identity")
        self.perms = perms
        self.perms.setflags(write=False)
        self.name = name
        self.order = len(perms)
        self.degree = perms.shape[1]
        self._index = {row.tobytes(): i for i, row in enumerate(perms)}
        if len(self._index) != self.order:
            raise ValueError("repeated elements")
        self._build_hash()
        self._table = self._build_table() if self.order <= table_cap else None
        inv_perms = np.argsort(perms, axis=1).astype(perms.dtype)
        self.inv = self.lookup(inv_perms)
        self.inv.setflags(write=False)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<FiniteGroup {label} order={self.order} degree={self.degree}>"

    # -- index lookup -------------------------------------------------------

    def _build_hash(self) -> None:
        rng = np.random.default_rng(0x5A17)
        self._weights = rng.integers(1, 2**63, size=self.degree,
                                     dtype=np.uint64) | np.uint64(1)
        keys = self._hash(self.perms)
        order = np.argsort(keys, kind="stable")
        self._hash_sorted = keys[order]
        self._hash_pos = order
        self._hash_ok = len(np.unique(keys)) == self.order

    def _hash(self, perms: np.ndarray) -> np.ndarray:
        p = perms.astype(np.uint64) + np.uint64(1)
        with np.errstate(over="ignore"):
            return (p * self._weights).sum(axis=-1, dtype=np.uint64)

    def lookup(self, perms: np.ndarray) -> np.ndarray:
        """Element indices of an array of permutations (last axis = points)."""
        perms = np.asarray(perms)
        if self._hash_ok:
            keys = self._hash(perms)
            pos = np.searchsorted(self._hash_sorted, keys)
            pos = np.minimum(pos, self.order - 1)
            idx = self._hash_pos[pos]
            if np.array_equal(self.perms[idx], perms):
                return idx.astype(np.int64)
        flat = perms.reshape(-1, self.degree).astype(self.perms.dtype)
        try:
            out = np.fromiter((self._index[r.tobytes()] for r in flat),
                              dtype=np.int64, count=len(flat))
        except KeyError:
            raise ValueError("permutation is not an element of the group") from None
        return out.reshape(perms.shape[:-1])

    def index_of(self, perm: Sequence[int]) -> int:
        p = np.zeros(self.degree, dtype=self.perms.dtype)
        p[:] = np.arange(self.degree)
        if len(perm) > self.degree:
            if any(perm[i] != i for i in range(self.degree, len(perm))):
                raise ValueError("permutation moves points outside the group")
            perm = perm[:self.degree]
        p[:len(perm)] = perm
        try:
            return self._index[p.tobytes()]
        except KeyError:
            raise ValueError(f"{format_cycles(perm)} is not in the group") from None

    def parse(self, text: str) -> int:
        return self.index_of(parse_perm(text))

    # -- arithmetic ---------------------------------------------------------

    def _build_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            # row j of perms[:, perms[i]] is "apply i, then j"
            table[i] = self.lookup(self.perms[:, self.perms[i]])
        table.setflags(write=False)
        return table

    @property
    def has_table(self) -> bool:
        return self._table is not None

    @property
    def mul_table(self) -> np.ndarray:
        if self._table is None:
            raise ValueError(f"no multiplication table above order {TABLE_CAP}")
        return self._table

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return self._index[self.perms[b][self.perms[a]].tobytes()]

    def mul_many(self, a, b) -> np.ndarray:
        """Vectorised products over broadcast index arrays."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        if self._table is not None:
            return self._table[a, b].astype(np.int64)
        prod = np.take_along_axis(self.perms[b], self.perms[a].astype(np.intp), axis=-1)
        return self.lookup(prod)

    def prod(self, items: Iterable[int]) -> int:
        out = 0
        for x in items:
            out = self.mul(out, x)
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        out = 0
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def conj(self, g: int, x: int) -> int:
        """``g`` conjugated by ``x``, i.e. x^-1 g x."""
        return self.mul(self.mul(int(self.inv[x]), g), x)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def perm(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.perms[i])

    def cycles(self, i: int) -> str:
        return format_cycles(self.perms[i])

    def is_involution(self, i: int) -> bool:
        return i != 0 and int(self.inv[i]) == i

    @cached_property
    def involutions(self) -> np.ndarray:
        idx = np.arange(self.order)
        return idx[(self.inv == idx) & (idx != 0)]


def close_generators(generators: Iterable[Sequence[int] | str],
                     cap: int = DEFAULT_CAP, name: str | None = None,
                     table_cap: int = TABLE_CAP) -> FiniteGroup:
    """Enumerate the group generated by ``generators`` breadth first.

    Generators may be image tuples (0-based) or strings in either input
    notation. Shorter permutations are padded with fixed points.
    """
    gens = [parse_perm(g) if isinstance(g, str) else tuple(g) for g in generators]
    for g in gens:
        check_perm(g)
    degree = max((len(g) for g in gens), default=1)
    dtype = np.uint8 if degree <= 256 else np.uint16
    arrs = []
    for g in gens:
        a = np.arange(degree, dtype=dtype)
        a[:len(g)] = g
        if not np.array_equal(a, np.arange(degree)):
            arrs.append(a)
    ident = np.arange(degree, dtype=dtype)
    elements = [ident]
    seen = {ident.tobytes()}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in arrs:
            y = g[x]
            key = y.tobytes()
            if key not in seen:
                if len(elements) >= cap:
                    raise CapExceeded(f"closure exceeds {cap} elements")
                seen.add(key)
                elements.append(y)
                queue.append(y)
    return FiniteGroup(np.array(elements), name=name, table_cap=table_cap)


def involution_classes(G: FiniteGroup) -> list[list[int]]:
    """Conjugacy classes of elements of order 2, each sorted, ordered by
    their smallest element."""
    remaining = set(int(i) for i in G.involutions)
    everything = np.arange(G.order)
    classes = []
    for g in G.involutions:
        g = int(g)
        if g not in remaining:
            continue
        conj = G.mul_many(G.mul_many(G.inv, g), everything)
        cls = sorted(set(int(c) for c in conj))
        remaining.difference_update(cls)
        classes.append(cls)
    return classes


# ---------------------------------------------------------------------------
# subgroups and transversals

@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(int(m) for m in self.members)))
        object.__setattr__(self, "members", members)
        if not members or members[0] != 0:
            raise ValueError("a subgroup contains the identity")
        mset = set(members)
        G = self.parent
        for a in members:
            if int(G.inv[a]) not in mset:
                raise ValueError("subset is not closed under inverses")
            for b in members:
                if G.mul(a, b) not in mset:
                    raise ValueError("subset is not closed under products")

    @classmethod
    def generated(cls, G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
        gens = list(gens)
        found = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.mul(x, g)
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        return cls(G, tuple(found))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return int(g) in self._member_set

    @cached_property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m


class Transversal:
    """Left coset representatives Y of H in G with g = y h factorisations.

    ``coset_of[g]`` is the position of gH in ``reps``; ``h_part[g]`` is the
    h with g = reps[coset_of[g]] * h, so ``h_part`` is the projection pi.
    """

    def __init__(self, G: FiniteGroup, H: Subgroup, reps: Sequence[int]):
        if H.parent is not G:
            raise ValueError("H must be a subgroup of G")
        n = G.order
        coset_of = np.full(n, -1, dtype=np.int64)
        h_part = np.full(n, -1, dtype=np.int64)
        hmem = np.array(H.members, dtype=np.int64)
        for c, y in enumerate(reps):
            xs = G.mul_many(y, hmem)
            if np.any(coset_of[xs] >= 0):
                raise ValueError(f"representative {y} repeats a coset")
            coset_of[xs] = c
            h_part[xs] = hmem
        if np.any(coset_of < 0):
            raise ValueError("representatives do not cover G")
        self.group = G
        self.subgroup = H
        self.reps = tuple(int(y) for y in reps)
        self.coset_of = coset_of
        self.h_part = h_part
        self.rho_table = G.mul_many(h_part, G.inv)
        for arr in (coset_of, h_part, self.rho_table):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"<Transversal index={self.index} y0={self.y0}>"

    @property
    def index(self) -> int:
        return len(self.reps)

    @property
    def y0(self) -> int:
        """The unique representative lying in H."""
        return self.reps[int(self.coset_of[0])]

    def pi(self, g: int) -> int:
        return int(self.h_part[g])

    def rho(self, g: int) -> int:
        return int(self.rho_table[g])

    def rep(self, g: int) -> int:
        return self.reps[int(self.coset_of[g])]

    def coset_action(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        """For each coset c: (c', h') with a * reps[c] = reps[c'] * h'."""
        ys = np.array(self.reps, dtype=np.int64)
        ay = self.group.mul_many(a, ys)
        return self.coset_of[ay], self.h_part[ay]


def left_transversal(G: FiniteGroup, H: Subgroup, y0: int | None = None) -> Transversal:
    """Representatives are the first element of each coset in enumeration
    order, so the identity represents H itself unless ``y0`` (an element of
    H) is given to represent H instead."""
    if y0 is not None and y0 not in H:
        raise ValueError("y0 must lie in H")
    seen = np.zeros(G.order, dtype=bool)
    hmem = np.array(H.members, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(y0 if (g == 0 and y0 is not None) else g)
        seen[G.mul_many(g, hmem)] = True
    return Transversal(G, H, reps)


def project_pi(T: Transversal, g: int) -> int:
    return T.pi(g)


def rho(T: Transversal, g: int) -> int:
    return T.rho(g)


# ---------------------------------------------------------------------------
# built-in groups

NAMED_GROUPS: dict[str, list[str]] = {
    "c2": ["(1 2)"],
    "s3": ["(1 2)", "(1 2 3)"],
    "a4": ["(1 2)(3 4)", "(1 2 3)"],
    "a5": ["(1 2 3 4 5)", "(1 2 3)"],
    # Fano plane action of PSL(3,2) = PSL(2,7)
    "psl27": ["(1 2 3 4 5 6 7)", "(3 5)(6 7)"],
    # x -> x+1, x -> wx, x -> 1/x on GF(8) u {inf}, inf = 9
    "psl28": ["2 1 4 3 6 5 8 7 9", "1 3 5 7 4 2 8 6 9", "9 2 6 7 8 3 4 5 1"],
}

_ALIASES = {"psl(2,7)": "psl27", "psl(2,8)": "psl28", "psl2_7": "psl27",
            "psl2_8": "psl28", "l2(7)": "psl27", "l2(8)": "psl28"}

NAMED_ORDERS = {"c2": 2, "s3": 6, "a4": 12, "a5": 60, "psl27": 168, "psl28": 504}


def named_group(name: str) -> FiniteGroup:
    key = name.lower().replace(" ", "")
    key = _ALIASES.get(key, key)
    if key not in NAMED_GROUPS:
        raise KeyError(f"unknown group {name!r}; known: {sorted(NAMED_GROUPS)}")
    G = close_generators(NAMED_GROUPS[key], name=key)
    assert G.order == NAMED_ORDERS[key], (key, G.order)
    return G
