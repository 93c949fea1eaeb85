"""Normalised inhomogeneous cochains with values in a GF(2) module.

A degree-n cochain over a module M is stored densely as a uint8 array of
shape ``(m,)*n + (dim,)`` indexed by positions in ``M.elements``; position
0 is the identity and every slice through it must vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityExceeded, DimensionError, NormalizationError
from .f2 import F2Matrix, F2Vector, pack, solve, unpack
from .gmodule import CoinducedModule, GModule

DEFAULT_BATCH = 100_000
MAX_UNKNOWNS = 1024
MAX_SYSTEM_ENTRIES = 50_000_000


class Cochain:
    def __init__(self, module: GModule, n: int, values: np.ndarray | None = None):
        m = module.order
        shape = (m,) * n + (module.dim,)
        if values is None:
            values = np.zeros(shape, dtype=np.uint8)
        else:
            values = np.array(values, dtype=np.uint8)
            if values.shape != shape:
                raise DimensionError(f"values of shape {values.shape}, expected {shape}")
            for axis in range(n):
                if values.take(0, axis=axis).any():
                    raise NormalizationError("cochain is nonzero on a tuple containing 1")
        values.setflags(write=False)
        self.module = module
        self.n = n
        self.values = values

    @classmethod
    def zero(cls, module: GModule, n: int) -> Cochain:
        return cls(module, n)

    @classmethod
    def from_function(cls, module: GModule, n: int,
                      fn: Callable[..., F2Vector]) -> Cochain:
        """Cochain whose value at (g_1..g_n) (parent indices) is fn(g_1..g_n).
        ``fn`` is only consulted on tuples without the identity."""
        m = module.order
        vals = np.zeros((m,) * n + (module.dim,), dtype=np.uint8)
        els = module.elements
        for pos in np.ndindex(*(m,) * n):
            if 0 in pos:
                continue
            v = fn(*(int(els[p]) for p in pos))
            vals[pos] = unpack(v.bits, module.dim)
        return cls(module, n, vals)

    @classmethod
    def from_values(cls, module: GModule, n: int,
                    table: dict[tuple[int, ...], F2Vector]) -> Cochain:
        """Sparse construction; absent tuples are zero. Tuples containing the
        identity are rejected."""
        vals = np.zeros((module.order,) * n + (module.dim,), dtype=np.uint8)
        for gs, v in table.items():
            if len(gs) != n:
                raise DimensionError(f"tuple {gs} in a degree-{n} cochain")
            if 0 in gs:
                if v:
                    raise NormalizationError(f"nonzero value at {gs}, which contains 1")
                continue
            vals[tuple(module.position(g) for g in gs)] = unpack(v.bits, module.dim)
        return cls(module, n, vals)

    @classmethod
    def random(cls, module: GModule, n: int, rng: np.random.Generator) -> Cochain:
        m = module.order
        vals = rng.integers(0, 2, size=(m,) * n + (module.dim,), dtype=np.uint8)
        for axis in range(n):
            idx = [slice(None)] * (n + 1)
            idx[axis] = 0
            vals[tuple(idx)] = 0
        return cls(module, n, vals)

    def __call__(self, *gs: int) -> F2Vector:
        return F2Vector(self.module.dim, pack(self.value_array(gs)))

    def value_array(self, gs: Sequence[int]) -> np.ndarray:
        if len(gs) != self.n:
            raise DimensionError(f"degree-{self.n} cochain called with {len(gs)} arguments")
        return self.values[tuple(self.module.position(g) for g in gs)]

    def with_value(self, gs: Sequence[int], v: F2Vector) -> Cochain:
        vals = self.values.copy()
        vals[tuple(self.module.position(g) for g in gs)] = unpack(v.bits, self.module.dim)
        return Cochain(self.module, self.n, vals)

    def _same_space(self, other: Cochain) -> None:
        if self.module is not other.module or self.n != other.n:
            raise DimensionError("cochains live in different spaces")

    def __add__(self, other: Cochain) -> Cochain:
        self._same_space(other)
        return Cochain(self.module, self.n, self.values ^ other.values)

    __sub__ = __add__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.module is other.module and self.n == other.n
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((id(self.module), self.n, self.values.tobytes()))

    def is_zero(self) -> bool:
        return not self.values.any()

    def nonzero_tuples(self) -> list[tuple[int, ...]]:
        if self.n == 0:
            return [()] if self.values.any() else []
        els = self.module.elements
        hits = np.argwhere(self.values.any(axis=-1))
        return [tuple(int(els[p]) for p in row) for row in hits]

    def __repr__(self) -> str:
        return f"<Cochain degree={self.n} dim={self.module.dim} support={len(self.nonzero_tuples())}>"


def _differential_at(lam: Cochain, tuples: np.ndarray) -> np.ndarray:
    """(d lam) at each row of ``tuples`` (positions, shape (B, n)); returns (B, dim).

    Over GF(2) all signs of the alternating sum are +1.
    """
    M = lam.module
    mul = M.domain_mul
    n = lam.n + 1
    B = len(tuples)
    vals = lam.values

    def look(cols):
        if not cols:
            return np.broadcast_to(vals, (B, M.dim)).copy()
        return vals[tuple(cols)]

    cols = [tuples[:, j] for j in range(n)]
    out = look(cols[1:])
    for i in range(n - 1):
        merged = cols[:i] + [mul[cols[i], cols[i + 1]]] + cols[i + 2:]
        out ^= look(merged)
    out ^= M.act_batch(look(cols[:-1]), M.elements[cols[-1]])
    return out


def _all_tuples(m: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((m,) * n).reshape(n, -1).T


def differential(lam: Cochain) -> Cochain:
    n = lam.n + 1
    m = lam.module.order
    out = _differential_at(lam, _all_tuples(m, n))
    return Cochain(lam.module, n, out.reshape((m,) * n + (lam.module.dim,)))


# ---------------------------------------------------------------------------
# cocycle predicate

@dataclass
class CocycleCheck:
    ok: bool
    mode: str
    checked: int
    violations: list[tuple[int, ...]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "mode": self.mode, "checked": self.checked,
                "violations": [list(v) for v in self.violations]}


def is_cocycle(lam, mode: str = "exhaustive", samples: int = 10_000, seed: int = 0,
               batch: int = DEFAULT_BATCH, max_violations: int = 10) -> CocycleCheck:
    """Check d(lam) = 0 on every tuple or on ``samples`` random tuples.

    Tuples are drawn from non-identity elements with a seeded generator.
    Pointwise (lazy) cochains are checked at random (tuple, g) points.
    """
    if isinstance(lam, PointwiseCochain):
        if mode != "sampled":
            raise CapacityExceeded("pointwise cochains can only be checked in sampled mode")
        return _pointwise_check(lam, samples, seed, max_violations)
    M = lam.module
    m = M.order
    n = lam.n + 1
    violations: list[tuple[int, ...]] = []
    checked = 0

    def run(tuples):
        nonlocal checked
        bad = _differential_at(lam, tuples).any(axis=1)
        checked += len(tuples)
        for row in tuples[bad][: max_violations - len(violations)]:
            violations.append(tuple(int(M.elements[p]) for p in row))
        return bool(bad.any())

    failed = False
    if mode == "exhaustive":
        total = m ** n
        for start in range(0, total, batch):
            idx = np.arange(start, min(total, start + batch))
            tuples = np.stack(np.unravel_index(idx, (m,) * n), axis=1) if n else \
                np.zeros((len(idx), 0), dtype=np.int64)
            failed |= run(tuples)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        left = samples
        while left > 0:
            k = min(batch, left)
            failed |= run(rng.integers(1, m, size=(k, n)) if m > 1 else
                          np.zeros((k, n), dtype=np.int64))
            left -= k
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CocycleCheck(not failed, mode, checked, violations)


# ---------------------------------------------------------------------------
# pointwise cochains with coinduced values

class PointwiseCochain:
    """A W-valued cochain known through its point values lam(g_1..g_n)(g).

    Used where |G|^n * dim is too large to materialise.
    """

    def __init__(self, module: CoinducedModule, n: int,
                 point: Callable[[Sequence[int], int], F2Vector]):
        self.module = module
        self.n = n
        self.point = point

    def __call__(self, *gs: int) -> F2Vector:
        if len(gs) != self.n:
            raise DimensionError(f"degree-{self.n} cochain called with {len(gs)} arguments")
        W = self.module
        du = W.base.dim
        bits = 0
        for c, y in enumerate(W.transversal.reps):
            # h_part(y) = 1, so the stored block is the value at y itself
            bits |= self.point(gs, y).bits << (c * du)
        return F2Vector(W.dim, bits)

    def __repr__(self) -> str:
        return f"<PointwiseCochain degree={self.n} dim={self.module.dim}>"


def _pointwise_check(lam: PointwiseCochain, samples: int, seed: int,
                     max_violations: int) -> CocycleCheck:
    W = lam.module
    G = W.parent
    rng = np.random.default_rng(seed)
    n = lam.n + 1
    violations = []
    for _ in range(samples):
        gs = [int(x) for x in rng.integers(1, G.order, size=n)]
        g = int(rng.integers(0, G.order))
        acc = lam.point(gs[1:], g)
        for i in range(n - 1):
            merged = gs[:i] + [G.mul(gs[i], gs[i + 1])] + gs[i + 2:]
            acc = acc + lam.point(merged, g)
        # (f a)(g) = f(a g)
        acc = acc + lam.point(gs[:-1], G.mul(gs[-1], g))
        if acc and len(violations) < max_violations:
            violations.append(tuple(gs) + (g,))
    return CocycleCheck(not violations, "sampled-pointwise", samples, violations)


# ---------------------------------------------------------------------------
# coboundaries

def coboundary_witness(lam: Cochain, max_unknowns: int = MAX_UNKNOWNS) -> Cochain | None:
    """A degree-1 mu with d(mu) = lam, or None if lam is not a coboundary.

    Only degree 2 is supported; the unknowns are the values of mu on the
    non-identity elements.
    """
    if not isinstance(lam, Cochain):
        raise CapacityExceeded("coboundary_witness needs a materialised cochain")
    if lam.n != 2:
        raise CapacityExceeded(f"coboundary solver handles degree 2 only, got {lam.n}")
    M = lam.module
    m, dim = M.order, M.dim
    n_unknowns = (m - 1) * dim
    n_eq = m * m * dim
    if n_unknowns > max_unknowns or n_unknowns * n_eq > MAX_SYSTEM_ENTRIES:
        raise CapacityExceeded(
            f"system with {n_unknowns} unknowns and {n_eq} equations exceeds capacity "
            f"({max_unknowns} unknowns, {MAX_SYSTEM_ENTRIES} entries)")
    A = np.zeros((n_eq, n_unknowns), dtype=np.uint8)
    tuples = _all_tuples(m, 2)
    col = 0
    for p in range(1, m):
        for j in range(dim):
            basis = np.zeros((m, dim), dtype=np.uint8)
            basis[p, j] = 1
            mu = Cochain(M, 1, basis)
            A[:, col] = _differential_at(mu, tuples).ravel()
            col += 1
    x = solve(F2Matrix.from_array(A), F2Vector(n_eq, pack(lam.values.ravel())))
    if x is None:
        return None
    vals = np.zeros((m, dim), dtype=np.uint8)
    vals[1:] = unpack(x.bits, n_unknowns).reshape(m - 1, dim)
    mu = Cochain(M, 1, vals)
    if differential(mu) != lam:
        raise AssertionError("solver returned a witness that does not reproduce lam")
    return mu


def is_coboundary(lam: Cochain, **kw) -> bool:
    return coboundary_witness(lam, **kw) is not None


def cochain_basis(module: GModule, n: int) -> Iterable[Cochain]:
    """Unit cochains: one nonzero coordinate at one non-identity tuple."""
    m = module.order
    for pos in np.ndindex(*(m,) * n):
        if 0 in pos:
            continue
        for j in range(module.dim):
            vals = np.zeros((m,) * n + (module.dim,), dtype=np.uint8)
            vals[pos + (j,)] = 1
            yield Cochain(module, n, vals)
