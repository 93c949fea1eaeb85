"""Formal chains in the normalised inhomogeneous resolution.

A basis key ``(gs, t)`` stands for the generator (g_1,...,g_n) times the
trailing group element t. Keys with some g_i = 1 are zero and never stored.
Maps act on the right of chains, but are written here as ordinary
functions: ``boundary(eta(x))`` is the composite "eta then d".
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import DimensionError, EntryNotInH
from .groups import FiniteGroup, Transversal

Key = tuple[tuple[int, ...], int]

MAX_VERIFY_DIM = 3


@dataclass(frozen=True)
class FormalChain:
    n: int
    terms: Mapping[Key, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (gs, t), c in self.terms.items():
            if len(gs) != self.n:
                raise DimensionError(f"key {gs} in a {self.n}-chain")
            if c and 0 not in gs:
                clean[(tuple(gs), t)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def generator(cls, gs: Iterable[int], t: int = 0, coeff: int = 1) -> FormalChain:
        gs = tuple(gs)
        return cls(len(gs), {(gs, t): coeff})

    @classmethod
    def zero(cls, n: int) -> FormalChain:
        return cls(n, {})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalChain):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: FormalChain) -> FormalChain:
        if self.n != other.n:
            raise DimensionError(f"adding chains of dims {self.n} and {other.n}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return FormalChain(self.n, out)

    def __neg__(self) -> FormalChain:
        return FormalChain(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: FormalChain) -> FormalChain:
        return self + (-other)

    def __rmul__(self, k: int) -> FormalChain:
        return FormalChain(self.n, {key: k * c for key, c in self.terms.items()})

    def items(self):
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return f"0_{self.n}"
        parts = []
        for (gs, t), c in self.items():
            parts.append(f"{c:+d}*{gs}.{t}")
        return " ".join(parts)


class _Acc:
    """Coefficient accumulator that drops degenerate keys."""

    def __init__(self, n: int):
        self.n = n
        self.terms: dict[Key, int] = {}

    def add(self, gs: tuple[int, ...], t: int, c: int) -> None:
        if c == 0 or 0 in gs:
            return
        key = (gs, t)
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            del self.terms[key]

    def chain(self) -> FormalChain:
        return FormalChain(self.n, self.terms)


def act_chain(c: FormalChain, g: int, G: FiniteGroup) -> FormalChain:
    """Right multiplication c * g (acts on trailing elements)."""
    return FormalChain(c.n, {(gs, G.mul(t, g)): v for (gs, t), v in c.terms.items()})


def boundary(c: FormalChain, G: FiniteGroup) -> FormalChain:
    n = c.n
    if n < 1:
        raise DimensionError("boundary needs n >= 1; use augmentation in dimension 0")
    acc = _Acc(n - 1)
    for (gs, t), v in c.terms.items():
        sign0 = -1 if n % 2 else 1
        acc.add(gs[1:], t, sign0 * v)
        for i in range(n - 1):
            # 1-based index i+1: sign (-1)^(n-i-1)
            s = -1 if (n - i - 1) % 2 else 1
            merged = gs[:i] + (G.mul(gs[i], gs[i + 1]),) + gs[i + 2:]
            acc.add(merged, t, s * v)
        acc.add(gs[:-1], G.mul(gs[-1], t), v)
    return acc.chain()


def augmentation(c: FormalChain) -> int:
    if c.n != 0:
        raise DimensionError("augmentation is defined on 0-chains")
    return sum(c.terms.values())


# ---------------------------------------------------------------------------
# the transversal data h_i, r_i

def suffix_products(gs: Iterable[int], G: FiniteGroup) -> list[int]:
    """s_i = g_i g_{i+1} ... g_{n+1}, right to left in one pass."""
    gs = list(gs)
    out = [0] * len(gs)
    acc = 0
    for i in range(len(gs) - 1, -1, -1):
        acc = G.mul(gs[i], acc)
        out[i] = acc
    return out


def h_chain(gs: Iterable[int], T: Transversal) -> list[int]:
    """h_1..h_{n+1} in H with h_i ... h_{n+1} = pi(g_i ... g_{n+1})."""
    G = T.group
    s = suffix_products(gs, G)
    p = [T.pi(x) for x in s]
    hs = [G.mul(p[i], int(G.inv[p[i + 1]])) for i in range(len(p) - 1)]
    hs.append(p[-1])
    return hs


def r_chain(gs: Iterable[int], T: Transversal) -> list[int]:
    """r_i = rho(g_i ... g_{n+1})."""
    return [T.rho(x) for x in suffix_products(gs, T.group)]


def chain_map_f(c: FormalChain, T: Transversal) -> FormalChain:
    acc = _Acc(c.n)
    for (gs, t), v in c.terms.items():
        hs = h_chain(gs + (t,), T)
        acc.add(tuple(hs[:-1]), hs[-1], v)
    return acc.chain()


def _check_in_h(c: FormalChain, T: Transversal) -> None:
    H = T.subgroup
    for gs, t in c.terms:
        if t not in H or any(g not in H for g in gs):
            raise EntryNotInH(f"key {(gs, t)} has entries outside H")


def inclusion_fprime(c: FormalChain, T: Transversal) -> FormalChain:
    _check_in_h(c, T)
    return c


def homotopy_eta_prime(c: FormalChain, T: Transversal) -> FormalChain:
    _check_in_h(c, T)
    G = T.group
    y0 = T.y0
    y0inv = int(G.inv[y0])

    def conj(h):
        return G.mul(G.mul(y0inv, h), y0)

    n = c.n
    acc = _Acc(n + 1)
    for (hs, t), v in c.terms.items():
        for i in range(n + 1):
            s = -1 if (n - i) % 2 else 1
            key = tuple(conj(h) for h in hs[:i]) + (y0inv,) + hs[i:]
            acc.add(key, t, s * v)
    return acc.chain()


def homotopy_eta(c: FormalChain, T: Transversal) -> FormalChain:
    n = c.n
    acc = _Acc(n + 1)
    for (gs, t), v in c.terms.items():
        full = gs + (t,)
        hs = h_chain(full, T)
        rs = r_chain(full, T)
        for i in range(1, n + 2):
            s = -1 if (n + 1 - i) % 2 else 1
            key = tuple(hs[:i - 1]) + (rs[i - 1],) + gs[i - 1:]
            acc.add(key, t, s * v)
    return acc.chain()


# ---------------------------------------------------------------------------
# verification

def all_keys(G: FiniteGroup, n: int, entries: Iterable[int] | None = None,
             trailing: Iterable[int] | None = None) -> Iterator[Key]:
    """Every nondegenerate key of dimension n, in lexicographic order."""
    entries = [g for g in (entries if entries is not None else range(G.order)) if g != 0]
    trailing = list(trailing if trailing is not None else range(G.order))
    for gs in itertools.product(entries, repeat=n):
        for t in trailing:
            yield gs, t


def random_keys(G: FiniteGroup, n: int, count: int, seed: int = 0) -> list[Key]:
    rng = random.Random(seed)
    return [(tuple(rng.randrange(1, G.order) for _ in range(n)), rng.randrange(G.order))
            for _ in range(count)]


@dataclass
class IdentityReport:
    identity: str
    n: int
    tested: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"identity": self.identity, "dimension": self.n,
                "generators_tested": self.tested, "failures": self.failures,
                "passed": self.passed}


def _both_sides(x: FormalChain, T: Transversal, eta) -> tuple[FormalChain, FormalChain]:
    G = T.group
    lhs = chain_map_f(x, T) - x
    rhs = boundary(eta(x, T), G)
    if x.n >= 1:
        rhs = rhs + eta(boundary(x, G), T)
    return lhs, rhs


def verify_homotopy_identities(n: int, sample: Iterable[Key], T: Transversal,
                               max_failures: int = 20) -> dict[str, IdentityReport]:
    """Check psi = eta d + d eta on F-generators and psi' = eta' d' + d' eta'
    on the S-generators (entries in H) among ``sample``.

    psi = f f' - id and psi' = f' f - id; in dimension 0 the second summand
    is eta_{-1} epsilon = 0.
    """
    if not 0 <= n <= MAX_VERIFY_DIM:
        raise DimensionError(f"homotopy identities are verified for 0 <= n <= {MAX_VERIFY_DIM}")
    H = T.subgroup
    reports = {"eta": IdentityReport("eta", n), "etap": IdentityReport("etap", n)}
    for gs, t in sample:
        if len(gs) != n:
            raise DimensionError(f"key {gs} in a dimension-{n} sample")
        x = FormalChain.generator(gs, t)
        if not x:
            continue
        checks = [("eta", homotopy_eta)]
        if t in H and all(g in H for g in gs):
            checks.append(("etap", homotopy_eta_prime))
        for name, eta in checks:
            rep = reports[name]
            rep.tested += 1
            lhs, rhs = _both_sides(x, T, eta)
            if lhs != rhs and len(rep.failures) < max_failures:
                rep.failures.append({"generator": [list(gs), t],
                                     "lhs": repr(lhs), "rhs": repr(rhs)})
    return reports
