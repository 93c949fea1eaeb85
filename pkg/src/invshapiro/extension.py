"""Covers E of G by the coinduced module T, built from a 2-cocycle.

E is the set G x T with (g1, f1)(g2, f2) = (g1 g2, f1 g2 + f2 + alpha(g1, g2)).
An element (g, f) with g != 1 squares to the identity exactly when g is an
involution and f g + f = alpha(g, g), so involutions outside T are decided
one linear equation per involution class of G.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .cochain import Cochain, coboundary_witness, is_cocycle
from .errors import BadSubgroupOrder, CapacityExceeded
from .f2 import F2Matrix, F2Vector, pack, rank, solve_certified, unpack
from .gmodule import CoinducedModule, GModule, trivial_module
from .groups import FiniteGroup, Subgroup, Transversal, involution_classes, left_transversal
from .shapiro import MATERIALIZE_CUTOFF, theta_inverse

log = logging.getLogger(__name__)

ENUMERATE_MAX_DIM = 16
SOLVER_MAX_DIM = 4096
# permutation-module systems have two entries per row
SPARSE_SOLVER_MAX_DIM = 1 << 15
# |E| up to this size is enumerated element by element
FULL_ENUMERATION_MAX = 1 << 20
EXHAUSTIVE_COCYCLE_MAX_ORDER = 60
# beyond this t_dim the orders 2^t_dim are reported as strings
INT_REPORT_MAX_DIM = 64

METHODS = ("enumerate", "solver", "orbit")


def beta_z4(H: Subgroup, U: GModule | None = None) -> Cochain:
    """The 2-cocycle of H = {1, h} that is u at (h, h) and 0 elsewhere."""
    if H.order != 2:
        raise BadSubgroupOrder(f"H must have order 2, got {H.order}")
    if U is None:
        U = trivial_module(H)
    if U.kind != "trivial" or U.dim != 1:
        raise ValueError("beta_z4 needs the one-dimensional trivial module")
    h = H.members[1]
    return Cochain.from_values(U, 2, {(h, h): F2Vector(1, 1)})


def alpha_values(beta: Cochain, T: Transversal, g1: int, g2: int) -> np.ndarray:
    """theta_inverse(beta)(g1, g2) as a (index, dim U) array of values at the
    representatives, computed without building the cochain."""
    G = T.group
    U = beta.module
    ys = np.array(T.reps, dtype=np.int64)
    s2 = G.mul_many(g2, ys)
    s1 = G.mul_many(g1, s2)
    p1, p2, p3 = T.h_part[s1], T.h_part[s2], T.h_part[ys]
    h1 = G.mul_many(p1, G.inv[p2])
    h2 = G.mul_many(p2, G.inv[p3])
    vals = beta.values[U.positions[h1], U.positions[h2]]
    return U.act_batch(vals, p3)


# ---------------------------------------------------------------------------
# the group E

@dataclass(frozen=True)
class ExtElement:
    g: int
    f: F2Vector


def ext_identity(alpha) -> ExtElement:
    return ExtElement(0, F2Vector.zero(alpha.module.dim))


def ext_multiply(a: ExtElement, b: ExtElement, alpha) -> ExtElement:
    W = alpha.module
    return ExtElement(W.parent.mul(a.g, b.g), W.act(a.f, b.g) + b.f + alpha(a.g, b.g))


def ext_square(a: ExtElement, alpha) -> ExtElement:
    return ext_multiply(a, a, alpha)


def ext_inverse(a: ExtElement, alpha) -> ExtElement:
    """(g, f)^-1 = (g^-1, f') with f g^-1 + f' + alpha(g, g^-1) = 0."""
    W = alpha.module
    gi = int(W.parent.inv[a.g])
    return ExtElement(gi, W.act(a.f, gi) + alpha(a.g, gi))


def ext_order(a: ExtElement, alpha, limit: int = 1 << 16) -> int:
    one = ext_identity(alpha)
    x, k = a, 1
    while x != one:
        x = ext_multiply(x, a, alpha)
        k += 1
        if k > limit:
            raise CapacityExceeded(f"element order exceeds {limit}")
    return k


def enumerate_involutions(alpha: Cochain) -> dict:
    """Count involutions of E by squaring every element.

    Returns counts inside T (g = 1) and above each involution of G.
    """
    W = alpha.module
    G = W.parent
    k = W.dim
    size = G.order << k
    if k > ENUMERATE_MAX_DIM or size > FULL_ENUMERATION_MAX:
        raise CapacityExceeded(f"|E| = {G.order} * 2^{k} is beyond full enumeration")
    fs = ((np.arange(1 << k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    inside = 0
    above: dict[int, int] = {}
    for g in range(G.order):
        # (g, f)^2 = (g^2, f g + f + alpha(g, g))
        if G.mul(g, g) != 0:
            continue
        sq = W.act_array(fs, g) ^ fs ^ alpha.value_array((g, g))
        n_id = int((~sq.any(axis=1)).sum())
        if g == 0:
            inside = n_id - 1
        else:
            above[g] = n_id
    return {"order": size, "inside_t": inside, "above": above,
            "outside_t": sum(above.values())}


# ---------------------------------------------------------------------------
# per-class certificates

@dataclass
class ClassCertificate:
    rep: int
    rep_cycles: str
    class_size: int
    method: str
    solvable: bool
    blocker: dict | None
    # number of f with f g + f = alpha(g, g), as log2 (None if unsolvable)
    log2_solutions: int | None
    cross_checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _diag_array(alpha, beta: Cochain | None, T: Transversal, g: int) -> np.ndarray:
    """alpha(g, g) as a flat W-coordinate array."""
    if alpha is None:
        return alpha_values(beta, T, g, g).ravel()
    if isinstance(alpha, Cochain):
        return np.array(alpha.value_array((g, g)))
    v = alpha(g, g)
    return unpack(v.bits, v.dim)


def _orbit_certificate(W: CoinducedModule, g: int, a: np.ndarray):
    if not W.is_permutation_module:
        raise ValueError("the orbit criterion needs the permutation module")
    cp = W.coset_permutation(g)
    idx = np.arange(W.index)
    if np.any(cp[cp] != idx):
        raise ValueError("element does not act as an involution on cosets")
    fixed = cp == idx
    bad_fixed = np.flatnonzero(fixed & (a != 0))
    bad_pair = np.flatnonzero(~fixed & (a != a[cp]))
    first = min([int(x[0]) for x in (bad_fixed, bad_pair) if len(x)], default=None)
    n_orbits = int(fixed.sum()) + int((~fixed).sum()) // 2
    if first is None:
        return True, None, n_orbits
    if fixed[first]:
        return False, {"kind": "fixed_coset", "coset": first, "value": int(a[first])}, None
    return False, {"kind": "unequal_pair", "cosets": [first, int(cp[first])],
                   "values": [int(a[first]), int(a[cp[first]])]}, None


def _system(W: CoinducedModule, g: int) -> F2Matrix:
    """Matrix A with A f = f g + f (column convention)."""
    if W.is_permutation_module:
        cp = W.coset_permutation(g)
        rows = tuple((1 << c) ^ (1 << int(cp[c])) for c in range(W.index))
        return F2Matrix(W.dim, W.dim, rows)
    M = W.dense_matrix(g) ^ np.eye(W.dim, dtype=np.uint8)
    return F2Matrix.from_array(M.T)


def _solver_certificate(W: CoinducedModule, g: int, a: np.ndarray):
    cap = SPARSE_SOLVER_MAX_DIM if W.is_permutation_module else SOLVER_MAX_DIM
    if W.dim > cap:
        raise CapacityExceeded(f"solver capacity is {cap} unknowns, got {W.dim}")
    A = _system(W, g)
    x, y = solve_certified(A, F2Vector(W.dim, pack(a)))
    if x is not None:
        return True, None, W.dim - rank(A)
    # y A = 0 and y . a = 1: these equations add up to 0 = 1
    return False, {"kind": "dual_certificate", "equations": y.support()}, None


def _enumerate_certificate(W: CoinducedModule, g: int, a: np.ndarray):
    if W.dim > ENUMERATE_MAX_DIM:
        raise CapacityExceeded(f"enumeration capacity is 2^{ENUMERATE_MAX_DIM}, got 2^{W.dim}")
    fs = ((np.arange(1 << W.dim)[:, None] >> np.arange(W.dim)) & 1).astype(np.uint8)
    ok = ~((W.act_array(fs, g) ^ fs ^ a).any(axis=1))
    count = int(ok.sum())
    if count == 0:
        return False, {"kind": "exhausted", "tried": 1 << W.dim}, None
    return True, None, count.bit_length() - 1


_RUNNERS = {"enumerate": _enumerate_certificate, "solver": _solver_certificate,
            "orbit": _orbit_certificate}


def certify_class(W: CoinducedModule, g: int, a: np.ndarray, method: str) -> tuple:
    if method not in _RUNNERS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return _RUNNERS[method](W, g, a)


def _class_reps(G: FiniteGroup, classes: list[list[int]], h: int | None) -> list[int]:
    return [h if (h is not None and h in cls) else cls[0] for cls in classes]


def involutions_outside_T(G: FiniteGroup, H: Subgroup, T: Transversal, method: str = "orbit",
                          alpha=None, beta: Cochain | None = None,
                          cross_check: Sequence[str] = (), classes=None,
                          threads: int = 1) -> list[ClassCertificate]:
    """One certificate per involution class of G: is f g + f = alpha(g, g)
    solvable for the class representative g?

    ``alpha`` may be a materialised or pointwise cochain; by default it is
    theta_inverse(beta_z4(H)) evaluated on the diagonal only. Methods named
    in ``cross_check`` are run as well and must agree.
    """
    if beta is None:
        beta = beta_z4(H)
    W = alpha.module if alpha is not None else CoinducedModule(T, beta.module)
    if classes is None:
        classes = involution_classes(G)
    h = H.members[1] if H.order == 2 else None
    reps = _class_reps(G, classes, h)

    def one(i: int) -> ClassCertificate:
        g = reps[i]
        a = _diag_array(alpha, beta, T, g)
        solvable, blocker, log2 = certify_class(W, g, a, method)
        checks = {}
        for other in cross_check:
            if other == method:
                continue
            try:
                s2, _, l2 = certify_class(W, g, a, other)
                checks[other] = {"solvable": s2, "agrees": s2 == solvable and l2 == log2}
            except CapacityExceeded as exc:
                checks[other] = {"skipped": str(exc)}
        return ClassCertificate(g, G.cycles(g), len(classes[i]), method, solvable,
                                blocker, log2, checks)

    if threads > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(len(reps))))
    return [one(i) for i in range(len(reps))]


# ---------------------------------------------------------------------------
# the report

@dataclass
class CoverReport:
    group: str
    order: int
    index: int
    t_dim: int
    e_order: int | str
    involutions_in_t: int | str
    involutions_outside_t: int | str
    classes: list[dict]
    nonsplit: bool | None
    nonsplit_basis: str
    seed: int
    hypothesis: str
    method: str
    subgroup_involution: int
    transversal: str
    cocycle_check: dict
    enumeration: dict | None
    checks_passed: bool
    timings_ms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def ok(self) -> bool:
        return self.checks_passed and self.involutions_outside_t == 0


def _pow2_expr(k: int, times: int = 1, minus: int = 0):
    if k <= INT_REPORT_MAX_DIM:
        return (times << k) - minus
    s = f"2^{k}" if times == 1 else f"{times}*2^{k}"
    return s + (f" - {minus}" if minus else "")


def certify_cover(G: FiniteGroup, h: int | None = None, transversal: str = "identity-first",
                  method: str = "orbit", seed: int = 0, samples: int = 10_000,
                  exhaustive_max_order: int = EXHAUSTIVE_COCYCLE_MAX_ORDER,
                  cutoff: int = MATERIALIZE_CUTOFF, threads: int | None = None,
                  cross_check: Sequence[str] = ("solver", "enumerate")) -> CoverReport:
    """Build Y, T, beta and alpha for H = <h> and certify where the
    involutions of E lie."""
    clock: dict[str, float] = {}
    t0 = time.perf_counter()

    def lap(name):
        nonlocal t0
        now = time.perf_counter()
        clock[name] = round((now - t0) * 1000, 3)
        t0 = now

    threads = threads or os.cpu_count() or 1
    classes = involution_classes(G)
    if not classes:
        raise ValueError("G has no involutions")
    if h is None:
        h = int(G.involutions[0])
    if not G.is_involution(h):
        raise ValueError(f"element {h} is not an involution")
    hypothesis = "unique involution class" if len(classes) == 1 else \
        "outside hypothesis: several involution classes, each certified separately"
    if len(classes) > 1:
        log.warning("%s has %d involution classes; certifying each", G.name, len(classes))
    H = Subgroup.generated(G, [h])
    if transversal == "identity-first":
        T = left_transversal(G, H)
    elif transversal == "nontrivial-y0":
        T = left_transversal(G, H, y0=h)
    else:
        raise ValueError(f"unknown transversal mode {transversal!r}")
    beta = beta_z4(H)
    W = CoinducedModule(T, beta.module)
    lap("setup")

    alpha = theta_inverse(beta, T, module=W, cutoff=cutoff)
    if isinstance(alpha, Cochain) and G.order <= exhaustive_max_order:
        cc = is_cocycle(alpha, mode="exhaustive")
    else:
        cc = is_cocycle(alpha, mode="sampled", samples=samples, seed=seed)
    lap("cocycle")

    certs = involutions_outside_T(G, H, T, method=method, alpha=None, beta=beta,
                                  cross_check=cross_check, classes=classes, threads=threads)
    # the diagonal shortcut must match the cochain it stands for
    diag_ok = True
    for c in certs:
        full = alpha(c.rep, c.rep)
        diag_ok &= full.bits == pack(alpha_values(beta, T, c.rep, c.rep).ravel())
    lap("classes")

    k = T.index
    enumeration = None
    if isinstance(alpha, Cochain) and k <= ENUMERATE_MAX_DIM and (G.order << k) <= FULL_ENUMERATION_MAX:
        e = enumerate_involutions(alpha)
        enumeration = {"order": e["order"], "inside_t": e["inside_t"],
                       "outside_t": e["outside_t"]}
    lap("enumeration")

    outside = sum(c.class_size << c.log2_solutions for c in certs if c.solvable)
    solvable_any = any(c.solvable for c in certs)
    nonsplit: bool | None
    try:
        if not isinstance(alpha, Cochain):
            raise CapacityExceeded("alpha is not materialised")
        nonsplit = coboundary_witness(alpha) is None
        basis = "coboundary solver: no 1-cochain mu with d(mu) = alpha"
    except CapacityExceeded as exc:
        if not solvable_any:
            nonsplit = True
            basis = ("implied by involution certificate: a split extension has a complement "
                     "isomorphic to G, which would contain involutions outside T "
                     f"(solver skipped: {exc})")
        else:
            nonsplit = None
            basis = f"undetermined (solver skipped: {exc})"
    lap("nonsplit")

    agree = all(v.get("agrees", True) for c in certs for v in c.cross_checks.values())
    enum_ok = enumeration is None or (enumeration["outside_t"] == outside
                                      and enumeration["inside_t"] == (1 << k) - 1)
    passed = bool(cc.ok and agree and diag_ok and enum_ok)
    return CoverReport(
        group=G.name or "G", order=G.order, index=k, t_dim=k,
        e_order=_pow2_expr(k, G.order), involutions_in_t=_pow2_expr(k, 1, 1),
        involutions_outside_t=outside, classes=[c.to_dict() for c in certs],
        nonsplit=nonsplit, nonsplit_basis=basis, seed=seed, hypothesis=hypothesis,
        method=method, subgroup_involution=h, transversal=transversal,
        cocycle_check=cc.to_dict(), enumeration=enumeration, checks_passed=passed,
        timings_ms=clock)


__all__ = ["ExtElement", "ClassCertificate", "CoverReport", "METHODS", "beta_z4",
           "alpha_values", "ext_identity", "ext_multiply", "ext_square", "ext_inverse",
           "ext_order", "enumerate_involutions", "certify_class", "involutions_outside_T",
           "certify_cover"]
