"""The Shapiro maps between cocycles of G with coinduced coefficients and
cocycles of H.

theta restricts a W-valued cochain to H and evaluates at 1. theta_inverse
sends beta to (g_1..g_n) -> [g_{n+1} -> beta(h_1..h_n) h_{n+1}] where
h_i ... h_{n+1} = pi(g_i ... g_{n+1}). A W-valued n-cochain is the curried
form of a U-valued function of n+1 arguments; both views are used here.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .cochain import Cochain, PointwiseCochain, coboundary_witness
from .errors import CapacityExceeded, DegreeUnsupported
from .f2 import F2Vector
from .gmodule import CoinducedModule, GModule
from .groups import Subgroup, Transversal
from .resolution import h_chain

MAX_DEGREE = 3
# above this order theta_inverse returns a pointwise cochain
MATERIALIZE_CUTOFF = 1000
_CHUNK = 2_000_000


def _check_base(beta: Cochain, T: Transversal) -> GModule:
    U = beta.module
    if set(int(e) for e in U.elements) != set(T.subgroup.members) or U.parent is not T.group:
        raise ValueError("beta must be a cochain of the subgroup of the transversal")
    return U


def theta(alpha: Cochain, H: Subgroup | None = None) -> Cochain:
    """(h_1..h_n) -> alpha(h_1..h_n)(1)."""
    W = alpha.module
    if not isinstance(W, CoinducedModule):
        raise TypeError("theta needs a cochain with coinduced coefficients")
    if H is not None and H != W.transversal.subgroup:
        raise ValueError("H differs from the subgroup W is coinduced from")
    U = W.base
    n = alpha.n
    hpos = W.positions[U.elements]
    vals = alpha.values[np.ix_(*([hpos] * n))] if n else alpha.values
    return Cochain(U, n, W.evaluate_array(vals, 0))


def theta_inverse_point(beta: Cochain, T: Transversal, gs: Sequence[int], g: int) -> F2Vector:
    """theta_inverse(beta)(g_1..g_n) evaluated at g, through h_chain."""
    hs = h_chain(list(gs) + [g], T)
    return beta.module.act(beta(*hs[:-1]), hs[-1])


def alpha_explicit(beta: Cochain, T: Transversal, g1: int, g2: int, g: int) -> F2Vector:
    """alpha(g1, g2)(g) = beta(pi(g1 g2 g) pi(g2 g)^-1, pi(g2 g) pi(g)^-1) pi(g).

    Written out directly from pi rather than through h_chain; the trailing
    action by pi(g) is trivial for a trivial U.
    """
    G = T.group
    pi = T.pi
    a = pi(G.mul(G.mul(g1, g2), g))
    b = pi(G.mul(g2, g))
    c = pi(g)
    h1 = G.mul(a, int(G.inv[b]))
    h2 = G.mul(b, int(G.inv[c]))
    return beta.module.act(beta(h1, h2), c)


def theta_inverse(beta: Cochain, T: Transversal, module: CoinducedModule | None = None,
                  cutoff: int = MATERIALIZE_CUTOFF) -> Cochain | PointwiseCochain:
    """The cocycle-level inverse Shapiro map.

    Materialised for |G| <= cutoff, otherwise returned as a pointwise
    cochain evaluated on demand.
    """
    n = beta.n
    if n > MAX_DEGREE:
        raise DegreeUnsupported(f"theta_inverse is implemented for degree <= {MAX_DEGREE}")
    U = _check_base(beta, T)
    W = module if module is not None else CoinducedModule(T, U)
    if W.transversal is not T or W.base is not U:
        raise ValueError("module must be coinduced from beta's module along T")
    G = T.group
    if G.order > cutoff:
        return PointwiseCochain(W, n, lambda gs, g: theta_inverse_point(beta, T, gs, g))
    N, k, du = G.order, T.index, U.dim
    ys = np.array(T.reps, dtype=np.int64)
    total = N ** n
    out = np.zeros((total, k, du), dtype=np.uint8)
    step = max(1, _CHUNK // max(1, k))
    upos = U.positions
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step))
        cols = np.unravel_index(idx, (N,) * n) if n else ()
        # suffix products s_i = g_i ... g_n y, right to left
        s = np.broadcast_to(ys, (len(idx), k))
        p_next = T.h_part[s]
        h_last = p_next
        hs = []
        for i in range(n - 1, -1, -1):
            s = G.mul_many(cols[i][:, None], s)
            p = T.h_part[s]
            hs.append(G.mul_many(p, G.inv[p_next]))
            p_next = p
        hs.reverse()
        if n:
            vals = beta.values[tuple(upos[h] for h in hs)]
        else:
            vals = np.broadcast_to(beta.values, (len(idx), k, du))
        vals = U.act_batch(vals.reshape(-1, du), h_last.ravel()).reshape(len(idx), k, du)
        out[start:start + len(idx)] = vals
    # Cochain() rejects values on tuples containing 1, so normalisation is checked
    return Cochain(W, n, out.reshape((N,) * n + (k * du,)))


def transport(alpha: Cochain, target: CoinducedModule) -> Cochain:
    """Re-express a W-valued cochain in the coordinates of another
    transversal (same G, H and U)."""
    W = alpha.module
    if W.base is not target.base:
        raise ValueError("modules are coinduced from different bases")
    Ts, Tt = W.transversal, target.transversal
    du = W.base.dim
    blocks = alpha.values.reshape(alpha.values.shape[:-1] + (Ts.index, du))
    out = np.empty_like(blocks)
    for c, y in enumerate(Tt.reps):
        vals = blocks[..., int(Ts.coset_of[y]), :]
        out[..., c, :] = W.base.act_array(vals, int(Ts.h_part[y]))
    return Cochain(target, alpha.n, out.reshape(alpha.values.shape))


def compare_transversals(beta: Cochain, T1: Transversal, T2: Transversal) -> dict:
    """Whether theta_inverse(beta) depends on the transversal, and whether
    the two results differ by a coboundary (degree 2 only)."""
    a1 = theta_inverse(beta, T1)
    a2 = theta_inverse(beta, T2)
    if not isinstance(a1, Cochain) or not isinstance(a2, Cochain):
        raise CapacityExceeded("comparison needs materialised cochains")
    diff = a1 + transport(a2, a1.module)
    out = {"reps_1": list(T1.reps), "reps_2": list(T2.reps),
           "cocycles_differ": not diff.is_zero(), "difference_is_coboundary": None}
    if beta.n == 2:
        out["difference_is_coboundary"] = coboundary_witness(diff) is not None
    return out


def w_value_from_points(W: CoinducedModule, points: Sequence[F2Vector]) -> F2Vector:
    """Pack per-coset U-values (values at the representatives) into W."""
    du = W.base.dim
    bits = 0
    for c, v in enumerate(points):
        bits |= v.bits << (c * du)
    return F2Vector(W.dim, bits)


__all__ = ["theta", "theta_inverse", "theta_inverse_point", "alpha_explicit",
           "transport", "compare_transversals", "w_value_from_points"]
