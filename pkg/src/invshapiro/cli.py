"""Command-line entry point: ``invshapiro {verify,selftest,shapiro}``.

Each command writes one JSON report (``--out``) and a short human summary.
Exit codes: 0 success, 1 a check failed, 2 bad input or capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from .cochain import Cochain, differential, is_cocycle
from .errors import InvShapiroError
from .extension import beta_z4, certify_cover
from .gmodule import CoinducedModule, trivial_module
from .groups import (FiniteGroup, Subgroup, close_generators, left_transversal, named_group,
                     read_group_file)
from .resolution import (FormalChain, all_keys, boundary, chain_map_f, random_keys,
                         verify_homotopy_identities)
from .shapiro import alpha_explicit, compare_transversals, theta, theta_inverse

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
EXHAUSTIVE_MAX_ORDER = 60


@dataclass
class RunConfig:
    command: str
    group: str | None
    group_file: str | None
    subgroup_involution: int | None
    seed: int
    samples: int
    dims: int
    transversal: str
    method: str
    out: str | None
    threads: int

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        return cls(command=ns.command, group=ns.group, group_file=ns.group_file,
                   subgroup_involution=ns.subgroup_involution, seed=ns.seed,
                   samples=ns.samples, dims=ns.dims, transversal=ns.transversal,
                   method=ns.method, out=ns.out, threads=ns.threads or os.cpu_count() or 1)

    def to_dict(self) -> dict:
        # threads and out do not change the report, so they stay out of it
        return {"command": self.command, "group": self.group, "group_file": self.group_file,
                "subgroup_involution": self.subgroup_involution, "seed": self.seed,
                "samples": self.samples, "dims": self.dims, "transversal": self.transversal,
                "method": self.method}


def load_group(cfg: RunConfig, default: str = "s3") -> FiniteGroup:
    if cfg.group_file:
        name = os.path.splitext(os.path.basename(cfg.group_file))[0]
        return close_generators(read_group_file(cfg.group_file), name=name)
    return named_group(cfg.group or default)


def _subgroup(G: FiniteGroup, cfg: RunConfig):
    h = cfg.subgroup_involution if cfg.subgroup_involution is not None else int(G.involutions[0])
    if not 0 <= h < G.order or not G.is_involution(h):
        raise ValueError(f"element {h} is not an involution of {G.name}")
    H = Subgroup.generated(G, [h])
    T = left_transversal(G, H, y0=h if cfg.transversal == "nontrivial-y0" else None)
    return h, H, T


# ---------------------------------------------------------------------------
# commands

def cmd_verify(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    G = load_group(cfg)
    rep = certify_cover(G, h=cfg.subgroup_involution, transversal=cfg.transversal,
                        method=cfg.method, seed=cfg.seed, samples=cfg.samples,
                        threads=cfg.threads)
    lines = [f"group {rep.group}: |G| = {rep.order}, [G:H] = {rep.index}, |E| = {rep.e_order}",
             f"involutions in T: {rep.involutions_in_t}; outside T: {rep.involutions_outside_t}",
             f"nonsplit: {rep.nonsplit} ({rep.nonsplit_basis.split(':')[0]})",
             f"internal checks: {'pass' if rep.checks_passed else 'FAIL'}"]
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep.to_dict(), lines


def cmd_selftest(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    G = load_group(cfg)
    h, H, T = _subgroup(G, cfg)
    if not 0 <= cfg.dims <= 3:
        raise ValueError("--dims must lie in 0..3")
    results = []
    clock = {}

    def keys_for(n):
        if n <= 2:
            return list(all_keys(G, n)), "exhaustive"
        ks = random_keys(G, n, cfg.samples, seed=cfg.seed)
        ks += list(all_keys(G, n, entries=H.members, trailing=H.members))
        return ks, "sampled"

    for n in range(cfg.dims + 1):
        t0 = time.perf_counter()
        keys, mode = keys_for(n)
        bad_dd = bad_f = 0
        for gs, t in keys:
            x = FormalChain.generator(gs, t)
            if not x or n == 0:
                continue
            if n >= 2 and boundary(boundary(x, G), G):
                bad_dd += 1
            if boundary(chain_map_f(x, T), G) != chain_map_f(boundary(x, G), T):
                bad_f += 1
        results.append({"check": "d_squared", "dimension": n, "mode": mode,
                        "failures": bad_dd, "passed": bad_dd == 0})
        results.append({"check": "f_chain_map", "dimension": n, "mode": mode,
                        "failures": bad_f, "passed": bad_f == 0})
        for rep in verify_homotopy_identities(n, keys, T).values():
            d = rep.to_dict()
            d["check"], d["mode"] = "homotopy_" + d.pop("identity"), mode
            results.append(d)
        clock[f"dim_{n}"] = round((time.perf_counter() - t0) * 1000, 3)

    # cochain side: d d = 0 on random cochains with trivial and coinduced values
    rng = np.random.default_rng(cfg.seed)
    W = CoinducedModule(T, trivial_module(H))
    for M in (trivial_module(G), W):
        for n in (0, 1):
            lam = Cochain.random(M, n, rng)
            ok = differential(differential(lam)).is_zero()
            results.append({"check": "cochain_d_squared", "module": M.kind, "degree": n,
                            "passed": ok})
    passed = all(r["passed"] for r in results)
    report = {"group": G.name, "order": G.order, "subgroup_involution": h,
              "transversal": cfg.transversal, "reps": list(T.reps), "y0": T.y0,
              "results": results, "passed": passed, "timings_ms": clock}
    lines = [f"selftest on {G.name} (y0 = {T.y0}): {len(results)} checks, "
             f"{sum(not r['passed'] for r in results)} failed"]
    return (EXIT_OK if passed else EXIT_FAIL), report, lines


def cmd_shapiro(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    G = load_group(cfg)
    h, H, T = _subgroup(G, cfg)
    beta = beta_z4(H)
    W = CoinducedModule(T, beta.module)
    clock = {}
    t0 = time.perf_counter()
    alpha = theta_inverse(beta, T, module=W)
    materialised = isinstance(alpha, Cochain)
    if materialised and G.order <= EXHAUSTIVE_MAX_ORDER:
        cc = is_cocycle(alpha, mode="exhaustive")
    else:
        cc = is_cocycle(alpha, mode="sampled", samples=cfg.samples, seed=cfg.seed)
    clock["cocycle"] = round((time.perf_counter() - t0) * 1000, 3)
    results = [dict(check="theta_inverse_cocycle", passed=cc.ok, **cc.to_dict())]

    if materialised:
        back = theta(alpha)
        if T.y0 == 0:
            results.append({"check": "round_trip", "passed": back == beta})
        else:
            # with y0 != 1 the round trip is only asserted up to coboundary
            results.append({"check": "round_trip", "passed": True, "asserted": False,
                            "literal_identity": back == beta})

    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    triples = rng.integers(0, G.order, size=(cfg.samples, 3))
    bad = []
    for g1, g2, g in triples.tolist():
        if W.evaluate(alpha(g1, g2), g) != alpha_explicit(beta, T, g1, g2, g):
            bad.append([g1, g2, g])
    clock["agreement"] = round((time.perf_counter() - t0) * 1000, 3)
    results.append({"check": "alpha_explicit_agreement", "tested": len(triples),
                    "failures": bad[:10], "passed": not bad})
    u_ok = alpha_explicit(beta, T, h, h, 0).bits == 1 if T.y0 == 0 else True
    results.append({"check": "alpha_h_h_at_1", "passed": u_ok})

    if G.order <= 6 and materialised:
        other = left_transversal(G, H, y0=None if T.y0 != 0 else h)
        results.append(dict(check="transversal_dependence", passed=True, recorded=True,
                            **compare_transversals(beta, T, other)))
    passed = all(r["passed"] for r in results)
    report = {"group": G.name, "order": G.order, "subgroup_involution": h,
              "transversal": cfg.transversal, "index": T.index, "results": results,
              "passed": passed, "timings_ms": clock}
    lines = [f"shapiro checks on {G.name}: {len(results)} run, "
             f"{sum(not r['passed'] for r in results)} failed"]
    return (EXIT_OK if passed else EXIT_FAIL), report, lines


COMMANDS = {"verify": cmd_verify, "selftest": cmd_selftest, "shapiro": cmd_shapiro}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invshapiro", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    defaults = {"verify": 10_000, "selftest": 1000, "shapiro": 10_000}
    for name in COMMANDS:
        s = sub.add_parser(name)
        src = s.add_mutually_exclusive_group()
        src.add_argument("--group", help="built-in group: c2 s3 a4 a5 psl27 psl28")
        src.add_argument("--group-file", help="file of generating permutations")
        s.add_argument("--subgroup-involution", type=int, default=None,
                       help="element index of h (default: first involution)")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=defaults[name])
        s.add_argument("--dims", type=int, default=2, help="top dimension for selftest")
        s.add_argument("--transversal", choices=["identity-first", "nontrivial-y0"],
                       default="identity-first")
        s.add_argument("--method", choices=["orbit", "solver", "enumerate"], default="orbit")
        s.add_argument("--out", help="JSON report path ('-' for stdout)")
        s.add_argument("--threads", type=int, default=None)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(ns)
    t0 = time.perf_counter()
    try:
        code, report, lines = COMMANDS[cfg.command](cfg)
    except (InvShapiroError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"config": cfg.to_dict(), **report}
    report.setdefault("timings_ms", {})["total"] = round((time.perf_counter() - t0) * 1000, 3)
    text = json.dumps(report, indent=2) + "\n"
    summary = sys.stdout
    if cfg.out == "-":
        sys.stdout.write(text)
        summary = sys.stderr
    elif cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    for line in lines:
        print(line, file=summary)
    print("PASS" if code == EXIT_OK else "FAIL", file=summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
