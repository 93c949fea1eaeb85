"""Write degree-65 permutation generators of Sz(8) in the group-file format.

Sz(8) is built as a 4x4 matrix group over GF(8) and then restricted to its
orbit on projective points (the Suzuki-Tits ovoid, 65 points).

    python3 tools/make_sz8.py data/sz8.gens
"""

from __future__ import annotations

import sys
from collections import deque
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
import gf8  # noqa: E402

M = 1  # q = 2^(2m+1)
SIGMA = 2 ** (M + 1)  # x -> x^sigma squares to the Frobenius


def fs(x: int) -> int:
    return gf8.power(x, SIGMA)


def matmul(a, b):
    out = []
    for i in range(4):
        for j in range(4):
            s = 0
            for k in range(4):
                s ^= gf8.mul(a[4 * i + k], b[4 * k + j])
            out.append(s)
    return tuple(out)


def unipotent(a: int, b: int):
    m = gf8.mul
    return (
        1, 0, 0, 0,
        a, 1, 0, 0,
        m(a, fs(a)) ^ b, fs(a), 1, 0,
        m(m(a, a), fs(a)) ^ m(a, b) ^ fs(b), b, a, 1,
    )


def torus(k: int):
    p = gf8.power
    e = 2 ** M
    return (
        p(k, 1 + e), 0, 0, 0,
        0, p(k, e), 0, 0,
        0, 0, p(k, -e), 0,
        0, 0, 0, p(k, -1 - e),
    )


SWAP = (0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0)


def closure_order(gens, cap=40000):
    ident = tuple(1 if i % 5 == 0 else 0 for i in range(16))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = matmul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise RuntimeError("closure too large: not Sz(8)")
                queue.append(y)
    return len(seen)


def normalize(v):
    for c in v:
        if c:
            s = gf8.inv(c)
            return tuple(gf8.mul(s, x) for x in v)
    raise ValueError("zero vector")


def apply(v, g):
    return normalize(tuple(
        _dot(v, g, j) for j in range(4)
    ))


def _dot(v, g, j):
    s = 0
    for k in range(4):
        s ^= gf8.mul(v[k], g[4 * k + j])
    return s


def main(out: str) -> None:
    gens = [unipotent(1, 0), unipotent(0, 1), torus(gf8.PRIMITIVE), SWAP]
    order = closure_order(gens)
    assert order == 29120, order
    start = (1, 0, 0, 0)
    points = [start]
    index = {start: 0}
    i = 0
    while i < len(points):
        for g in gens:
            w = apply(points[i], g)
            if w not in index:
                index[w] = len(points)
                points.append(w)
        i += 1
    assert len(points) == 65, len(points)
    lines = [
        "# Sz(8), order 29120, acting on the 65 points of the Suzuki-Tits ovoid",
        "# generated by tools/make_sz8.py; image-list format, 1-based",
    ]
    for g in gens:
        images = [index[apply(p, g)] + 1 for p in points]
        lines.append(" ".join(map(str, images)))
    Path(out).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sz8.gens")
