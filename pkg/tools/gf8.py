"""Arithmetic in GF(8) = GF(2)[x]/(x^3 + x + 1), elements as ints 0..7."""

from __future__ import annotations

MOD = 0b1011
Q = 8


def mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0b1000:
            a ^= MOD
    return r


def power(a: int, e: int) -> int:
    e %= Q - 1
    if a == 0:
        return 0
    r = 1
    for _ in range(e):
        r = mul(r, a)
    return r


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(8)")
    return power(a, Q - 2)


# x is a primitive element since x^3 + x + 1 is a primitive polynomial
PRIMITIVE = 0b010
