"""Arithmetic in GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1."""

from __future__ import annotations

PRIMITIVE_POLY = 0x11D

EXP = [0] * 512
LOG = [0] * 256

_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= PRIMITIVE_POLY
for _i in range(255, 512):
    EXP[_i] = EXP[_i - 255]
del _x, _i


def add(a: int, b: int) -> int:
    return a ^ b


sub = add


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return EXP[255 - LOG[a]]


def div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by zero in GF(256)")
    if a == 0:
        return 0
    return EXP[LOG[a] + 255 - LOG[b]]


def pow_(a: int, e: int) -> int:
    if a == 0:
        return 0 if e else 1
    return EXP[(LOG[a] * e) % 255]


def dot(row, vec) -> int:
    acc = 0
    for a, b in zip(row, vec):
        if a and b:
            acc ^= EXP[LOG[a] + LOG[b]]
    return acc


def matvec(M, v) -> list[int]:
    return [dot(row, v) for row in M]


def solve(A, b) -> list[int]:
    """Solve A x = b for square A by Gauss-Jordan elimination; raises if singular."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix over GF(256)")
        aug[col], aug[piv] = aug[piv], aug[col]
        p_inv = inv(aug[col][col])
        aug[col] = [mul(x, p_inv) for x in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [x ^ mul(f, y) for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def is_invertible(A) -> bool:
    n = len(A)
    try:
        solve(A, [0] * n)
    except ValueError:
        return False
    return True
