"""Carry-free q-adic arithmetic on non-negative integer indices.

Indices are identified with their base-p digit strings; the group law adds
digits mod p with no carries (bitwise XOR when p = 2). Since q = p**c,
base-q digit blocks align with runs of c base-p digits, so the single
digitwise rule is correct for every c. Multiplying by q**k appends k zero
base-q digits, which is the index-side picture of dilation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FieldParams",
    "gadd",
    "gneg",
    "gsub",
    "scale_q",
    "digits_q",
    "from_digits_q",
    "level_q",
    "digit_reverse_q",
    "gadd_arrays",
]


def is_prime(n: int) -> bool:
    """Trial-division primality test (desk-scale p)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    """Residue characteristic p, extension degree c, and q = p**c."""

    p: int
    c: int
    q: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be a prime integer, got {self.p!r}")
        if not isinstance(self.c, int) or self.c < 1:
            raise ValueError(f"c must be a positive integer, got {self.c!r}")
        object.__setattr__(self, "q", self.p**self.c)


def _check_index(n: int, name: str = "index") -> None:
    if n < 0:
        raise ValueError(f"{name} must be non-negative, got {n}")


def gadd(params: FieldParams, m: int, n: int) -> int:
    """Carry-free sum: digitwise mod-p addition of m and n."""
    _check_index(m)
    _check_index(n)
    p = params.p
    if p == 2:
        return m ^ n
    out = 0
    shift = 1
    while m or n:
        out += ((m % p) + (n % p)) % p * shift
        m //= p
        n //= p
        shift *= p
    return out


def gneg(params: FieldParams, n: int) -> int:
    """Inverse for gadd: each base-p digit d maps to (p - d) % p."""
    _check_index(n)
    p = params.p
    if p == 2:
        return n
    out = 0
    shift = 1
    while n:
        out += (p - n % p) % p * shift
        n //= p
        shift *= p
    return out


def gsub(params: FieldParams, m: int, n: int) -> int:
    """Carry-free difference, gadd(m, gneg(n))."""
    return gadd(params, m, gneg(params, n))


def scale_q(params: FieldParams, n: int, k: int) -> int:
    """n * q**k: appends k zero base-q digits."""
    _check_index(n)
    _check_index(k, "exponent")
    return n * params.q**k


def digits_q(params: FieldParams, n: int) -> list[int]:
    """Base-q digits of n, least significant first; [] for n = 0."""
    _check_index(n)
    q = params.q
    out = []
    while n:
        out.append(n % q)
        n //= q
    return out


def from_digits_q(params: FieldParams, digits) -> int:
    """Inverse of digits_q; rejects digits outside [0, q)."""
    q = params.q
    out = 0
    for i, d in enumerate(digits):
        if not 0 <= d < q:
            raise ValueError(f"digit {d} out of range [0, {q})")
        out += d * q**i
    return out


def level_q(params: FieldParams, n: int) -> int:
    """Number of base-q digits of n: the smallest j with n < q**j."""
    _check_index(n)
    q = params.q
    j = 0
    while n:
        n //= q
        j += 1
    return j


def digit_reverse_q(params: FieldParams, n: int, width: int) -> int:
    """Reverse the width-digit base-q string of n (n must be < q**width)."""
    q = params.q
    if not 0 <= n < q**width:
        raise ValueError(f"n = {n} does not fit in {width} base-{q} digits")
    out = 0
    for _ in range(width):
        out = out * q + n % q
        n //= q
    return out


def gadd_arrays(p: int, a, b) -> np.ndarray:
    """Elementwise gadd on integer arrays (broadcasts like numpy +)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if p == 2:
        return a ^ b
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    out = np.zeros(a.shape, dtype=np.int64)
    shift = 1
    while a.any() or b.any():
        out += (a % p + b % p) % p * shift
        a //= p
        b //= p
        shift *= p
    return out
