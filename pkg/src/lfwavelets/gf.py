"""Exact arithmetic in GF(q) = GF(p^c) in a polynomial basis.

Elements are coordinate vectors over Z_p in the basis 1, g, g^2, ...,
g^(c-1), where g is the residue of X modulo a monic irreducible modulus of
degree c. The positional encoding sum(coeffs[i] * p**i) identifies GF(q)
with the base-q digit set {0, ..., q-1}; addition of digit encodings is
then exactly the carry-free index sum. Products for c > 1 depend on the
modulus, so the modulus is part of the configuration and travels in every
serialized file header.
"""

from __future__ import annotations

from dataclasses import dataclass

from .indexing import FieldParams, gadd

__all__ = [
    "FieldTable",
    "GFqElement",
    "default_modulus",
    "gf_add",
    "gf_mul",
    "from_digit",
    "to_digit",
    "constant_term",
]


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    # remainder of num by monic den over Z_p, low-to-high coefficients
    num = [x % p for x in num]
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        f = num[i]
        if f:
            for j, d in enumerate(den):
                num[i - dd + j] = (num[i - dd + j] - f * d) % p
    return num[:dd]


def _int_to_poly(n: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return out


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    # exhaustive trial division by every monic polynomial of degree <= c // 2
    deg = len(modulus) - 1
    for d in range(1, deg // 2 + 1):
        for enc in range(p**d):
            divisor = _int_to_poly(enc, p, d) + [1]
            if not any(_poly_mod(list(modulus), divisor, p)):
                return False
    return True


def default_modulus(p: int, c: int) -> tuple[int, ...]:
    """Smallest-lexicographic monic irreducible of degree c over Z_p.

    Low-to-high coefficient order; candidates are ranked by the positional
    encoding of their non-leading coefficients. Yields X^2+X+1 for q = 4,
    X^3+X+1 for q = 8 and X^2+1 for q = 9.
    """
    for enc in range(p**c):
        cand = tuple(_int_to_poly(enc, p, c)) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {c} over Z_{p}")  # unreachable


@dataclass(frozen=True)
class GFqElement:
    """Coordinates in the polynomial basis; coeffs[i] multiplies g^i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))


class FieldTable:
    """GF(q) arithmetic for fixed (p, c) and modulus.

    For c = 1 the field is Z_p and no modulus is stored. For c > 1 a monic
    irreducible modulus (c + 1 coefficients, low-to-high) is required; if
    none is given the documented default_modulus(p, c) is used. Digit-level
    product and sum tables are precomputed once; q is desk-scale.
    """

    def __init__(self, params: FieldParams, modulus=None):
        self.params = params
        p, c, q = params.p, params.c, params.q
        if c == 1:
            if modulus:
                raise ValueError("modulus must be omitted or empty when c = 1")
            self.modulus: tuple[int, ...] = ()
        else:
            if modulus is None:
                modulus = default_modulus(p, c)
            modulus = tuple(int(x) for x in modulus)
            if len(modulus) != c + 1:
                raise ValueError(
                    f"modulus must have {c + 1} coefficients, got {len(modulus)}"
                )
            if any(not 0 <= x < p for x in modulus):
                raise ValueError(f"modulus coefficients must lie in [0, {p})")
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over Z_{p}")
            self.modulus = modulus
        self._mul = self._build_mul_table()

    def _build_mul_table(self) -> list[list[int]]:
        p, c, q = self.params.p, self.params.c, self.params.q
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            pa = _int_to_poly(a, p, c)
            for b in range(a, q):
                pb = _int_to_poly(b, p, c)
                prod = [0] * (2 * c - 1)
                for i, x in enumerate(pa):
                    if x:
                        for j, y in enumerate(pb):
                            prod[i + j] = (prod[i + j] + x * y) % p
                if c > 1:
                    prod = _poly_mod(prod, list(self.modulus), p)
                enc = sum(d * p**i for i, d in enumerate(prod[:c]))
                table[a][b] = enc
                table[b][a] = enc
        return table

    def mul_digits(self, a: int, b: int) -> int:
        """Field product on the digit encoding of GF(q)."""
        return self._mul[a][b]

    def add_digits(self, a: int, b: int) -> int:
        """Field sum on the digit encoding (carry-free base-p addition)."""
        return gadd(self.params, a, b)

    def __eq__(self, other):
        return (
            isinstance(other, FieldTable)
            and self.params == other.params
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.params, self.modulus))

    def __repr__(self):
        if self.modulus:
            return f"FieldTable(p={self.params.p}, c={self.params.c}, modulus={list(self.modulus)})"
        return f"FieldTable(p={self.params.p}, c={self.params.c})"


def _check_element(table: FieldTable, x: GFqElement) -> None:
    p, c = table.params.p, table.params.c
    if len(x.coeffs) != c:
        raise ValueError(f"element has {len(x.coeffs)} coordinates, expected {c}")
    if any(not 0 <= v < p for v in x.coeffs):
        raise ValueError(f"coordinates must lie in [0, {p}): {x.coeffs}")


def from_digit(table: FieldTable, b: int) -> GFqElement:
    """Positional map from a base-q digit to GF(q): digit b -> sum b_i g^i."""
    if not 0 <= b < table.params.q:
        raise ValueError(f"digit {b} out of range [0, {table.params.q})")
    return GFqElement(tuple(_int_to_poly(b, table.params.p, table.params.c)))


def to_digit(table: FieldTable, x: GFqElement) -> int:
    """Inverse of from_digit."""
    _check_element(table, x)
    p = table.params.p
    return sum(v * p**i for i, v in enumerate(x.coeffs))


def gf_add(table: FieldTable, x: GFqElement, y: GFqElement) -> GFqElement:
    """Coordinatewise mod-p addition."""
    _check_element(table, x)
    _check_element(table, y)
    p = table.params.p
    return GFqElement(tuple((a + b) % p for a, b in zip(x.coeffs, y.coeffs)))


def gf_mul(table: FieldTable, x: GFqElement, y: GFqElement) -> GFqElement:
    """Field product: polynomial product reduced modulo the modulus."""
    _check_element(table, x)
    _check_element(table, y)
    return from_digit(table, table.mul_digits(to_digit(table, x), to_digit(table, y)))


def constant_term(x: GFqElement) -> int:
    """Coordinate along the basis element 1 (the only one characters see)."""
    return x.coeffs[0]
