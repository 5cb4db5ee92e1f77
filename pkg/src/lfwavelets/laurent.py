"""Field points as finite formal Laurent series over GF(q).

A point x = sum_l c_l * P**l (P the prime element, |P| = 1/q) is stored as
a sparse map from exponent to the nonzero GF(q) coefficient, encoded as a
base-q digit. All arithmetic is exact: finitely supported inputs stay
finitely supported under + and *, so no truncation ever happens and the
filter-mask validators decide their conditions by finite exhaustion.

The unit ball (ring of integers) is {valuation >= 0}; the index embedding
sends n with base-q digits b_0, b_1, ... to sum b_i P^(-i-1), and the
additive character reads only the constant-term coordinate of the P^(-1)
coefficient.
"""

from __future__ import annotations

import cmath
from functools import lru_cache

import numpy as np

from .gf import FieldTable
from .indexing import digits_q

__all__ = [
    "FieldElement",
    "lf_add",
    "lf_mul",
    "zero",
    "one",
    "prime_power",
    "embed_index",
    "character",
    "index_character",
    "sample_point",
    "character_matrix",
]


class FieldElement:
    """Finite Laurent series over GF(q): sparse exponent -> digit map.

    Coefficients are base-q digit encodings of GF(q) elements (see the gf
    module); zeros are never stored. Instances are treated as immutable.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: FieldTable, terms=None):
        self.table = table
        q = table.params.q
        clean = {}
        for e, d in (terms or {}).items():
            if not 0 <= d < q:
                raise ValueError(f"coefficient digit {d} out of range [0, {q})")
            if d:
                clean[int(e)] = int(d)
        self.terms = clean

    def valuation(self) -> int | None:
        """Smallest exponent with a nonzero coefficient; None for zero."""
        return min(self.terms) if self.terms else None

    def norm(self) -> float:
        """q**(-valuation); 0.0 for the zero element."""
        if not self.terms:
            return 0.0
        return float(self.table.params.q) ** (-min(self.terms))

    def coeff(self, exponent: int) -> int:
        """Digit-encoded coefficient of P**exponent (0 if absent)."""
        return self.terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return lf_add(self, other)

    def __mul__(self, other):
        return lf_mul(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.table == other.table
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "FieldElement(0)"
        body = " + ".join(f"{d}*P^{e}" for e, d in sorted(self.terms.items()))
        return f"FieldElement({body})"


def _check_tables(x: FieldElement, y: FieldElement) -> None:
    if x.table != y.table:
        raise ValueError("operands belong to different field tables")


def lf_add(x: FieldElement, y: FieldElement) -> FieldElement:
    """Exact sum: exponentwise GF(q) addition, no carries between exponents."""
    _check_tables(x, y)
    add = x.table.add_digits
    terms = dict(x.terms)
    for e, d in y.terms.items():
        s = add(terms.get(e, 0), d)
        if s:
            terms[e] = s
        else:
            terms.pop(e, None)
    out = FieldElement.__new__(FieldElement)
    out.table = x.table
    out.terms = terms
    return out


def lf_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    """Exact product: Laurent convolution with GF(q) digit products."""
    _check_tables(x, y)
    table = x.table
    mul = table._mul
    add = table.add_digits
    terms: dict[int, int] = {}
    for ex, dx in x.terms.items():
        row = mul[dx]
        for ey, dy in y.terms.items():
            e = ex + ey
            s = add(terms.get(e, 0), row[dy])
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
    out = FieldElement.__new__(FieldElement)
    out.table = table
    out.terms = terms
    return out


def zero(table: FieldTable) -> FieldElement:
    return FieldElement(table)


def one(table: FieldTable) -> FieldElement:
    return FieldElement(table, {0: 1})


def prime_power(table: FieldTable, k: int) -> FieldElement:
    """P**k for any integer k (negative exponents allowed)."""
    return FieldElement(table, {k: 1})


def embed_index(table: FieldTable, n: int) -> FieldElement:
    """Translation-lattice point of index n: base-q digit b_i -> coeff of P^(-i-1).

    Sends 0 to 0, [q^(k-1), q^k) to valuation -k, and carry-free index
    addition to field addition.
    """
    return FieldElement(
        table, {-(i + 1): d for i, d in enumerate(digits_q(table.params, n)) if d}
    )


@lru_cache(maxsize=None)
def _unit_roots(p: int) -> tuple[complex, ...]:
    if p == 2:
        return (1.0 + 0.0j, -1.0 + 0.0j)
    return tuple(cmath.exp(2j * cmath.pi * a / p) for a in range(p))


def character(x: FieldElement) -> complex:
    """Additive character: exp(2*pi*i*a/p) with a the constant-term
    coordinate of the P^(-1) coefficient of x.

    Trivial on the unit ball, nontrivial one level outside it, and
    multiplicative over +.
    """
    d = x.terms.get(-1, 0)
    return _unit_roots(x.table.params.p)[d % x.table.params.p]


def index_character(table: FieldTable, n: int, x: FieldElement) -> complex:
    """Character attached to index n evaluated at x: character(u_n * x)."""
    return character(lf_mul(embed_index(table, n), x))


def sample_point(table: FieldTable, j: int, depth: int) -> FieldElement:
    """Representative of the j-th coset of P**depth * (unit ball) in the unit ball.

    Base-q digit d_l of j becomes the coefficient of P**l; requires
    0 <= j < q**depth.
    """
    if not 0 <= j < table.params.q**depth:
        raise ValueError(f"sample index {j} out of range [0, q**{depth})")
    return FieldElement(
        table, {i: d for i, d in enumerate(digits_q(table.params, j)) if d}
    )


def character_matrix(table: FieldTable, depth: int) -> np.ndarray:
    """Matrix of index_character(n, x_j) for n, j < q**depth.

    Rows are the generalized Walsh (Vilenkin) functions tabulated on the
    sample grid; the matrix divided by sqrt(q**depth) is unitary.
    """
    size = table.params.q**depth
    points = [sample_point(table, j, depth) for j in range(size)]
    out = np.empty((size, size), dtype=complex)
    for n in range(size):
        u = embed_index(table, n)
        out[n] = [character(lf_mul(u, x)) for x in points]
    return out
