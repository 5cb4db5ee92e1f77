"""Biorthogonal q-band filter banks: masks, validation, generation, file I/O.

A bank stores q primal and q dual tap rows. Its band masks are finite
character sums; because characters of bounded index are locally constant,
the biorthogonality condition is decided everywhere by evaluating the
modulation matrices at finitely many coset representatives. The same
condition is also checked directly on the taps; the two validators are
independent routes to the same pass/fail verdict.

Conventions: analysis uses conjugated dual taps and synthesis the primal
taps, so complex banks work; this reduces to the real-tap formulas.
Lowpass normalization (mask value 1 at 0) is reported, not enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldTable
from .indexing import gadd, gneg, scale_q
from .laurent import (
    FieldElement,
    character,
    embed_index,
    lf_add,
    lf_mul,
    prime_power,
    sample_point,
    zero,
)
from .serde import (
    FileFormatError,
    array_from_pairs,
    dump_json,
    header_from_table,
    load_json,
    pairs_from_array,
    table_from_header,
)

__all__ = [
    "FilterBank",
    "ValidationReport",
    "mask",
    "modulation_matrix",
    "validate",
    "canonical_bank",
    "is_canonical",
    "random_biorthogonal",
    "bank_to_dict",
    "bank_from_dict",
    "save_bank",
    "load_bank",
]

DEFAULT_TOL = 1e-10
_SIDES = ("primal", "dual")


class FilterBank:
    """A primal/dual pair of q-band tap families over one field table.

    analysis[s, k] is the primal tap for band s at translation index k,
    dual[s, k] the dual tap. Each side is a q x L complex array; supports
    should be powers of q, and the transform engine requires the support to
    fit the block being filtered.
    """

    def __init__(self, table: FieldTable, analysis, dual):
        q = table.params.q
        analysis = np.atleast_2d(np.asarray(analysis, dtype=complex))
        dual = np.atleast_2d(np.asarray(dual, dtype=complex))
        for name, taps in (("analysis", analysis), ("dual", dual)):
            if taps.ndim != 2 or taps.shape[0] != q:
                raise ValueError(
                    f"{name} taps must form {q} rows, got shape {taps.shape}"
                )
            if taps.shape[1] < 1:
                raise ValueError(f"{name} tap rows must be non-empty")
        self.table = table
        self.analysis = analysis
        self.dual = dual

    def taps(self, side: str) -> np.ndarray:
        if side not in _SIDES:
            raise ValueError(f"side must be one of {_SIDES}, got {side!r}")
        return self.analysis if side == "primal" else self.dual

    @property
    def support(self) -> int:
        return max(self.analysis.shape[1], self.dual.shape[1])

    def __repr__(self):
        return (
            f"FilterBank(q={self.table.params.q}, "
            f"L_a={self.analysis.shape[1]}, L_d={self.dual.shape[1]})"
        )


@dataclass
class ValidationReport:
    """Outcome of the biorthogonality check in both formulations."""

    passed: bool
    max_freq_deviation: float
    max_time_deviation: float
    lowpass_normalized: bool
    tol: float
    details: dict = field(default_factory=dict)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: freq deviation {self.max_freq_deviation:.3e}, "
            f"time deviation {self.max_time_deviation:.3e}, "
            f"lowpass normalized: {'yes' if self.lowpass_normalized else 'no'}"
        )


def mask(bank: FilterBank, s: int, xi: FieldElement, side: str = "primal") -> complex:
    """Band mask at xi: (1/sqrt(q)) * sum_k taps[s, k] * conj(chi_k(xi))."""
    q = bank.table.params.q
    if not 0 <= s < q:
        raise ValueError(f"band {s} out of range [0, {q})")
    taps = bank.taps(side)
    total = 0j
    for k, a in enumerate(taps[s]):
        if a:
            total += a * character(lf_mul(embed_index(bank.table, k), xi)).conjugate()
    return total / math.sqrt(q)


def modulation_matrix(bank: FilterBank, xi: FieldElement, side: str = "primal") -> np.ndarray:
    """q x q matrix with entry (s, l) = mask(s, P*(xi + u_l), side)."""
    table = bank.table
    q = table.params.q
    p_elem = prime_power(table, 1)
    out = np.empty((q, q), dtype=complex)
    for ell in range(q):
        arg = lf_mul(p_elem, lf_add(xi, embed_index(table, ell)))
        for s in range(q):
            out[s, ell] = mask(bank, s, arg, side)
    return out


def _coset_depth(q: int, support: int) -> int:
    # smallest L' >= 1 with q**L' >= support; masks are constant on cosets
    # of P**L' * (unit ball), so q**L' evaluations decide them everywhere
    depth = 1
    while q**depth < support:
        depth += 1
    return depth


def validate(bank: FilterBank, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check biorthogonality of the primal/dual pair in both domains.

    Frequency domain: the primal and conjugated dual modulation matrices
    must multiply to the identity at every mask-distinguishing coset
    representative (a finite, exhaustive set). Time domain: the taps must
    satisfy delta-correlation across bands and q-strided carry-free shifts.
    Failure is reported as data, never raised.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    table = bank.table
    p, q = table.params.p, table.params.q
    depth = _coset_depth(q, bank.support)
    eye = np.eye(q)

    freq_dev = 0.0
    freq_worst = None
    for j in range(q ** (depth - 1)):
        xi = sample_point(table, j, depth - 1)
        m = modulation_matrix(bank, xi, "primal")
        md = modulation_matrix(bank, xi, "dual")
        dev = np.abs(m @ md.conj().T - eye)
        r, s = np.unravel_index(np.argmax(dev), dev.shape)
        if dev[r, s] >= freq_dev:
            freq_dev = float(dev[r, s])
            freq_worst = {"r": int(r), "s": int(s), "sample": j}

    time_dev = 0.0
    time_worst = None
    la = bank.analysis.shape[1]
    ld = bank.dual.shape[1]
    bound = q**depth
    for n in range(bound // q):
        shift = scale_q(table.params, n, 1)
        for r in range(q):
            for s in range(q):
                total = 0j
                for k in range(la):
                    t = gadd(table.params, k, gneg(table.params, shift))
                    if t < ld:
                        total += bank.analysis[r, k] * bank.dual[s, t].conjugate()
                want = 1.0 if (r == s and n == 0) else 0.0
                dev = abs(total - want)
                if dev >= time_dev:
                    time_dev = float(dev)
                    time_worst = {"r": r, "s": s, "shift": n}

    m0 = mask(bank, 0, zero(table), "primal")
    m0d = mask(bank, 0, zero(table), "dual")
    lowpass = abs(m0 - 1.0) <= tol and abs(m0d - 1.0) <= tol
    return ValidationReport(
        passed=(freq_dev <= tol and time_dev <= tol),
        max_freq_deviation=freq_dev,
        max_time_deviation=time_dev,
        lowpass_normalized=lowpass,
        tol=tol,
        details={"freq_worst": freq_worst, "time_worst": time_worst},
    )


def canonical_bank(table: FieldTable) -> FilterBank:
    """The Haar/Vilenkin orthogonal bank: support-q character rows.

    a[s, k] = conj(character(u_s * P * u_k)) / sqrt(q); dual = primal. For
    q = 2 this is the Haar pair (1, 1)/sqrt(2), (1, -1)/sqrt(2); band 0 is
    always the constant lowpass row.
    """
    q = table.params.q
    p_elem = prime_power(table, 1)
    taps = np.empty((q, q), dtype=complex)
    for s in range(q):
        u_s = embed_index(table, s)
        for k in range(q):
            val = character(lf_mul(u_s, lf_mul(p_elem, embed_index(table, k))))
            taps[s, k] = val.conjugate()
    taps /= math.sqrt(q)
    return FilterBank(table, taps, taps.copy())


def is_canonical(bank: FilterBank, tol: float = 1e-12) -> bool:
    """True when the bank's taps match canonical_bank(table) within tol."""
    ref = canonical_bank(bank.table)
    return (
        bank.analysis.shape == ref.analysis.shape
        and bank.dual.shape == ref.dual.shape
        and np.max(np.abs(bank.analysis - ref.analysis)) <= tol
        and np.max(np.abs(bank.dual - ref.dual)) <= tol
    )


def random_biorthogonal(table: FieldTable, seed: int, max_draws: int = 1000) -> FilterBank:
    """Seeded random support-q biorthogonal pair.

    Draws a q x q complex matrix with real/imaginary parts uniform in
    [-1, 1], rejecting condition numbers above 100, and takes the dual as
    the conjugate-transposed inverse, so the tap-level biorthogonality
    holds by construction. Deterministic per (seed, table).
    """
    q = table.params.q
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        g = rng.uniform(-1.0, 1.0, (q, q)) + 1j * rng.uniform(-1.0, 1.0, (q, q))
        if np.linalg.cond(g) <= 100.0:
            dual = np.linalg.inv(g).conj().T
            return FilterBank(table, g, dual)
    raise RuntimeError(
        f"no acceptably conditioned draw in {max_draws} attempts (seed {seed})"
    )


def bank_to_dict(bank: FilterBank) -> dict:
    doc = {"kind": "filterbank"}
    doc.update(header_from_table(bank.table))
    doc["analysis"] = [pairs_from_array(row) for row in bank.analysis]
    doc["dual"] = [pairs_from_array(row) for row in bank.dual]
    return doc


def bank_from_dict(doc: dict) -> FilterBank:
    table = table_from_header(doc, "filter bank")
    q = table.params.q
    rows = {}
    for name in ("analysis", "dual"):
        raw = doc.get(name)
        if not isinstance(raw, list):
            raise FileFormatError(f"filter bank: missing {name} tap rows")
        if len(raw) != q:
            raise FileFormatError(
                f"filter bank: {name} must have exactly q={q} rows, got {len(raw)}"
            )
        parsed = [array_from_pairs(row, f"{name} row {i}") for i, row in enumerate(raw)]
        lengths = {len(row) for row in parsed}
        if len(lengths) != 1:
            raise FileFormatError(f"filter bank: {name} rows differ in length")
        rows[name] = np.vstack(parsed)
    return FilterBank(table, rows["analysis"], rows["dual"])


def save_bank(bank: FilterBank, path) -> None:
    dump_json(path, bank_to_dict(bank))


def load_bank(path) -> FilterBank:
    return bank_from_dict(load_json(path, "filterbank"))
