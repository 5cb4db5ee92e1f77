"""Packet functions as coefficient vectors, built by the two-scale recursion.

A packet with index n lives in the depth-J refinement space: it is the
finite combination sum_t h_t * w0(P**-J x - u_t) of translated dilates of
the base function w0. Everything the biorthogonality theorems assert about
packets reduces to finite sums over these coefficient vectors, so packets
are represented only this way; pointwise sample tables exist solely for
the canonical bank, where w0 is the indicator of the unit ball and the
packets reproduce the generalized Walsh (Vilenkin) system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank, is_canonical
from .indexing import (
    digit_reverse_q,
    digits_q,
    gadd_arrays,
    gneg,
    level_q,
    scale_q,
)

__all__ = ["PacketVector", "packet_coeffs", "packet_inner_product", "packet_samples"]


@dataclass
class PacketVector:
    """Depth-J coefficients of one packet function (primal or dual)."""

    n: int
    depth: int
    side: str
    coeffs: np.ndarray


def _pow_q_ceil(q: int, length: int) -> int:
    out = 1
    while out < length:
        out *= q
    return out


def _cascade_step(params, taps: np.ndarray, h: np.ndarray, depth: int) -> np.ndarray:
    # two-scale step: h'[gadd(k * q**depth, t)] += sqrt(q) * taps[k] * h[t]
    p, q = params.p, params.q
    block = params.q**depth
    support = _pow_q_ceil(q, len(taps))
    out = np.zeros(max(block * support, len(h)), dtype=complex)
    t = np.arange(len(h), dtype=np.int64)
    for k, a in enumerate(taps):
        if a:
            out[gadd_arrays(p, k * block, t)] += a * h
    out *= math.sqrt(q)
    return out


def packet_coeffs(bank: FilterBank, n: int, depth: int, side: str = "primal") -> PacketVector:
    """Coefficients of packet n at the given depth by the two-scale recursion.

    The base case is the single coefficient [1] at depth 0. The packet is
    reached by cascading the lowpass band down to depth - level(n) and then
    applying the base-q digits of n as band selections, most significant
    first; each step composes translation indices through the carry-free
    group, so tap supports beyond q are handled exactly.
    """
    params = bank.table.params
    if n < 0:
        raise ValueError(f"packet index must be non-negative, got {n}")
    lvl = level_q(params, n)
    if depth < lvl:
        raise ValueError(
            f"depth {depth} too small for packet {n} (needs at least {lvl})"
        )
    taps = bank.taps(side)
    h = np.ones(1, dtype=complex)
    j = 0
    for _ in range(depth - lvl):
        h = _cascade_step(params, taps[0], h, j)
        j += 1
    for band in reversed(digits_q(params, n)):
        h = _cascade_step(params, taps[band], h, j)
        j += 1
    return PacketVector(n=n, depth=depth, side=side, coeffs=h)


def packet_inner_product(bank: FilterBank, n: int, m: int, shift: int, depth: int) -> complex:
    """<packet n, dual packet m translated by u_shift>, computed at depth.

    Exact at finite depth: both packets are finite combinations of the
    depth-level translates, whose primal/dual cross inner products are
    q**-depth times a Kronecker delta. For a validated bank the value is
    delta(n, m) * delta(shift, 0).
    """
    params = bank.table.params
    lvl = max(level_q(params, n), level_q(params, m))
    if depth < lvl:
        raise ValueError(f"depth {depth} too small (needs at least {lvl})")
    if shift < 0:
        raise ValueError(f"shift must be non-negative, got {shift}")
    h = packet_coeffs(bank, n, depth, "primal").coeffs
    g = packet_coeffs(bank, m, depth, "dual").coeffs
    offset = gneg(params, scale_q(params, shift, depth))
    idx = gadd_arrays(params.p, np.arange(len(h), dtype=np.int64), offset)
    ok = idx < len(g)
    total = np.vdot(g[idx[ok]], h[ok])  # conjugates the dual side
    return complex(total) / params.q**depth


def packet_samples(bank: FilterBank, n: int, depth: int) -> np.ndarray:
    """Step-function table of packet n on the q**depth sample cosets.

    Only defined for the canonical bank, whose base function is the
    indicator of the unit ball: the packet is constant on each coset.
    Coefficient index and sample index are base-q digit reversals of each
    other (recursion concatenates high digits, sample points ascend low
    exponents first), so after the internal reversal the table equals the
    character table (index_character(n, sample_point(j, depth)))_j.
    """
    if not is_canonical(bank):
        raise ValueError("sample tables are defined only for the canonical bank")
    params = bank.table.params
    coeffs = packet_coeffs(bank, n, depth).coeffs
    size = params.q**depth
    out = np.empty(size, dtype=complex)
    for j in range(size):
        out[j] = coeffs[digit_reverse_q(params, j, depth)]
    return out
