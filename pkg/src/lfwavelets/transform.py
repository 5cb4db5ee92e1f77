"""Multi-level analysis/synthesis engine with packet-tree expansion.

A signal is a length-q**J coefficient block at refinement level J. One
analysis step maps a level-j block to q critically sampled level-(j-1)
bands through the conjugated dual taps; synthesis mirrors it through the
primal taps and includes the sqrt(q) two-scale factor, so the pair is an
exact identity for validated banks. Detail blocks can be further expanded
into packet nodes with the same kernel. All translation indexing runs
through the carry-free group; filter supports that do not fit the current
block raise instead of folding.

Decompositions are critically sampled: an M-level split of a level-J
signal with packet depth r keeps a lowpass block at level J - M and nodes
(j, nu) for j in [J - M, J) and nu in [q**r, q**(r+1)), each of length
q**(j - r). Raw coefficients follow the two-scale normalization; the
optional "normalized" convention rescales each block by q**((J - s) / 2)
(s the node's dilation scale) so that coefficient 2-norms are comparable
across levels and the full-depth canonical transform is unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .filterbank import FilterBank
from .gf import FieldTable
from .indexing import gadd_arrays
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
    "Signal",
    "Decomposition",
    "analyze_step",
    "synthesize_step",
    "packet_analyze_step",
    "packet_synthesize_step",
    "decompose",
    "reconstruct",
    "packet_level_range",
    "node_split_roundtrip",
    "weighted_energy",
    "full_depth_coefficients",
    "signal_to_dict",
    "signal_from_dict",
    "save_signal",
    "load_signal",
    "decomposition_to_dict",
    "decomposition_from_dict",
    "save_decomposition",
    "load_decomposition",
]


@dataclass
class Signal:
    """Level-J coefficient block of length exactly q**J."""

    table: FieldTable
    level: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"level must be non-negative, got {self.level}")
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        want = self.table.params.q**self.level
        if self.coeffs.shape != (want,):
            raise ValueError(
                f"level-{self.level} signal needs {want} coefficients, "
                f"got shape {self.coeffs.shape}"
            )


@dataclass
class Decomposition:
    """Critically sampled lowpass + packet-node coefficient tree."""

    table: FieldTable
    root_level: int
    mra_depth: int
    packet_depth: int
    lowpass: np.ndarray
    nodes: dict = field(default_factory=dict)
    normalized: bool = False

    def __post_init__(self):
        q = self.table.params.q
        j0, m, r = self.root_level, self.mra_depth, self.packet_depth
        if not 0 <= m <= j0:
            raise ValueError(f"mra_depth {m} out of range [0, {j0}]")
        if m == 0:
            if r != 0:
                raise ValueError("packet_depth must be 0 when mra_depth is 0")
        elif not 0 <= r <= j0 - m:
            raise ValueError(f"packet_depth {r} out of range [0, {j0 - m}]")
        self.lowpass = np.asarray(self.lowpass, dtype=complex)
        if self.lowpass.shape != (q ** (j0 - m),):
            raise ValueError(
                f"lowpass block must have length q**{j0 - m}, "
                f"got shape {self.lowpass.shape}"
            )
        self.nodes = dict(self.nodes)
        expected = {
            (j, nu)
            for j in range(j0 - m, j0)
            for nu in range(q**r, q ** (r + 1))
        }
        got = set(self.nodes)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise ValueError(
                f"node grid mismatch: missing {missing[:4]}, unexpected {extra[:4]}"
            )
        for (j, nu), arr in self.nodes.items():
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != (q ** (j - r),):
                raise ValueError(
                    f"node (scale {j}, packet {nu}) must have length q**{j - r}, "
                    f"got shape {arr.shape}"
                )
            self.nodes[j, nu] = arr

    @classmethod
    def zeros(cls, table, root_level, mra_depth, packet_depth, normalized=False):
        """All-zero decomposition on the (mra_depth, packet_depth) grid."""
        q = table.params.q
        lowpass = np.zeros(q ** (root_level - mra_depth), dtype=complex)
        nodes = {
            (j, nu): np.zeros(q ** (j - packet_depth), dtype=complex)
            for j in range(root_level - mra_depth, root_level)
            for nu in range(q**packet_depth, q ** (packet_depth + 1))
        }
        return cls(table, root_level, mra_depth, packet_depth, lowpass, nodes,
                   normalized)

    def coefficient_count(self) -> int:
        return len(self.lowpass) + sum(len(a) for a in self.nodes.values())


@lru_cache(maxsize=None)
def _index_table(p: int, q: int, blocks: int, support: int) -> np.ndarray:
    # idx[i, t] = gadd(q * i, t); gather table for analysis, scatter for synthesis
    base = (q * np.arange(blocks, dtype=np.int64))[:, None]
    taps = np.arange(support, dtype=np.int64)[None, :]
    idx = gadd_arrays(p, base, taps)
    idx.setflags(write=False)
    return idx


def _check_block(q: int, n: int) -> None:
    m = n
    while m > 1 and m % q == 0:
        m //= q
    if m != 1 or n < q:
        raise ValueError(f"block length {n} is not a positive power of q={q}")


def _split(bank: FilterBank, coeffs: np.ndarray) -> list[np.ndarray]:
    params = bank.table.params
    p, q = params.p, params.q
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs)
    _check_block(q, n)
    support = bank.dual.shape[1]
    if support > n:
        raise ValueError(
            f"dual support {support} exceeds block length {n}; refusing to fold"
        )
    gathered = coeffs[_index_table(p, q, n // q, support)]
    out = gathered @ bank.dual.conj().T / math.sqrt(q)
    return [np.ascontiguousarray(out[:, v]) for v in range(q)]


def _merge(bank: FilterBank, bands) -> np.ndarray:
    params = bank.table.params
    p, q = params.p, params.q
    bands = [np.asarray(b, dtype=complex) for b in bands]
    if len(bands) != q:
        raise ValueError(f"expected {q} bands, got {len(bands)}")
    half = len(bands[0])
    if any(len(b) != half for b in bands):
        raise ValueError(f"bands differ in length: {[len(b) for b in bands]}")
    n = q * half
    support = bank.analysis.shape[1]
    if support > n:
        raise ValueError(
            f"primal support {support} exceeds block length {n}; refusing to fold"
        )
    contrib = np.vstack(bands).T @ bank.analysis  # (half, support)
    out = np.zeros(n, dtype=complex)
    np.add.at(out, _index_table(p, q, half, support), contrib)
    out *= math.sqrt(q)
    return out


def analyze_step(bank: FilterBank, coeffs) -> list[np.ndarray]:
    """One analysis step: level-j block -> [lowpass, detail_1, ..., detail_q-1].

    Band v output k is (1/sqrt(q)) * sum_t coeffs[gadd(q*k, t)] * conj(dual[v, t]).
    """
    return _split(bank, coeffs)


def synthesize_step(bank: FilterBank, bands) -> np.ndarray:
    """Exact inverse of analyze_step for validated banks.

    Output gadd(q*m, t) accumulates sqrt(q) * band_v[m] * analysis[v, t]
    over all bands v and tap positions t.
    """
    return _merge(bank, bands)


def packet_analyze_step(bank: FilterBank, parent) -> list[np.ndarray]:
    """Split one packet node into its q children (same kernel as analyze_step).

    The child produced by band s of a parent with packet index nu carries
    packet index q * nu + s.
    """
    return _split(bank, parent)


def packet_synthesize_step(bank: FilterBank, children) -> np.ndarray:
    """Merge the q children q*nu .. q*nu + q - 1 back into parent nu."""
    return _merge(bank, children)


def _norm_factor(q: int, root_level: int, scale: int) -> float:
    # rescaling applied to a block whose basis functions dilate at `scale`
    return math.sqrt(float(q) ** (root_level - scale))


def decompose(bank: FilterBank, signal: Signal, mra_depth: int, packet_depth: int,
              normalized: bool = False) -> Decomposition:
    """M analysis steps on the lowpass chain, then r packet splits per detail.

    Requires mra_depth <= level, packet_depth <= level - mra_depth (0 when
    mra_depth is 0), and filter supports that fit every block reached; the
    result is critically sampled.
    """
    if bank.table != signal.table:
        raise ValueError("signal and filter bank use different field tables")
    params = bank.table.params
    q = params.q
    level, m, r = signal.level, mra_depth, packet_depth
    if not 0 <= m <= level:
        raise ValueError(f"mra_depth {m} out of range [0, {level}]")
    if m == 0 and r != 0:
        raise ValueError("packet_depth must be 0 when mra_depth is 0")
    if m > 0 and not 0 <= r <= level - m:
        raise ValueError(f"packet_depth {r} out of range [0, {level - m}]")
    support = bank.dual.shape[1]
    if m > 0 and support > q ** (level - m + 1):
        raise ValueError(
            f"dual support {support} exceeds the smallest analysis block "
            f"q**{level - m + 1}"
        )
    if r > 0 and support > q ** (level - m - r + 1):
        raise ValueError(
            f"dual support {support} exceeds the smallest packet block "
            f"q**{level - m - r + 1}"
        )

    low = signal.coeffs.copy()
    details: dict[int, list[np.ndarray]] = {}
    for j in range(level, level - m, -1):
        bands = _split(bank, low)
        low = bands[0]
        details[j - 1] = bands[1:]

    nodes: dict[tuple[int, int], np.ndarray] = {}
    for j, bands in details.items():
        tree = {nu: arr for nu, arr in enumerate(bands, start=1)}
        for _ in range(r):
            nxt = {}
            for nu, arr in tree.items():
                for s, child in enumerate(_split(bank, arr)):
                    nxt[q * nu + s] = child
            tree = nxt
        for nu, arr in tree.items():
            nodes[j, nu] = arr

    dec = Decomposition(bank.table, level, m, r, low, nodes, normalized=False)
    if normalized:
        _rescale(dec, forward=True)
        dec.normalized = True
    return dec


def _rescale(dec: Decomposition, forward: bool) -> None:
    q = dec.table.params.q
    f = _norm_factor(q, dec.root_level, dec.root_level - dec.mra_depth)
    dec.lowpass = dec.lowpass * (f if forward else 1.0 / f)
    for (j, nu), arr in dec.nodes.items():
        f = _norm_factor(q, dec.root_level, j - dec.packet_depth)
        dec.nodes[j, nu] = arr * (f if forward else 1.0 / f)


def reconstruct(bank: FilterBank, dec: Decomposition) -> Signal:
    """Invert decompose: merge packet nodes, then synthesize up to the root."""
    if bank.table != dec.table:
        raise ValueError("decomposition and filter bank use different field tables")
    q = bank.table.params.q
    level, m, r = dec.root_level, dec.mra_depth, dec.packet_depth
    if dec.normalized:
        work = Decomposition(dec.table, level, m, r, dec.lowpass,
                             dict(dec.nodes), normalized=False)
        _rescale(work, forward=False)
        dec = work

    merged: dict[int, list[np.ndarray]] = {}
    for j in range(level - m, level):
        tree = {nu: dec.nodes[j, nu] for nu in range(q**r, q ** (r + 1))}
        for _ in range(r):
            nxt = {}
            parents = sorted({nu // q for nu in tree})
            for pa in parents:
                nxt[pa] = _merge(bank, [tree[q * pa + s] for s in range(q)])
            tree = nxt
        merged[j] = [tree[nu] for nu in range(1, q)]

    low = dec.lowpass.copy()
    for j in range(level - m, level):
        low = _merge(bank, [low] + merged[j])
    return Signal(dec.table, level, low)


def packet_level_range(q: int, ell: int) -> range:
    """Packet indices whose unit-scale translates span the ell-times dilated
    wavelet space: the contiguous block [q**ell, q**(ell + 1)).

    The ell = 0 block is {1, ..., q - 1} (the base wavelets); together with
    {0} the blocks for ell <= L partition [0, q**(L + 1)).
    """
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if ell < 0:
        raise ValueError(f"ell must be non-negative, got {ell}")
    return range(q**ell, q ** (ell + 1))


def node_split_roundtrip(bank: FilterBank, data) -> float:
    """Max deviation of merge(split(data)) from data: certifies the one-node
    direct-sum splitting at the coefficient level."""
    data = np.asarray(data, dtype=complex)
    back = _merge(bank, _split(bank, data))
    return float(np.max(np.abs(back - data))) if len(data) else 0.0


def weighted_energy(obj) -> float:
    """Scale-weighted squared norm: sum over blocks of q**(-s) * ||coeffs||^2
    with s the block's dilation scale.

    Matches the true squared L2 norm for orthonormal (dual == primal,
    validated) banks and is then conserved by decompose; no conservation is
    asserted for merely biorthogonal banks.
    """
    if isinstance(obj, Signal):
        q = obj.table.params.q
        return float(q ** (-obj.level) * np.sum(np.abs(obj.coeffs) ** 2))
    if isinstance(obj, Decomposition):
        dec = obj
        if dec.normalized:
            work = Decomposition(dec.table, dec.root_level, dec.mra_depth,
                                 dec.packet_depth, dec.lowpass, dict(dec.nodes),
                                 normalized=False)
            _rescale(work, forward=False)
            dec = work
        q = dec.table.params.q
        total = q ** (-(dec.root_level - dec.mra_depth)) * np.sum(
            np.abs(dec.lowpass) ** 2
        )
        for (j, nu), arr in dec.nodes.items():
            total += q ** (-(j - dec.packet_depth)) * np.sum(np.abs(arr) ** 2)
        return float(total)
    raise TypeError(f"expected Signal or Decomposition, got {type(obj).__name__}")


def full_depth_coefficients(bank: FilterBank, signal: Signal) -> np.ndarray:
    """Fully split transform: every node expanded to length-1 blocks.

    Entry nu is the coefficient of the unit-scale packet nu; for the
    canonical bank this is the generalized Walsh-Hadamard transform of the
    signal up to the per-level normalization and the base-q digit reversal
    that relates coefficient and sample indexing.
    """
    q = bank.table.params.q
    level = signal.level
    if level == 0:
        return signal.coeffs.copy()
    dec = decompose(bank, signal, level, 0)
    out = np.empty(q**level, dtype=complex)
    out[0] = dec.lowpass[0]
    for (j, nu), arr in dec.nodes.items():
        tree = {nu: arr}
        for _ in range(j):
            nxt = {}
            for v, a in tree.items():
                for s, child in enumerate(_split(bank, a)):
                    nxt[q * v + s] = child
            tree = nxt
        for v, a in tree.items():
            out[v] = a[0]
    return out


def signal_to_dict(sig: Signal) -> dict:
    doc = {"kind": "signal"}
    doc.update(header_from_table(sig.table))
    doc["level"] = sig.level
    doc["coeffs"] = pairs_from_array(sig.coeffs)
    return doc


def signal_from_dict(doc: dict) -> Signal:
    table = table_from_header(doc, "signal")
    if "level" not in doc or "coeffs" not in doc:
        raise FileFormatError("signal: missing level or coeffs")
    coeffs = array_from_pairs(doc["coeffs"], "signal coeffs")
    try:
        return Signal(table, int(doc["level"]), coeffs)
    except ValueError as exc:
        raise FileFormatError(f"signal: {exc}") from exc


def save_signal(sig: Signal, path) -> None:
    dump_json(path, signal_to_dict(sig))


def load_signal(path) -> Signal:
    return signal_from_dict(load_json(path, "signal"))


def decomposition_to_dict(dec: Decomposition) -> dict:
    doc = {"kind": "decomposition"}
    doc.update(header_from_table(dec.table))
    doc.update(
        root_level=dec.root_level,
        mra_depth=dec.mra_depth,
        packet_depth=dec.packet_depth,
        normalized=dec.normalized,
        lowpass=pairs_from_array(dec.lowpass),
        nodes=[
            {"scale": j, "packet": nu, "coeffs": pairs_from_array(arr)}
            for (j, nu), arr in sorted(dec.nodes.items())
        ],
    )
    return doc


def decomposition_from_dict(doc: dict) -> Decomposition:
    table = table_from_header(doc, "decomposition")
    for key in ("root_level", "mra_depth", "packet_depth", "lowpass", "nodes"):
        if key not in doc:
            raise FileFormatError(f"decomposition: missing {key}")
    nodes = {}
    for rec in doc["nodes"]:
        try:
            key = (int(rec["scale"]), int(rec["packet"]))
            coeffs = rec["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FileFormatError(f"decomposition: malformed node record {rec!r}") from exc
        if key in nodes:
            raise FileFormatError(f"decomposition: duplicate node {key}")
        nodes[key] = array_from_pairs(coeffs, f"node {key}")
    try:
        return Decomposition(
            table,
            int(doc["root_level"]),
            int(doc["mra_depth"]),
            int(doc["packet_depth"]),
            array_from_pairs(doc["lowpass"], "lowpass"),
            nodes,
            normalized=bool(doc.get("normalized", False)),
        )
    except ValueError as exc:
        raise FileFormatError(f"decomposition: {exc}") from exc


def save_decomposition(dec: Decomposition, path) -> None:
    dump_json(path, decomposition_to_dict(dec))


def load_decomposition(path) -> Decomposition:
    return decomposition_from_dict(load_json(path, "decomposition"))
