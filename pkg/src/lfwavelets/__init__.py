"""Biorthogonal wavelet packet filter banks on carry-free q-adic arithmetic.

The package models points of a positive-characteristic local field as
finite Laurent series over GF(q), embeds non-negative integers as the
translation lattice through their base-q digits, and builds q-band
biorthogonal filter banks, packet functions and critically sampled
multi-level transforms on top, all with exact index/character arithmetic
underneath the floating-point taps.
"""

from .indexing import (
    FieldParams,
    digit_reverse_q,
    digits_q,
    from_digits_q,
    gadd,
    gneg,
    gsub,
    level_q,
    scale_q,
)
from .gf import (
    FieldTable,
    GFqElement,
    constant_term,
    default_modulus,
    from_digit,
    gf_add,
    gf_mul,
    to_digit,
)
from .laurent import (
    FieldElement,
    character,
    character_matrix,
    embed_index,
    index_character,
    lf_add,
    lf_mul,
    prime_power,
    sample_point,
)
from .filterbank import (
    FilterBank,
    ValidationReport,
    canonical_bank,
    is_canonical,
    load_bank,
    mask,
    modulation_matrix,
    random_biorthogonal,
    save_bank,
    validate,
)
from .packets import PacketVector, packet_coeffs, packet_inner_product, packet_samples
from .serde import FileFormatError
from .transform import (
    Decomposition,
    Signal,
    analyze_step,
    decompose,
    full_depth_coefficients,
    load_decomposition,
    load_signal,
    node_split_roundtrip,
    packet_analyze_step,
    packet_level_range,
    packet_synthesize_step,
    reconstruct,
    save_decomposition,
    save_signal,
    synthesize_step,
    weighted_energy,
)

__version__ = "0.1.0"
