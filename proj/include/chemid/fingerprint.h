//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_FINGERPRINT_H_
#define CHEMID_FINGERPRINT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "chemid/mol_graph.h"
#include "chemid/pipeline.h"

namespace chemid {

// Key -> count, counts >= 1. Keys 0 and 1 carry a negative and a positive
// total charge respectively and never come out of the hash.
using SparseFingerprint = std::map<std::uint64_t, std::uint32_t>;

inline constexpr std::uint64_t kNegativeChargeKey = 0;
inline constexpr std::uint64_t kPositiveChargeKey = 1;

enum class InvariantMode { kDaylight, kInchified };

// "daylight" / "inchified"; throws std::invalid_argument otherwise.
InvariantMode parse_invariant_mode(std::string_view name);
std::string_view mode_name(InvariantMode mode);

/**
 * 64-bit FNV-1a over the little-endian bytes of each value, followed by the
 * splitmix64 finalizer:
 *   offset 0xcbf29ce484222325, prime 0x100000001b3,
 *   z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27;
 *   z *= 0x94d049bb133111eb; z ^= z >> 31.
 */
std::uint64_t hash_values(std::span<const std::int64_t> values);

// Copies, kekulizes, folds hydrogens and perceives rings: the graph the
// daylight invariants are read from.
MolGraph prepare_raw(const MolGraph &g);

/**
 * Circular count fingerprint. Daylight mode reads the seven ECFP atom
 * invariants from `g` (expected to come from prepare_raw) and uses bond
 * orders, aromatic bonds as 1.5, as the bond class. Inchified mode reads
 * extract_invariants(g). Throws std::invalid_argument for radius < 0.
 */
SparseFingerprint morgan_fingerprint(const MolGraph &g, int radius,
                                     InvariantMode mode);

/**
 * Inchified fingerprint from pipeline invariants: constant bond class, one
 * extra key per stereo bond hashed from its endpoint radius-0 identifiers
 * and BondCIPCode, and the reserved charge key when charge != 0.
 */
SparseFingerprint morgan_fingerprint(const InvariantSet &inv, int radius);

// Σ min / Σ max over the union of keys; 1 when both are empty.
double tanimoto(const SparseFingerprint &a, const SparseFingerprint &b);

// SMILES to fingerprint: prepare_raw for daylight, inchify for inchified.
SparseFingerprint fingerprint_smiles(std::string_view smiles, int radius,
                                     InvariantMode mode,
                                     const PipelineOptions &options = {});

// "key:count key:count ..." with ascending keys.
std::string format_fingerprint(const SparseFingerprint &fp);

// {"key": count, ...} with keys as decimal strings, ascending.
std::string fingerprint_to_json(const SparseFingerprint &fp);

}  // namespace chemid

#endif  // CHEMID_FINGERPRINT_H_
