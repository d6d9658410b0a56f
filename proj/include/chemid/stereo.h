//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_STEREO_H_
#define CHEMID_STEREO_H_

#include <vector>

#include "chemid/mol_graph.h"

namespace chemid {

inline constexpr int kCipR = 1;
inline constexpr int kCipS = -1;
inline constexpr int kCipE = 1;
inline constexpr int kCipZ = -1;

/**
 * Ranks the substituents of `center` by CIP Rules 1a, 1b and 2 on the
 * hierarchical digraph rooted at `center`. Tokens follow
 * chirality_reference(): atom ids, hydrogen tokens and kLonePairToken.
 * Returns one rank per token (higher is higher priority); equal ranks mean
 * the implemented rules do not separate the two substituents. When
 * `exclude` is an atom id, that neighbor is skipped (used for the far end of
 * a double bond).
 */
std::vector<int> cip_ranks(const MolGraph &g, int center,
                           const std::vector<int> &tokens, int exclude = -1);

/**
 * Sets CIPCode for every tetrahedral center with a chiral tag and four
 * distinct-priority substituents, and BondCIPCode for every double bond
 * carrying cis/trans stereo with distinct substituents on both ends. All
 * other labels become 0. Undecidable ties add a diagnostic.
 */
void assign_cip(MolGraph &g);

// Zeroes labels InChI does not treat as possibly stereogenic.
void filter_stereo(MolGraph &g);

}  // namespace chemid

#endif  // CHEMID_STEREO_H_
