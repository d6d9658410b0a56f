//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_ELEMENT_H_
#define CHEMID_ELEMENT_H_

#include <span>
#include <string_view>

namespace chemid {

inline constexpr int kMaxAtomicNumber = 118;

// Returns 0 for unknown symbols. Symbols are case sensitive ("Cl", not "CL").
int atomic_number(std::string_view symbol);

std::string_view element_symbol(int z);

// Standard atomic weight; 0 for out-of-range atomic numbers.
double atomic_weight(int z);

// Hydrogen, helium, B, C, N, O, F, Ne, Si, P, S, Cl, Ar, Ge, As, Se, Br, Kr,
// Te, I, Xe, At and Rn; everything else is treated as a metal.
bool is_nonmetal(int z);

// Allowed valences used to derive implicit hydrogens for organic-subset SMILES
// atoms. Empty for atoms outside the organic subset.
std::span<const int> smiles_default_valences(int z);

// Standard valences of the identifier's normalization rules (B3, C4, N3, O2,
// ..., I1/3/5/7). Empty for elements without a table entry.
std::span<const int> standard_valences(int z);

// Valence list for a possibly charged atom, resolved through the isoelectronic
// neutral element (N+ behaves as C, O- as F, ...). Used by kekulization and
// radical counting. Noble gases report {0}.
std::span<const int> isoelectronic_valences(int z, int charge);

}  // namespace chemid

#endif  // CHEMID_ELEMENT_H_
