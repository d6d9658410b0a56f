//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_SMILES_H_
#define CHEMID_SMILES_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "chemid/mol_graph.h"

namespace chemid {

class SmilesError: public Error {
public:
  SmilesError(const std::string &what, size_t offset);

  // Byte offset of the offending character in the input.
  size_t offset() const { return offset_; }

private:
  size_t offset_;
};

struct SmilesToken {
  enum class Kind {
    kOrganicAtom,
    kBracketAtom,
    kBond,
    kRingClosure,
    kBranchOpen,
    kBranchClose,
    kDot,
  };

  Kind kind = Kind::kDot;
  size_t offset = 0;

  // Atom payload.
  std::string symbol;
  bool aromatic = false;
  int isotope = 0;
  int charge = 0;
  int hcount = 0;
  // As written: '@' is kCounterClockwise, '@@' kClockwise.
  ChiralTag chirality = ChiralTag::kNone;

  // Bond payload: one of - = # : / \ .
  char bond = 0;

  // Ring-closure payload, 0-99.
  int ring = 0;
};

struct ParseOptions {
  // Bracket atoms whose bond orders plus hydrogens exceed this are rejected.
  int max_valence = 8;
};

// Throws SmilesError for lexical errors.
std::vector<SmilesToken> tokenize_smiles(std::string_view text);

/**
 * Parses the supported SMILES subset: organic-subset and bracket atoms,
 * explicit bonds including '/' and '\', ring closures up to %99, branches and
 * dot-separated components.
 *
 * Aromatic bonds get order 1.5 with Bond::aromatic set; explicit [H] atoms stay
 * atoms; tetrahedral marks are stored relative to chirality_reference();
 * directional marks are resolved into BondStereo on double bonds. Throws
 * SmilesError; a partial graph is never returned.
 */
MolGraph parse_smiles(std::string_view text, const ParseOptions &options = {});

/**
 * Writes a non-canonical SMILES for the non-phantom part of `g` with every
 * atom bracketed and every bond symbol explicit. Order-1.5 bonds, including
 * the internal tag set by movable-charge and tautomer detection, are written
 * as ':'; graphs carrying that tag do not round-trip. Stereochemistry and
 * folded isotope bookkeeping are not written.
 */
std::string write_smiles(const MolGraph &g);

}  // namespace chemid

#endif  // CHEMID_SMILES_H_
