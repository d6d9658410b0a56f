//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_KEKULIZE_H_
#define CHEMID_KEKULIZE_H_

#include <string>
#include <vector>

#include "chemid/mol_graph.h"

namespace chemid {

class KekulizeError: public Error {
public:
  KekulizeError(const std::string &what, std::vector<int> atoms);

  // Atoms of the aromatic system that has no valid assignment.
  const std::vector<int> &atoms() const { return atoms_; }

private:
  std::vector<int> atoms_;
};

/**
 * Replaces every untagged order-1.5 bond with a single or double bond so that
 * each aromatic atom reaches a valence of its isoelectronic element. Atoms
 * needing a double bond are paired by backtracking over aromatic bonds, lowest
 * atom id first and neighbors in ascending order, so the result is
 * deterministic. Bond::aromatic is left set on the converted bonds.
 */
void kekulize(MolGraph &g);

}  // namespace chemid

#endif  // CHEMID_KEKULIZE_H_
