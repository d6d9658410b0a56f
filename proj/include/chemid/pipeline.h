//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_PIPELINE_H_
#define CHEMID_PIPELINE_H_

#include <string>
#include <vector>

#include "chemid/mol_graph.h"
#include "chemid/patterns.h"

namespace chemid {

// A pipeline step failed; step() is 1..10.
class PipelineError: public Error {
public:
  PipelineError(int step, const std::string &what);

  int step() const { return step_; }

private:
  int step_;
};

struct StepTrace {
  int step = 0;
  int applications = 0;
  // Ascending, without duplicates.
  std::vector<int> touched;
  // Literal rewrites that left an atom outside its standard valences.
  std::vector<std::string> audit;
};

struct AtomInvariants {
  int z = 0;
  int isotope = 0;
  int degree = 0;
  bool in_ring = false;
  int num_hs = 0;
  int num_1h = 0;
  int num_2h = 0;
  int num_3h = 0;
  int cip_code = 0;

  bool operator==(const AtomInvariants &) const = default;
};

struct BondInvariants {
  int begin = 0;  // begin < end
  int end = 0;
  int cip_code = 0;

  bool operator==(const BondInvariants &) const = default;
};

struct InvariantSet {
  int charge = 0;
  // Original ids of the non-phantom atoms, ascending; parallel to atoms.
  std::vector<int> atom_ids;
  std::vector<AtomInvariants> atoms;
  // Sorted by (begin, end).
  std::vector<BondInvariants> bonds;

  bool operator==(const InvariantSet &) const = default;
};

/**
 * JSON object with fields in this order:
 *   {"charge": Q, "atom_ids": [...],
 *    "atoms": [[Z, Isotope, Degree, InRing, NumHs, Num1H, Num2H, Num3H,
 *               CIPCode], ...],
 *    "bonds": [[i, j, BondCIPCode], ...]}
 * InRing is written as 0/1. Compact, no trailing newline.
 */
std::string to_json(const InvariantSet &inv);

std::string to_json(const StepTrace &trace);

// Reads the invariants of the current graph state.
InvariantSet extract_invariants(const MolGraph &g);

struct PipelineOptions {
  // Largest chain repeat count for chain deprotonation, movable charges and
  // tautomers.
  int max_n = 4;
};

// Step 1, charge part. Leaves an already computed total charge alone.
void compute_total_charge(MolGraph &g);

// Step 1, hydrogen folding. Chiral parities and double-bond reference atoms
// are carried over to the folded hydrogens.
StepTrace fold_hydrogens(MolGraph &g);

// Step 2, metal disconnection. Each bond moves its order plus the partner's
// radical count onto the metal's charge.
StepTrace disconnect_metals(MolGraph &g);

// Step 3, table rules 1-5, each to its fixpoint.
StepTrace normalize_charges(MolGraph &g);

// Step 4, charged heteroatoms first, then the alternating-chain form.
StepTrace deprotonate(MolGraph &g, const PipelineOptions &options = {});

// Step 5.
StepTrace neutralize_fragments(MolGraph &g);

// Step 6.
StepTrace reduce_valence(MolGraph &g);

// Step 7. All matches at a given n are collected before any is tagged.
StepTrace detect_movable_charges(MolGraph &g,
                                 const PipelineOptions &options = {});

// Step 8. Sweeps until the set of tautomeric endpoints stops growing.
StepTrace detect_tautomers(MolGraph &g, const PipelineOptions &options = {});

// Step 9.
StepTrace restore_mobile_isotopes(MolGraph &g);

struct InchifyResult {
  MolGraph graph;
  InvariantSet invariants;
  // One entry per step, 1..10.
  std::vector<StepTrace> traces;
};

/**
 * Runs Steps 1-10 on a copy of `g`, repeating the whole pass on its own
 * output until the invariants stop changing (at most 8 passes), so that
 * inchify(inchify(g).graph) reproduces the invariants. Traces sum over the
 * passes that changed something. Errors from any step are rethrown as
 * PipelineError carrying the step index.
 */
InchifyResult inchify(const MolGraph &g, const PipelineOptions &options = {});

}  // namespace chemid

#endif  // CHEMID_PIPELINE_H_
