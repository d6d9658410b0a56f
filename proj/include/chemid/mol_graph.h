//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_MOL_GRAPH_H_
#define CHEMID_MOL_GRAPH_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemid {

class Error: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/**
 * Bond order stored in half units, so the internal 1.5 "aromatic" tag stays
 * exact under the +1/-1 rewrites of the normalization rules.
 */
class BondOrder {
public:
  constexpr BondOrder() = default;

  static constexpr BondOrder from_halves(int halves) {
    BondOrder o;
    o.halves_ = halves;
    return o;
  }

  static constexpr BondOrder from_units(int units) {
    return from_halves(2 * units);
  }

  constexpr int halves() const { return halves_; }
  constexpr double value() const { return halves_ / 2.0; }
  constexpr bool is_fractional() const { return halves_ % 2 != 0; }

  constexpr BondOrder shifted(int units) const {
    return from_halves(halves_ + 2 * units);
  }

  constexpr auto operator<=>(const BondOrder &) const = default;

private:
  int halves_ = 2;
};

inline constexpr BondOrder kSingleBond = BondOrder::from_halves(2);
inline constexpr BondOrder kAromaticBond = BondOrder::from_halves(3);
inline constexpr BondOrder kDoubleBond = BondOrder::from_halves(4);
inline constexpr BondOrder kTripleBond = BondOrder::from_halves(6);

// Values follow the RDKit chiral type enumeration; 0 is none.
enum class ChiralTag : int {
  kNone = 0,
  kClockwise = 1,
  kCounterClockwise = 2,
};

// Relative configuration of a double bond with respect to Bond::stereo_atoms.
enum class BondStereo : int {
  kNone = 0,
  kCis = 1,
  kTrans = 2,
};

// Directional single-bond mark ('/' is up, '\' is down) read from begin to
// end of the bond.
enum class BondDir : int {
  kNone = 0,
  kUp = 1,
  kDown = 2,
};

struct Atom {
  int z = 0;
  int charge = 0;
  int num_radicals = 0;
  int num_hs = 0;
  int num_1h = 0;
  int num_2h = 0;
  int num_3h = 0;
  // Ids of folded hydrogen isotopes, ascending.
  std::vector<int> set_hs;
  int degree = 0;
  int isotope = 0;
  bool in_ring = false;
  bool phantom = false;
  // Written in lowercase (or bracketed lowercase) in the input.
  bool aromatic = false;
  // Parity relative to chirality_reference() of the atom.
  ChiralTag chiral_tag = ChiralTag::kNone;
  int cip_code = 0;
};

struct Bond {
  int begin = -1;
  int end = -1;
  BondOrder order = kSingleBond;
  // Declared aromatic by the input; survives kekulization.
  bool aromatic = false;
  // Order 1.5 assigned by movable-charge or tautomer detection.
  bool tagged = false;
  BondStereo stereo = BondStereo::kNone;
  std::array<int, 2> stereo_atoms = { -1, -1 };
  BondDir dir = BondDir::kNone;
  int cip_code = 0;
  bool removed = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/**
 * Molecular graph whose atom ids are dense, assigned in input order, and never
 * reused: pipeline steps mark atoms as phantom instead of deleting them. Bond
 * ids are stable as well; removed bonds keep their slot with removed = true.
 */
class MolGraph {
public:
  int add_atom(const Atom &atom);
  int add_bond(int i, int j, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bond_slots() const { return static_cast<int>(bonds_.size()); }
  int num_live_bonds() const;

  Atom &atom(int i) { return atoms_.at(static_cast<size_t>(i)); }
  const Atom &atom(int i) const { return atoms_.at(static_cast<size_t>(i)); }
  Bond &bond(int id) { return bonds_.at(static_cast<size_t>(id)); }
  const Bond &bond(int id) const { return bonds_.at(static_cast<size_t>(id)); }

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<Atom> atoms() { return atoms_; }

  // Sorted by neighbor atom id.
  std::span<const Neighbor> adjacency(int i) const;

  // Ids of bonds still present, ascending.
  std::vector<int> live_bonds() const;

  std::optional<int> find_bond(int i, int j) const;

  // Throws std::invalid_argument when no bond (i, j) exists.
  void remove_bond(int i, int j);

  bool valid_atom(int i) const { return i >= 0 && i < num_atoms(); }

  // Q_A; set once by compute_total_charge and carried unchanged afterwards.
  std::optional<int> total_charge;
  // Folded hydrogen isotopes of the whole molecule, ascending.
  std::vector<int> initial_set_hs;
  // Non-fatal notes from the pipeline (undecidable CIP ties, ...).
  std::vector<std::string> diagnostics;
  // Per-atom classes from atom_classes(); when set, find_first prefers the
  // match with the smallest class sequence over the smallest ids.
  std::vector<int> atom_priority;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// Ascending ids of atoms bonded to i. Throws std::invalid_argument for an
// unknown id.
std::vector<int> neighbors(const MolGraph &g, int i);

void remove_bond(MolGraph &g, int i, int j);

// Connected components over non-phantom atoms, each sorted, ordered by their
// smallest member.
std::vector<std::vector<int>> fragments(const MolGraph &g);

// Sets Atom::in_ring from cycle membership (atoms incident to a non-bridge
// bond).
void perceive_rings(MolGraph &g);

// Size of the smallest cycle through atom i, 0 when i is acyclic.
int smallest_ring_size(const MolGraph &g, int i);

// Sum of incident bond orders in half units.
int bond_order_sum_halves(const MolGraph &g, int i);

// Σ bond orders + NumHs + NumRs, with order 1.5 counted as 1.5.
double valence(const MolGraph &g, int i);

// Σ_i Q_i over all atoms.
int sum_formal_charges(const MolGraph &g);

/**
 * Tokens naming the neighbors of a stereocenter in the canonical order the
 * stored chiral parity refers to: bonded atoms by ascending id, then attached
 * hydrogens ordered by isotope (hydrogen_token()), then the lone pair of a
 * three-coordinate center.
 */
std::vector<int> chirality_reference(const MolGraph &g, int i);

constexpr int hydrogen_token(int isotope) { return -1000 - isotope; }
inline constexpr int kLonePairToken = -1;

constexpr bool is_hydrogen_token(int token) { return token <= -1000; }
constexpr int hydrogen_token_isotope(int token) { return -1000 - token; }

// Elements whose three-coordinate centers may carry a stereogenic lone pair.
bool may_have_stereo_lone_pair(int z);

// Parity (0 even, 1 odd) of the permutation taking `from` to `to`. Both must
// hold the same multiset of tokens.
int permutation_parity(std::span<const int> from, std::span<const int> to);

ChiralTag invert(ChiralTag tag);

// Relabels atom `i` to `perm[i]`, remapping bonds, folded hydrogen sets and
// chiral parities.
MolGraph permute_atoms(const MolGraph &g, std::span<const int> perm);

/**
 * Labeling-independent atom classes, 0-based and dense: atom properties
 * refined by the multiset of (bond order, neighbor class) until the partition
 * is stable. Relabeling the graph relabels the result accordingly.
 */
std::vector<int> atom_classes(const MolGraph &g);

/**
 * Line-oriented dump used by golden tests.
 *
 *   atom <id> Z=<z> Q=<q> H=<NumHs> iso=<isotope> rad=<NumRs> deg=<degree>
 *        ring=<0|1> phantom=<0|1> chiral=<tag> cip=<code> 1H=<n> 2H=<n> 3H=<n>
 *        seths=<id,id,...>
 *   bond <i> <j> order=<1|1.5|2|3> stereo=<0|1|2> cip=<code>
 *
 * Atoms come first in id order, then live bonds in id order (i < j is not
 * normalized; begin/end are printed as stored). A final line "charge=<Q_A>"
 * is emitted when the total charge has been computed.
 */
std::string dump_graph(const MolGraph &g);

std::string format_bond_order(BondOrder order);

}  // namespace chemid

#endif  // CHEMID_MOL_GRAPH_H_
