//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_PATTERNS_H_
#define CHEMID_PATTERNS_H_

#include <bitset>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemid/element.h"
#include "chemid/mol_graph.h"

namespace chemid {

class FixpointError: public Error {
public:
  using Error::Error;
};

enum class ChargeTest {
  kAny,
  kPositive,  // one or more positive charges
  kNegative,  // one or more negative charges
  kEquals,
};

enum class HTest {
  kAny,
  kH0,
  kNotH0,
  kH1,
  kAtLeast2,
};

struct AtomConstraint {
  // Empty means any element ('*').
  std::bitset<kMaxAtomicNumber + 1> allowed_z;
  ChargeTest charge_test = ChargeTest::kAny;
  int charge_value = 0;
  HTest h_test = HTest::kAny;
  // "!H0,-": at least one hydrogen or a negative charge. Replaces the charge
  // and hydrogen tests when set.
  bool h_or_negative = false;

  static AtomConstraint any();
  static AtomConstraint of(std::initializer_list<int> zs);

  AtomConstraint &charge(ChargeTest test, int value = 0);
  AtomConstraint &hydrogens(HTest test);
  AtomConstraint &hydrogens_or_negative();

  bool is_any_element() const { return allowed_z.none(); }
  bool matches(const Atom &a) const;

  // SMARTS-like rendering, e.g. "[N,O;+;!H0]".
  std::string smarts() const;

  bool operator==(const AtomConstraint &) const = default;
};

enum class BondConstraint {
  kSingle,
  kDouble,
  kSingleOrDouble,
  kSingleOrTagged,
  kDoubleOrTagged,
};

bool bond_matches(BondConstraint c, const Bond &b);
std::string_view bond_constraint_name(BondConstraint c);

struct RepeatUnit {
  // The unit is inserted n times right after this base atom.
  size_t after_atom = 0;
  // Pairs (bonds[k], atoms[k]): bond from the previous atom, then the atom.
  std::vector<BondConstraint> bonds;
  std::vector<AtomConstraint> atoms;
};

/**
 * Linear pattern a_0 b_0 a_1 b_1 ... a_m. The base sequence is the n = 0
 * expansion; for n > 0 the repeat unit is spliced in n times after
 * repeat->after_atom.
 */
struct ChainPattern {
  std::string name;
  std::vector<AtomConstraint> atoms;
  std::vector<BondConstraint> bonds;
  std::optional<RepeatUnit> repeat;
  int n_min = 0;
  int n_max = 0;

  struct Expanded {
    std::vector<AtomConstraint> atoms;
    std::vector<BondConstraint> bonds;
  };

  // Throws std::invalid_argument when n is outside [n_min, n_max] or the
  // pattern has no repeat unit and n > 0.
  Expanded expand(int n) const;

  std::string smarts() const;
};

using Match = std::vector<int>;

/**
 * All simple paths matching `p` expanded at `n`, sorted lexicographically.
 * Phantom atoms never match. When `allowed` is non-null, only atoms with
 * allowed[i] set take part. A path and its reverse are reported once, low end
 * first, when the expanded pattern reads the same in both directions.
 */
std::vector<Match> match_chain(const MolGraph &g, const ChainPattern &p, int n,
                               const std::vector<char> *allowed = nullptr);

struct FoundMatch {
  int n;
  Match atoms;
};

// The first match at the smallest n in the pattern range: lexicographically
// by atom_priority when the graph carries it, else by atom ids.
std::optional<FoundMatch> find_first(const MolGraph &g, const ChainPattern &p,
                                     const std::vector<char> *allowed = nullptr);

using RewriteAction = std::function<void(MolGraph &, const FoundMatch &)>;

struct FixpointResult {
  int applications = 0;
  // Ascending, without duplicates.
  std::vector<int> touched;
};

/**
 * Applies `action` to the first match, rescans, and repeats until nothing
 * matches. A FixpointError is thrown after 10 * |A| applications.
 */
FixpointResult apply_until_fixpoint(MolGraph &g, const ChainPattern &p,
                                    const RewriteAction &action,
                                    const std::vector<char> *allowed = nullptr);

// Element sets of the normalization patterns.
namespace element_sets {

extern const std::vector<int> kNormalizeX;     // rules 1, 2, 5
extern const std::vector<int> kNormalizeC;     // rules 3, 4
extern const std::vector<int> kProtonated;     // charged heteroatom deprotonation
extern const std::vector<int> kProtonDonor;    // chain deprotonation
extern const std::vector<int> kNeutralizable;  // fragment neutralization
extern const std::vector<int> kTautomerEnd;    // tautomer endpoints
extern const std::vector<int> kTautomerChain;  // tautomer chain atoms

}  // namespace element_sets

/**
 * Named patterns used by the pipeline, in application order:
 * "normalize.1" .. "normalize.5", "deprotonate.charged", "deprotonate.chain",
 * "neutralize.positive", "neutralize.negative", "movable_charge",
 * "tautomer". Chain patterns carry n in [0, max_n].
 */
std::vector<ChainPattern> rule_table(int max_n = 4);

// Throws std::out_of_range for unknown names.
const ChainPattern &rule(std::string_view name);

// JSON array describing rule_table(max_n); see docs/rules.json.
std::string rule_table_json(int max_n = 4);

}  // namespace chemid

#endif  // CHEMID_PATTERNS_H_
