//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/patterns.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace chemid {

namespace element_sets {

const std::vector<int> kNormalizeX = { 6, 7, 8, 15, 16, 33, 34, 51, 52, 53 };
const std::vector<int> kNormalizeC = { 6, 8, 15, 16 };
const std::vector<int> kProtonated = { 7, 8, 9, 15, 16, 17, 34, 35, 52, 53 };
const std::vector<int> kProtonDonor = { 7, 8, 16, 34, 52 };
const std::vector<int> kNeutralizable = { 8, 9, 15, 16, 17, 35, 53 };
const std::vector<int> kTautomerEnd = { 7, 8, 16, 34, 52 };
const std::vector<int> kTautomerChain = { 6,  7,  16, 15, 51, 33,
                                          34, 52, 35, 17, 53 };

}  // namespace element_sets

AtomConstraint AtomConstraint::any() {
  return {};
}

AtomConstraint AtomConstraint::of(std::initializer_list<int> zs) {
  AtomConstraint c;
  for (int z: zs) {
    c.allowed_z.set(static_cast<size_t>(z));
  }
  return c;
}

AtomConstraint &AtomConstraint::charge(ChargeTest test, int value) {
  charge_test = test;
  charge_value = value;
  return *this;
}

AtomConstraint &AtomConstraint::hydrogens(HTest test) {
  h_test = test;
  return *this;
}

AtomConstraint &AtomConstraint::hydrogens_or_negative() {
  h_or_negative = true;
  return *this;
}

bool AtomConstraint::matches(const Atom &a) const {
  if (a.phantom) {
    return false;
  }
  if (!is_any_element()
      && (a.z < 0 || a.z > kMaxAtomicNumber
          || !allowed_z.test(static_cast<size_t>(a.z)))) {
    return false;
  }
  if (h_or_negative) {
    return a.num_hs > 0 || a.charge < 0;
  }
  switch (charge_test) {
  case ChargeTest::kAny:
    break;
  case ChargeTest::kPositive:
    if (a.charge <= 0) {
      return false;
    }
    break;
  case ChargeTest::kNegative:
    if (a.charge >= 0) {
      return false;
    }
    break;
  case ChargeTest::kEquals:
    if (a.charge != charge_value) {
      return false;
    }
    break;
  }
  switch (h_test) {
  case HTest::kAny:
    return true;
  case HTest::kH0:
    return a.num_hs == 0;
  case HTest::kNotH0:
    return a.num_hs > 0;
  case HTest::kH1:
    return a.num_hs == 1;
  case HTest::kAtLeast2:
    return a.num_hs >= 2;
  }
  return true;
}

std::string AtomConstraint::smarts() const {
  std::vector<std::string> parts;
  if (is_any_element()) {
    parts.emplace_back("*");
  } else {
    std::string elems;
    for (int z = 1; z <= kMaxAtomicNumber; ++z) {
      if (allowed_z.test(static_cast<size_t>(z))) {
        elems += (elems.empty() ? "" : ",") + std::string(element_symbol(z));
      }
    }
    parts.push_back(elems);
  }
  if (h_or_negative) {
    parts.emplace_back("!H0,-");
  } else {
    switch (charge_test) {
    case ChargeTest::kPositive:
      parts.emplace_back("+");
      break;
    case ChargeTest::kNegative:
      parts.emplace_back("-");
      break;
    case ChargeTest::kEquals:
      parts.push_back((charge_value < 0 ? "-" : "+")
                      + std::to_string(std::abs(charge_value)));
      break;
    case ChargeTest::kAny:
      break;
    }
    switch (h_test) {
    case HTest::kH0:
      parts.emplace_back("H0");
      break;
    case HTest::kNotH0:
      parts.emplace_back("!H0");
      break;
    case HTest::kH1:
      parts.emplace_back("H1");
      break;
    case HTest::kAtLeast2:
      parts.emplace_back("!H0;!H1");
      break;
    case HTest::kAny:
      break;
    }
  }
  if (parts.size() == 1 && is_any_element()) {
    return "*";
  }
  std::string s = "[";
  for (size_t k = 0; k < parts.size(); ++k) {
    s += (k ? ";" : "") + parts[k];
  }
  return s + "]";
}

bool bond_matches(BondConstraint c, const Bond &b) {
  const bool tagged = b.tagged && b.order == kAromaticBond;
  const bool single = !tagged && b.order == kSingleBond;
  const bool dbl = !tagged && b.order == kDoubleBond;
  switch (c) {
  case BondConstraint::kSingle:
    return single;
  case BondConstraint::kDouble:
    return dbl;
  case BondConstraint::kSingleOrDouble:
    return single || dbl;
  case BondConstraint::kSingleOrTagged:
    return single || tagged;
  case BondConstraint::kDoubleOrTagged:
    return dbl || tagged;
  }
  return false;
}

std::string_view bond_constraint_name(BondConstraint c) {
  switch (c) {
  case BondConstraint::kSingle:
    return "single";
  case BondConstraint::kDouble:
    return "double";
  case BondConstraint::kSingleOrDouble:
    return "single-or-double";
  case BondConstraint::kSingleOrTagged:
    return "single-or-tagged";
  case BondConstraint::kDoubleOrTagged:
    return "double-or-tagged";
  }
  return "";
}

namespace {

std::string_view bond_smarts(BondConstraint c) {
  switch (c) {
  case BondConstraint::kSingle:
    return "-";
  case BondConstraint::kDouble:
    return "=";
  case BondConstraint::kSingleOrDouble:
    return "-,=";
  case BondConstraint::kSingleOrTagged:
    return "-,:";
  case BondConstraint::kDoubleOrTagged:
    return "=,:";
  }
  return "";
}

}  // namespace

ChainPattern::Expanded ChainPattern::expand(int n) const {
  if (n < n_min || n > n_max || (n > 0 && !repeat)) {
    throw std::invalid_argument("pattern " + name + ": n out of range");
  }
  Expanded e;
  const size_t split = repeat ? repeat->after_atom + 1 : atoms.size();
  e.atoms.assign(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(split));
  e.bonds.assign(bonds.begin(),
                 bonds.begin() + static_cast<std::ptrdiff_t>(split - 1));
  for (int k = 0; k < n; ++k) {
    for (size_t u = 0; u < repeat->atoms.size(); ++u) {
      e.bonds.push_back(repeat->bonds[u]);
      e.atoms.push_back(repeat->atoms[u]);
    }
  }
  for (size_t k = split; k < atoms.size(); ++k) {
    e.bonds.push_back(bonds[k - 1]);
    e.atoms.push_back(atoms[k]);
  }
  return e;
}

std::string ChainPattern::smarts() const {
  std::string s;
  for (size_t k = 0; k < atoms.size(); ++k) {
    if (k > 0) {
      s += bond_smarts(bonds[k - 1]);
    }
    s += atoms[k].smarts();
    if (repeat && k == repeat->after_atom) {
      s += "(";
      for (size_t u = 0; u < repeat->atoms.size(); ++u) {
        s += bond_smarts(repeat->bonds[u]);
        s += repeat->atoms[u].smarts();
      }
      s += ")n";
    }
  }
  return s;
}

namespace {

class PathSearch {
public:
  PathSearch(const MolGraph &g, const ChainPattern::Expanded &e,
             const std::vector<char> *allowed, bool first_only)
      : g_(g), e_(e), allowed_(allowed), first_only_(first_only),
        on_path_(static_cast<size_t>(g.num_atoms()), 0) {
    std::vector<AtomConstraint> ra(e.atoms.rbegin(), e.atoms.rend());
    std::vector<BondConstraint> rb(e.bonds.rbegin(), e.bonds.rend());
    palindrome_ = e.atoms.size() > 1 && ra == e.atoms && rb == e.bonds;
  }

  std::vector<Match> run() {
    for (int i = 0; i < g_.num_atoms() && !done(); ++i) {
      if (usable(i, 0)) {
        push(i);
        extend();
        pop(i);
      }
    }
    return std::move(out_);
  }

private:
  bool done() const { return first_only_ && !out_.empty(); }

  bool usable(int i, size_t k) const {
    if (allowed_ && !(*allowed_)[static_cast<size_t>(i)]) {
      return false;
    }
    return e_.atoms[k].matches(g_.atom(i));
  }

  void push(int i) {
    path_.push_back(i);
    on_path_[static_cast<size_t>(i)] = 1;
  }

  void pop(int i) {
    path_.pop_back();
    on_path_[static_cast<size_t>(i)] = 0;
  }

  void extend() {
    const size_t k = path_.size();
    if (k == e_.atoms.size()) {
      if (!palindrome_ || path_.front() < path_.back()) {
        out_.push_back(path_);
      }
      return;
    }
    for (const Neighbor &n: g_.adjacency(path_.back())) {
      if (done()) {
        return;
      }
      if (on_path_[static_cast<size_t>(n.atom)]
          || !bond_matches(e_.bonds[k - 1], g_.bond(n.bond))
          || !usable(n.atom, k)) {
        continue;
      }
      push(n.atom);
      extend();
      pop(n.atom);
    }
  }

  const MolGraph &g_;
  const ChainPattern::Expanded &e_;
  const std::vector<char> *allowed_;
  bool first_only_;
  bool palindrome_ = false;
  std::vector<char> on_path_;
  Match path_;
  std::vector<Match> out_;
};

}  // namespace

std::vector<Match> match_chain(const MolGraph &g, const ChainPattern &p, int n,
                               const std::vector<char> *allowed) {
  const ChainPattern::Expanded e = p.expand(n);
  return PathSearch(g, e, allowed, false).run();
}

std::optional<FoundMatch> find_first(const MolGraph &g, const ChainPattern &p,
                                     const std::vector<char> *allowed) {
  const std::vector<int> &priority = g.atom_priority;
  const bool ranked = priority.size() == static_cast<size_t>(g.num_atoms());
  for (int n = p.n_min; n <= p.n_max; ++n) {
    const ChainPattern::Expanded e = p.expand(n);
    if (!ranked) {
      auto found = PathSearch(g, e, allowed, true).run();
      if (!found.empty()) {
        return FoundMatch { n, std::move(found.front()) };
      }
      continue;
    }
    auto all = PathSearch(g, e, allowed, false).run();
    if (all.empty()) {
      continue;
    }
    auto key = [&](const Match &m) {
      std::vector<int> k;
      k.reserve(m.size());
      for (int i: m) {
        k.push_back(priority[static_cast<size_t>(i)]);
      }
      return k;
    };
    // Ties fall back to id order, which `all` already has.
    size_t best = 0;
    std::vector<int> best_key = key(all[0]);
    for (size_t k = 1; k < all.size(); ++k) {
      std::vector<int> kk = key(all[k]);
      if (kk < best_key) {
        best = k;
        best_key = std::move(kk);
      }
    }
    return FoundMatch { n, std::move(all[best]) };
  }
  return std::nullopt;
}

FixpointResult apply_until_fixpoint(MolGraph &g, const ChainPattern &p,
                                    const RewriteAction &action,
                                    const std::vector<char> *allowed) {
  FixpointResult result;
  const int cap = 10 * std::max(1, g.num_atoms());
  while (auto found = find_first(g, p, allowed)) {
    if (result.applications >= cap) {
      throw FixpointError("pattern " + p.name + " did not reach a fixpoint after "
                          + std::to_string(cap) + " applications");
    }
    action(g, *found);
    ++result.applications;
    result.touched.insert(result.touched.end(), found->atoms.begin(),
                          found->atoms.end());
  }
  std::sort(result.touched.begin(), result.touched.end());
  result.touched.erase(std::unique(result.touched.begin(), result.touched.end()),
                       result.touched.end());
  return result;
}

namespace {

AtomConstraint of_set(const std::vector<int> &zs) {
  AtomConstraint c;
  for (int z: zs) {
    c.allowed_z.set(static_cast<size_t>(z));
  }
  return c;
}

ChainPattern single_atom(std::string name, AtomConstraint a) {
  ChainPattern p;
  p.name = std::move(name);
  p.atoms = { std::move(a) };
  return p;
}

}  // namespace

std::vector<ChainPattern> rule_table(int max_n) {
  using namespace element_sets;
  using B = BondConstraint;
  const AtomConstraint any = AtomConstraint::any();
  auto x_neg = of_set(kNormalizeX).charge(ChargeTest::kNegative);
  auto x_pos = of_set(kNormalizeX).charge(ChargeTest::kPositive);
  auto c_pos = of_set(kNormalizeC).charge(ChargeTest::kPositive);
  auto n_any = AtomConstraint::of({ 7 });

  std::vector<ChainPattern> t;

  t.push_back({ "normalize.1", { x_neg, x_pos }, { B::kSingleOrDouble }, std::nullopt });
  t.push_back({ "normalize.2", { x_neg, any, x_pos }, { B::kSingle, B::kDouble }, std::nullopt });
  t.push_back({ "normalize.3",
                { c_pos, AtomConstraint::of({ 7 }).hydrogens(HTest::kNotH0) },
                { B::kSingle }, std::nullopt });
  t.push_back({ "normalize.4", { c_pos, any, n_any }, { B::kDouble, B::kSingle }, std::nullopt });
  t.push_back({ "normalize.5",
                { AtomConstraint::of({ 7 }).charge(ChargeTest::kPositive), any, any,
                  AtomConstraint::of({ 7 })
                      .charge(ChargeTest::kNegative)
                      .hydrogens(HTest::kNotH0) },
                { B::kSingle, B::kDouble, B::kSingle }, std::nullopt });

  t.push_back(single_atom("deprotonate.charged", of_set(kProtonated)
                                                     .hydrogens(HTest::kNotH0)
                                                     .charge(ChargeTest::kPositive)));

  ChainPattern chain;
  chain.name = "deprotonate.chain";
  chain.atoms = { of_set(kProtonDonor).hydrogens(HTest::kNotH0), any,
                  AtomConstraint::of({ 7 }).charge(ChargeTest::kPositive) };
  chain.bonds = { B::kSingle, B::kDouble };
  chain.repeat = RepeatUnit { 1, { B::kDouble, B::kSingle }, { any, any } };
  chain.n_max = max_n;
  t.push_back(chain);

  t.push_back(single_atom("neutralize.positive",
                          of_set(kNeutralizable).hydrogens(HTest::kH1)));
  t.push_back(single_atom("neutralize.negative",
                          of_set(kNeutralizable).charge(ChargeTest::kNegative)));

  ChainPattern movable;
  movable.name = "movable_charge";
  movable.atoms = { AtomConstraint::of({ 7 })
                        .hydrogens(HTest::kH0)
                        .charge(ChargeTest::kEquals, 1),
                    any, AtomConstraint::of({ 7 }).hydrogens(HTest::kH0) };
  movable.bonds = { B::kDouble, B::kSingle };
  movable.repeat = RepeatUnit { 1, { B::kSingle, B::kDouble }, { any, any } };
  movable.n_max = max_n;
  t.push_back(movable);

  ChainPattern taut;
  taut.name = "tautomer";
  taut.atoms = { of_set(kTautomerEnd), of_set(kTautomerChain),
                 of_set(kTautomerEnd).hydrogens_or_negative() };
  taut.bonds = { B::kDoubleOrTagged, B::kSingleOrTagged };
  taut.repeat = RepeatUnit { 1,
                             { B::kSingleOrTagged, B::kDoubleOrTagged },
                             { of_set(kTautomerChain), of_set(kTautomerChain) } };
  taut.n_max = max_n;
  t.push_back(taut);

  return t;
}

const ChainPattern &rule(std::string_view name) {
  static const std::vector<ChainPattern> table = rule_table();
  for (const ChainPattern &p: table) {
    if (p.name == name) {
      return p;
    }
  }
  throw std::out_of_range("unknown rule " + std::string(name));
}

namespace {

nlohmann::ordered_json constraint_json(const AtomConstraint &c) {
  nlohmann::ordered_json j;
  auto elements = nlohmann::ordered_json::array();
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (c.allowed_z.test(static_cast<size_t>(z))) {
      elements.push_back(element_symbol(z));
    }
  }
  j["elements"] = c.is_any_element() ? nlohmann::ordered_json("*") : elements;
  if (c.h_or_negative) {
    j["charge"] = "any";
    j["hydrogens"] = "any";
    j["charge_or_hydrogens"] = "!H0,-";
    return j;
  }
  switch (c.charge_test) {
  case ChargeTest::kAny:
    j["charge"] = "any";
    break;
  case ChargeTest::kPositive:
    j["charge"] = ">0";
    break;
  case ChargeTest::kNegative:
    j["charge"] = "<0";
    break;
  case ChargeTest::kEquals:
    j["charge"] = "=" + std::to_string(c.charge_value);
    break;
  }
  switch (c.h_test) {
  case HTest::kAny:
    j["hydrogens"] = "any";
    break;
  case HTest::kH0:
    j["hydrogens"] = "H0";
    break;
  case HTest::kNotH0:
    j["hydrogens"] = "!H0";
    break;
  case HTest::kH1:
    j["hydrogens"] = "H1";
    break;
  case HTest::kAtLeast2:
    j["hydrogens"] = ">=2";
    break;
  }
  j["charge_or_hydrogens"] = nullptr;
  return j;
}

}  // namespace

std::string rule_table_json(int max_n) {
  auto out = nlohmann::ordered_json::array();
  for (const ChainPattern &p: rule_table(max_n)) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["smarts"] = p.smarts();
    j["atoms"] = nlohmann::ordered_json::array();
    for (const auto &a: p.atoms) {
      j["atoms"].push_back(constraint_json(a));
    }
    j["bonds"] = nlohmann::ordered_json::array();
    for (BondConstraint b: p.bonds) {
      j["bonds"].push_back(bond_constraint_name(b));
    }
    if (p.repeat) {
      nlohmann::ordered_json r;
      r["after_atom"] = p.repeat->after_atom;
      r["bonds"] = nlohmann::ordered_json::array();
      for (BondConstraint b: p.repeat->bonds) {
        r["bonds"].push_back(bond_constraint_name(b));
      }
      r["atoms"] = nlohmann::ordered_json::array();
      for (const auto &a: p.repeat->atoms) {
        r["atoms"].push_back(constraint_json(a));
      }
      j["repeat"] = r;
    } else {
      j["repeat"] = nullptr;
    }
    j["n_min"] = p.n_min;
    j["n_max"] = p.n_max;
    out.push_back(j);
  }
  return out.dump(2) + "\n";
}

}  // namespace chemid
