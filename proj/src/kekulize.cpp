//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/kekulize.h"

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "chemid/element.h"

namespace chemid {

KekulizeError::KekulizeError(const std::string &what, std::vector<int> atoms)
    : Error(what), atoms_(std::move(atoms)) { }

namespace {

bool is_kekule_target(const Bond &b) {
  return !b.removed && !b.tagged && b.order == kAromaticBond;
}

std::string describe(const std::vector<int> &atoms) {
  std::string s = "cannot kekulize aromatic system {";
  for (size_t k = 0; k < atoms.size(); ++k) {
    s += (k ? "," : "") + std::to_string(atoms[k]);
  }
  return s + "}";
}

// -1 when no valence of the isoelectronic element fits.
int double_bond_need(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  int used = a.num_hs + a.num_radicals;
  for (const Neighbor &n: g.adjacency(i)) {
    const Bond &b = g.bond(n.bond);
    used += is_kekule_target(b) ? 1 : b.order.halves() / 2;
  }
  for (int v: isoelectronic_valences(a.z, a.charge)) {
    if (v >= used) {
      return v - used <= 1 ? v - used : -1;
    }
  }
  return -1;
}

class Matcher {
public:
  // `needy` is visited in order; candidate partners are tried by rank.
  Matcher(const MolGraph &g, const std::vector<int> &needy, const std::vector<int> &rank)
      : g_(g), needy_(needy), rank_(rank),
        is_needy_(static_cast<size_t>(g.num_atoms()), 0),
        mate_(static_cast<size_t>(g.num_atoms()), -1) {
    for (int i: needy) {
      is_needy_[static_cast<size_t>(i)] = 1;
    }
  }

  bool solve() { return extend(0); }

  // Bond ids chosen as double bonds.
  std::vector<int> doubles() const {
    std::vector<int> out;
    for (int i: needy_) {
      const int j = mate_[static_cast<size_t>(i)];
      if (i < j) {
        out.push_back(*g_.find_bond(i, j));
      }
    }
    return out;
  }

private:
  bool free_needy(int j) const {
    return is_needy_[static_cast<size_t>(j)] && mate_[static_cast<size_t>(j)] < 0;
  }

  bool has_option(int i) const {
    for (const Neighbor &n: g_.adjacency(i)) {
      if (is_kekule_target(g_.bond(n.bond)) && free_needy(n.atom)) {
        return true;
      }
    }
    return false;
  }

  // Every unmatched needy atom still has an unmatched needy partner.
  bool feasible(size_t from) const {
    for (size_t k = from; k < needy_.size(); ++k) {
      const int i = needy_[k];
      if (mate_[static_cast<size_t>(i)] < 0 && !has_option(i)) {
        return false;
      }
    }
    return true;
  }

  bool extend(size_t k) {
    while (k < needy_.size() && mate_[static_cast<size_t>(needy_[k])] >= 0) {
      ++k;
    }
    if (k == needy_.size()) {
      return true;
    }
    const int i = needy_[k];
    std::vector<int> partners;
    for (const Neighbor &n: g_.adjacency(i)) {
      if (is_kekule_target(g_.bond(n.bond)) && free_needy(n.atom)) {
        partners.push_back(n.atom);
      }
    }
    std::sort(partners.begin(), partners.end(), [&](int a, int b) {
      return std::tie(rank_[static_cast<size_t>(a)], a)
             < std::tie(rank_[static_cast<size_t>(b)], b);
    });
    for (int j: partners) {
      mate_[static_cast<size_t>(i)] = j;
      mate_[static_cast<size_t>(j)] = i;
      if (feasible(k + 1) && extend(k + 1)) {
        return true;
      }
      mate_[static_cast<size_t>(i)] = -1;
      mate_[static_cast<size_t>(j)] = -1;
    }
    return false;
  }

  const MolGraph &g_;
  const std::vector<int> &needy_;
  const std::vector<int> &rank_;
  std::vector<char> is_needy_;
  std::vector<int> mate_;
};

// Connected components over kekulization-target bonds, each sorted.
std::vector<std::vector<int>> aromatic_systems(const MolGraph &g) {
  std::vector<std::vector<int>> systems;
  std::vector<char> seen(static_cast<size_t>(g.num_atoms()), 0);
  for (int id: g.live_bonds()) {
    const Bond &start = g.bond(id);
    if (!is_kekule_target(start) || seen[static_cast<size_t>(start.begin)]) {
      continue;
    }
    std::vector<int> comp;
    std::vector<int> stack { start.begin };
    seen[static_cast<size_t>(start.begin)] = 1;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      comp.push_back(a);
      for (const Neighbor &n: g.adjacency(a)) {
        if (is_kekule_target(g.bond(n.bond))
            && !seen[static_cast<size_t>(n.atom)]) {
          seen[static_cast<size_t>(n.atom)] = 1;
          stack.push_back(n.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    systems.push_back(std::move(comp));
  }
  return systems;
}

}  // namespace

void kekulize(MolGraph &g) {
  const auto systems = aromatic_systems(g);
  if (systems.empty()) {
    return;
  }
  // Search order follows atom classes rather than indices, so relabeling the
  // input does not change which Kekule form is chosen.
  const std::vector<int> rank = atom_classes(g);
  for (const auto &system: systems) {
    std::vector<int> needy;
    for (int i: system) {
      const int need = double_bond_need(g, i);
      if (need < 0) {
        throw KekulizeError(describe(system) + ": valence of atom "
                                + std::to_string(i) + " cannot be satisfied",
                            system);
      }
      if (need == 1) {
        needy.push_back(i);
      }
    }

    std::sort(needy.begin(), needy.end(), [&](int a, int b) {
      return std::tie(rank[static_cast<size_t>(a)], a)
             < std::tie(rank[static_cast<size_t>(b)], b);
    });
    Matcher m(g, needy, rank);
    if (!m.solve()) {
      throw KekulizeError(describe(system), system);
    }
    const std::vector<int> doubles = m.doubles();
    for (int i: system) {
      for (const Neighbor &n: g.adjacency(i)) {
        Bond &b = g.bond(n.bond);
        if (is_kekule_target(b)) {
          b.order = kSingleBond;
        }
      }
    }
    for (int id: doubles) {
      g.bond(id).order = kDoubleBond;
    }
  }
}

}  // namespace chemid
