//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/stereo.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chemid/element.h"

namespace chemid {
namespace {

constexpr size_t kNodeBudget = 50000;

enum Rule {
  kRule1a = 0,
  kRule1b = 1,
  kRule2 = 2,
};

class BudgetExceeded { };

int mass_key(int z, int isotope) {
  if (z == 0) {
    return 0;
  }
  if (isotope > 0) {
    return isotope * 1000;
  }
  return static_cast<int>(std::lround(atomic_weight(z) * 1000.0));
}

/**
 * Hierarchical digraph rooted at one atom, expanded lazily. Duplicate nodes
 * stand in for ring closures and for the extra order of multiple bonds; they
 * have no children.
 */
class Digraph {
public:
  Digraph(const MolGraph &g, int root): g_(g) {
    nodes_.push_back({ g.atom(root).z, mass_key(g.atom(root).z, g.atom(root).isotope),
                       0, root, 0, -1, true });
    kids_.emplace_back();
    expanded_.push_back(false);
  }

  int add_atom_node(int atom, int parent) {
    const Atom &a = g_.atom(atom);
    return add({ a.z, mass_key(a.z, a.isotope), 0, atom,
                 nodes_[static_cast<size_t>(parent)].depth + 1, parent, true });
  }

  int add_leaf(int z, int isotope, int parent) {
    return add({ z, mass_key(z, isotope), 0, -1,
                 nodes_[static_cast<size_t>(parent)].depth + 1, parent, false });
  }

  // Negative result: x ranks below y.
  int compare(int x, int y, Rule rule) {
    const uint64_t key = (static_cast<uint64_t>(x) << 34)
                         | (static_cast<uint64_t>(y) << 4)
                         | static_cast<uint64_t>(rule);
    if (auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
    const int r = compare_spheres(x, y, rule);
    memo_[key] = r;
    return r;
  }

  int cascade(int x, int y, Rule upto) {
    for (int r = kRule1a; r <= upto; ++r) {
      const int c = compare(x, y, static_cast<Rule>(r));
      if (c != 0) {
        return c;
      }
    }
    return 0;
  }

private:
  struct Node {
    int z;
    int mass;
    // Rule 1b key of a duplicate: larger when the duplicated atom is closer
    // to the root. Zero for ordinary nodes.
    int dup_rank;
    int atom;
    int depth;
    int parent;
    bool expandable;
  };

  int add(const Node &n) {
    if (nodes_.size() >= kNodeBudget) {
      throw BudgetExceeded();
    }
    nodes_.push_back(n);
    kids_.emplace_back();
    expanded_.push_back(false);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add_duplicate(int atom, int dup_depth, int parent) {
    const Atom &a = g_.atom(atom);
    const int depth = nodes_[static_cast<size_t>(parent)].depth + 1;
    return add({ a.z, mass_key(a.z, a.isotope), 1 + g_.num_atoms() - dup_depth,
                 atom, depth, parent, false });
  }

  // Depth of the ancestor of `node` (inclusive) holding `atom`, or -1.
  int ancestor_depth(int node, int atom) const {
    for (int k = node; k >= 0; k = nodes_[static_cast<size_t>(k)].parent) {
      const Node &n = nodes_[static_cast<size_t>(k)];
      if (n.atom == atom && n.expandable) {
        return n.depth;
      }
    }
    return -1;
  }

  static int multiplicity(const Bond &b) {
    if (b.tagged || b.order.is_fractional()) {
      return 1;
    }
    return b.order.halves() / 2;
  }

  const std::vector<int> &children(int idx) {
    if (expanded_[static_cast<size_t>(idx)]) {
      return kids_[static_cast<size_t>(idx)];
    }
    std::vector<int> out;
    const Node n = nodes_[static_cast<size_t>(idx)];
    if (n.expandable && n.parent >= 0 && n.depth < g_.num_atoms()) {
      const int parent_atom = nodes_[static_cast<size_t>(n.parent)].atom;
      const Atom &a = g_.atom(n.atom);
      for (const Neighbor &nb: g_.adjacency(n.atom)) {
        const int mult = multiplicity(g_.bond(nb.bond));
        if (nb.atom == parent_atom) {
          for (int k = 1; k < mult; ++k) {
            out.push_back(add_duplicate(nb.atom, n.depth - 1, idx));
          }
          continue;
        }
        const int seen = ancestor_depth(n.parent, nb.atom);
        if (seen >= 0) {
          for (int k = 0; k < mult; ++k) {
            out.push_back(add_duplicate(nb.atom, seen, idx));
          }
          continue;
        }
        out.push_back(add_atom_node(nb.atom, idx));
        for (int k = 1; k < mult; ++k) {
          out.push_back(add_duplicate(nb.atom, n.depth + 1, idx));
        }
      }
      const int natural = a.num_hs - static_cast<int>(a.set_hs.size());
      for (int k = 0; k < natural; ++k) {
        out.push_back(add_leaf(1, 0, idx));
      }
      for (int h: a.set_hs) {
        out.push_back(add_leaf(1, g_.atom(h).isotope, idx));
      }
    }
    expanded_[static_cast<size_t>(idx)] = true;
    kids_[static_cast<size_t>(idx)] = std::move(out);
    return kids_[static_cast<size_t>(idx)];
  }

  int label(int idx, Rule rule) const {
    const Node &n = nodes_[static_cast<size_t>(idx)];
    switch (rule) {
    case kRule1a:
      return n.z;
    case kRule1b:
      return n.dup_rank;
    case kRule2:
      return n.mass;
    }
    return 0;
  }

  std::vector<int> sorted_children(int idx, Rule rule) {
    std::vector<int> kids = children(idx);
    std::stable_sort(kids.begin(), kids.end(),
                     [&](int a, int b) { return cascade(a, b, rule) > 0; });
    return kids;
  }

  // Sphere-by-sphere comparison of the subtrees at x and y.
  int compare_spheres(int x, int y, Rule rule) {
    std::vector<int> lx { x };
    std::vector<int> ly { y };
    while (!lx.empty() || !ly.empty()) {
      const size_t width = std::max(lx.size(), ly.size());
      for (size_t k = 0; k < width; ++k) {
        const int a = k < lx.size() ? label(lx[k], rule) : -1;
        const int b = k < ly.size() ? label(ly[k], rule) : -1;
        if (a != b) {
          return a < b ? -1 : 1;
        }
      }
      std::vector<int> nx;
      std::vector<int> ny;
      for (int v: lx) {
        auto kids = sorted_children(v, rule);
        nx.insert(nx.end(), kids.begin(), kids.end());
      }
      for (int v: ly) {
        auto kids = sorted_children(v, rule);
        ny.insert(ny.end(), kids.begin(), kids.end());
      }
      lx = std::move(nx);
      ly = std::move(ny);
    }
    return 0;
  }

  const MolGraph &g_;
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> kids_;
  std::vector<bool> expanded_;
  std::unordered_map<uint64_t, int> memo_;
};

// Ranks, or an empty vector when the digraph budget is exhausted.
std::vector<int> rank_tokens(const MolGraph &g, int center,
                             const std::vector<int> &tokens) {
  try {
    Digraph d(g, center);
    std::vector<int> roots;
    for (int t: tokens) {
      if (t >= 0) {
        roots.push_back(d.add_atom_node(t, 0));
      } else if (is_hydrogen_token(t)) {
        roots.push_back(d.add_leaf(1, hydrogen_token_isotope(t), 0));
      } else {
        roots.push_back(d.add_leaf(0, 0, 0));
      }
    }
    std::vector<int> ranks(tokens.size(), 0);
    for (size_t a = 0; a < roots.size(); ++a) {
      for (size_t b = 0; b < roots.size(); ++b) {
        if (a != b && d.cascade(roots[a], roots[b], kRule2) > 0) {
          ++ranks[a];
        }
      }
    }
    return ranks;
  } catch (const BudgetExceeded &) {
    return {};
  }
}

bool all_distinct(std::vector<int> ranks) {
  std::sort(ranks.begin(), ranks.end());
  return std::adjacent_find(ranks.begin(), ranks.end()) == ranks.end();
}

// Substituents of one double-bond end: neighbors except `far`, then H.
std::vector<int> end_tokens(const MolGraph &g, int end, int far) {
  std::vector<int> tokens;
  for (const Neighbor &n: g.adjacency(end)) {
    if (n.atom != far) {
      tokens.push_back(n.atom);
    }
  }
  const Atom &a = g.atom(end);
  const int natural = a.num_hs - static_cast<int>(a.set_hs.size());
  for (int k = 0; k < natural; ++k) {
    tokens.push_back(hydrogen_token(0));
  }
  for (int h: a.set_hs) {
    tokens.push_back(hydrogen_token(g.atom(h).isotope));
  }
  return tokens;
}

int tetrahedral_code(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  const std::vector<int> ref = chirality_reference(g, i);
  if (ref.size() != 4) {
    return 0;
  }
  const std::vector<int> ranks = rank_tokens(g, i, ref);
  if (ranks.empty() || !all_distinct(ranks)) {
    return 0;
  }
  // Order: lowest, highest, second, third.
  std::vector<int> by_rank(4);
  for (size_t k = 0; k < 4; ++k) {
    by_rank[static_cast<size_t>(ranks[k])] = ref[k];
  }
  const std::vector<int> view { by_rank[0], by_rank[3], by_rank[2], by_rank[1] };
  ChiralTag tag = a.chiral_tag;
  if (permutation_parity(ref, view) == 1) {
    tag = invert(tag);
  }
  // Counterclockwise seen from the lowest substituent is clockwise with it
  // pointing away.
  return tag == ChiralTag::kCounterClockwise ? kCipR : kCipS;
}

// Whether `ref` is the top-ranked substituent at `end`; nullopt when the
// substituents cannot be ordered.
std::optional<bool> is_top(const MolGraph &g, int end, int far, int ref) {
  const std::vector<int> tokens = end_tokens(g, end, far);
  if (tokens.empty()) {
    return std::nullopt;
  }
  if (tokens.size() == 1) {
    return tokens[0] == ref;
  }
  const std::vector<int> ranks = rank_tokens(g, end, tokens);
  if (ranks.empty() || !all_distinct(ranks)) {
    return std::nullopt;
  }
  const auto top = std::max_element(ranks.begin(), ranks.end()) - ranks.begin();
  return tokens[static_cast<size_t>(top)] == ref;
}

int double_bond_code(const MolGraph &g, const Bond &b) {
  const auto first = is_top(g, b.begin, b.end, b.stereo_atoms[0]);
  const auto second = is_top(g, b.end, b.begin, b.stereo_atoms[1]);
  if (!first || !second) {
    return 0;
  }
  bool cis = b.stereo == BondStereo::kCis;
  if (!*first) {
    cis = !cis;
  }
  if (!*second) {
    cis = !cis;
  }
  return cis ? kCipZ : kCipE;
}

bool one_of(int z, std::initializer_list<int> zs) {
  return std::find(zs.begin(), zs.end(), z) != zs.end();
}

}  // namespace

std::vector<int> cip_ranks(const MolGraph &g, int center,
                           const std::vector<int> &tokens, int exclude) {
  std::vector<int> kept;
  for (int t: tokens) {
    if (t != exclude || exclude < 0) {
      kept.push_back(t);
    }
  }
  std::vector<int> ranks = rank_tokens(g, center, kept);
  if (ranks.empty()) {
    throw Error("CIP digraph budget exceeded at atom " + std::to_string(center));
  }
  return ranks;
}

void assign_cip(MolGraph &g) {
  for (int i = 0; i < g.num_atoms(); ++i) {
    Atom &a = g.atom(i);
    a.cip_code = 0;
    if (a.phantom || a.chiral_tag == ChiralTag::kNone) {
      continue;
    }
    a.cip_code = tetrahedral_code(g, i);
    if (a.cip_code == 0) {
      g.diagnostics.push_back("atom " + std::to_string(i)
                              + ": chiral tag without distinct CIP priorities");
    }
  }
  for (int id: g.live_bonds()) {
    Bond &b = g.bond(id);
    b.cip_code = 0;
    if (b.stereo == BondStereo::kNone || b.tagged || b.order != kDoubleBond) {
      continue;
    }
    b.cip_code = double_bond_code(g, b);
    if (b.cip_code == 0) {
      g.diagnostics.push_back("bond " + std::to_string(id)
                              + ": double-bond stereo without distinct CIP "
                                "priorities");
    }
  }
}

void filter_stereo(MolGraph &g) {
  for (int id: g.live_bonds()) {
    Bond &b = g.bond(id);
    if (!one_of(g.atom(b.begin).z, { 6, 7, 14, 32 })
        || !one_of(g.atom(b.end).z, { 6, 7, 14, 32 })) {
      b.cip_code = 0;
    }
  }
  for (int i = 0; i < g.num_atoms(); ++i) {
    Atom &a = g.atom(i);
    if (a.cip_code == 0) {
      continue;
    }
    if (!one_of(a.z, { 5, 6, 7, 14, 15, 16, 32, 33, 34, 50 })) {
      a.cip_code = 0;
      continue;
    }
    if (a.z == 7 && a.degree != 4 && smallest_ring_size(g, i) != 3) {
      a.cip_code = 0;
      continue;
    }
    if (one_of(a.z, { 7, 15, 33, 16, 34 })) {
      int terminal = 0;
      int terminal_hs = 0;
      for (const Neighbor &n: g.adjacency(i)) {
        const Atom &x = g.atom(n.atom);
        if (x.degree == 1 && one_of(x.z, { 8, 16, 34, 52, 7 })) {
          ++terminal;
          terminal_hs += x.num_hs;
        }
      }
      if (a.num_hs >= 1 || (terminal >= 2 && terminal_hs > 0)) {
        a.cip_code = 0;
      }
    }
  }
}

}  // namespace chemid
