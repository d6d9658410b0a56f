//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/mol_graph.h"

#include <algorithm>
#include <map>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemid {

int MolGraph::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  atoms_.back().degree = 0;
  adjacency_.emplace_back();
  return num_atoms() - 1;
}

int MolGraph::add_bond(int i, int j, BondOrder order) {
  if (!valid_atom(i) || !valid_atom(j) || i == j) {
    throw std::invalid_argument("add_bond: invalid endpoints");
  }
  if (find_bond(i, j)) {
    throw std::invalid_argument("add_bond: bond already exists");
  }

  const int id = num_bond_slots();
  Bond b;
  b.begin = i;
  b.end = j;
  b.order = order;
  bonds_.push_back(b);

  auto insert_sorted = [&](int from, int to) {
    auto &adj = adjacency_[static_cast<size_t>(from)];
    auto it = std::lower_bound(
        adj.begin(), adj.end(), to,
        [](const Neighbor &n, int atom) { return n.atom < atom; });
    adj.insert(it, Neighbor { to, id });
    ++atoms_[static_cast<size_t>(from)].degree;
  };
  insert_sorted(i, j);
  insert_sorted(j, i);
  return id;
}

int MolGraph::num_live_bonds() const {
  return static_cast<int>(std::count_if(bonds_.begin(), bonds_.end(),
                                        [](const Bond &b) { return !b.removed; }));
}

std::span<const Neighbor> MolGraph::adjacency(int i) const {
  return adjacency_.at(static_cast<size_t>(i));
}

std::vector<int> MolGraph::live_bonds() const {
  std::vector<int> ids;
  ids.reserve(bonds_.size());
  for (int id = 0; id < num_bond_slots(); ++id) {
    if (!bonds_[static_cast<size_t>(id)].removed) {
      ids.push_back(id);
    }
  }
  return ids;
}

std::optional<int> MolGraph::find_bond(int i, int j) const {
  if (!valid_atom(i) || !valid_atom(j)) {
    return std::nullopt;
  }
  for (const Neighbor &n: adjacency(i)) {
    if (n.atom == j) {
      return n.bond;
    }
  }
  return std::nullopt;
}

void MolGraph::remove_bond(int i, int j) {
  auto id = find_bond(i, j);
  if (!id) {
    throw std::invalid_argument("remove_bond: no bond between "
                                + std::to_string(i) + " and "
                                + std::to_string(j));
  }
  auto erase = [&](int from, int to) {
    auto &adj = adjacency_[static_cast<size_t>(from)];
    adj.erase(std::find_if(adj.begin(), adj.end(),
                           [to](const Neighbor &n) { return n.atom == to; }));
    --atoms_[static_cast<size_t>(from)].degree;
  };
  erase(i, j);
  erase(j, i);
  bonds_[static_cast<size_t>(*id)].removed = true;
}

std::vector<int> neighbors(const MolGraph &g, int i) {
  if (!g.valid_atom(i)) {
    throw std::invalid_argument("neighbors: unknown atom id "
                                + std::to_string(i));
  }
  std::vector<int> out;
  for (const Neighbor &n: g.adjacency(i)) {
    out.push_back(n.atom);
  }
  return out;
}

void remove_bond(MolGraph &g, int i, int j) {
  g.remove_bond(i, j);
}

std::vector<std::vector<int>> fragments(const MolGraph &g) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(static_cast<size_t>(g.num_atoms()), 0);
  std::vector<int> stack;
  for (int start = 0; start < g.num_atoms(); ++start) {
    if (seen[static_cast<size_t>(start)] || g.atom(start).phantom) {
      continue;
    }
    std::vector<int> comp;
    stack.push_back(start);
    seen[static_cast<size_t>(start)] = 1;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      comp.push_back(a);
      for (const Neighbor &n: g.adjacency(a)) {
        if (!seen[static_cast<size_t>(n.atom)] && !g.atom(n.atom).phantom) {
          seen[static_cast<size_t>(n.atom)] = 1;
          stack.push_back(n.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

// BFS distance from `from` to `to` ignoring bond `skip`; -1 if unreachable.
int distance_without(const MolGraph &g, int from, int to, int skip,
                     int limit) {
  std::vector<int> dist(static_cast<size_t>(g.num_atoms()), -1);
  std::deque<int> queue { from };
  dist[static_cast<size_t>(from)] = 0;
  while (!queue.empty()) {
    const int a = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<size_t>(a)];
    if (a == to) {
      return d;
    }
    if (limit >= 0 && d >= limit) {
      continue;
    }
    for (const Neighbor &n: g.adjacency(a)) {
      if (n.bond == skip || dist[static_cast<size_t>(n.atom)] >= 0) {
        continue;
      }
      dist[static_cast<size_t>(n.atom)] = d + 1;
      queue.push_back(n.atom);
    }
  }
  return -1;
}

}  // namespace

void perceive_rings(MolGraph &g) {
  const int n = g.num_atoms();
  std::vector<int> disc(static_cast<size_t>(n), -1);
  std::vector<int> low(static_cast<size_t>(n), 0);
  std::vector<char> ring(static_cast<size_t>(n), 0);
  int timer = 0;

  // Iterative Tarjan bridge finding; an atom is in a ring iff it touches a
  // non-bridge bond.
  struct Frame {
    int atom;
    int parent_bond;
    size_t next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<size_t>(root)] >= 0) {
      continue;
    }
    stack.push_back({ root, -1, 0 });
    disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto adj = g.adjacency(f.atom);
      if (f.next < adj.size()) {
        const Neighbor nb = adj[f.next++];
        if (nb.bond == f.parent_bond) {
          continue;
        }
        const auto v = static_cast<size_t>(nb.atom);
        if (disc[v] < 0) {
          disc[v] = low[v] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[static_cast<size_t>(f.atom)] =
              std::min(low[static_cast<size_t>(f.atom)], disc[v]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) {
        continue;
      }
      const int parent = stack.back().atom;
      const auto u = static_cast<size_t>(parent);
      const auto v = static_cast<size_t>(done.atom);
      low[u] = std::min(low[u], low[v]);
      if (low[v] <= disc[u]) {
        // Bond parent-done lies on a cycle.
        ring[u] = 1;
        ring[v] = 1;
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    g.atom(i).in_ring = ring[static_cast<size_t>(i)] != 0;
  }
}

int smallest_ring_size(const MolGraph &g, int i) {
  int best = 0;
  for (const Neighbor &n: g.adjacency(i)) {
    const int d = distance_without(g, n.atom, i, n.bond,
                                   best > 0 ? best - 1 : -1);
    if (d >= 0 && (best == 0 || d + 1 < best)) {
      best = d + 1;
    }
  }
  return best;
}

int bond_order_sum_halves(const MolGraph &g, int i) {
  int sum = 0;
  for (const Neighbor &n: g.adjacency(i)) {
    sum += g.bond(n.bond).order.halves();
  }
  return sum;
}

double valence(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  return bond_order_sum_halves(g, i) / 2.0 + a.num_hs + a.num_radicals;
}

int sum_formal_charges(const MolGraph &g) {
  int q = 0;
  for (const Atom &a: g.atoms()) {
    q += a.charge;
  }
  return q;
}

bool may_have_stereo_lone_pair(int z) {
  switch (z) {
  case 7:   // N
  case 15:  // P
  case 16:  // S
  case 33:  // As
  case 34:  // Se
  case 51:  // Sb
    return true;
  default:
    return false;
  }
}

std::vector<int> chirality_reference(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  std::vector<int> tokens;
  for (const Neighbor &n: g.adjacency(i)) {
    tokens.push_back(n.atom);
  }

  std::vector<int> isotopes;
  const int natural = a.num_hs - static_cast<int>(a.set_hs.size());
  for (int k = 0; k < natural; ++k) {
    isotopes.push_back(0);
  }
  for (int h: a.set_hs) {
    isotopes.push_back(g.atom(h).isotope);
  }
  std::sort(isotopes.begin(), isotopes.end());
  for (int iso: isotopes) {
    tokens.push_back(hydrogen_token(iso));
  }

  if (a.degree + a.num_hs == 3 && may_have_stereo_lone_pair(a.z)) {
    tokens.push_back(kLonePairToken);
  }
  return tokens;
}

int permutation_parity(std::span<const int> from, std::span<const int> to) {
  if (from.size() != to.size()) {
    throw std::invalid_argument("permutation_parity: size mismatch");
  }
  std::vector<int> work(from.begin(), from.end());
  int swaps = 0;
  for (size_t k = 0; k < work.size(); ++k) {
    if (work[k] == to[k]) {
      continue;
    }
    auto it = std::find(work.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                        work.end(), to[k]);
    if (it == work.end()) {
      throw std::invalid_argument("permutation_parity: token mismatch");
    }
    std::iter_swap(work.begin() + static_cast<std::ptrdiff_t>(k), it);
    ++swaps;
  }
  return swaps % 2;
}

ChiralTag invert(ChiralTag tag) {
  switch (tag) {
  case ChiralTag::kClockwise:
    return ChiralTag::kCounterClockwise;
  case ChiralTag::kCounterClockwise:
    return ChiralTag::kClockwise;
  default:
    return ChiralTag::kNone;
  }
}

MolGraph permute_atoms(const MolGraph &g, std::span<const int> perm) {
  const int n = g.num_atoms();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permute_atoms: permutation size mismatch");
  }
  std::vector<int> inverse(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int p = perm[static_cast<size_t>(i)];
    if (p < 0 || p >= n || inverse[static_cast<size_t>(p)] >= 0) {
      throw std::invalid_argument("permute_atoms: not a permutation");
    }
    inverse[static_cast<size_t>(p)] = i;
  }
  auto map = [&](int id) { return id < 0 ? id : perm[static_cast<size_t>(id)]; };

  MolGraph out;
  for (int k = 0; k < n; ++k) {
    Atom a = g.atom(inverse[static_cast<size_t>(k)]);
    for (int &h: a.set_hs) {
      h = map(h);
    }
    std::sort(a.set_hs.begin(), a.set_hs.end());
    out.add_atom(a);
  }

  // Bond slots keep their ids so bond-indexed data stays aligned.
  for (int id = 0; id < g.num_bond_slots(); ++id) {
    const Bond &b = g.bond(id);
    Bond nb = b;
    nb.begin = map(b.begin);
    nb.end = map(b.end);
    nb.stereo_atoms = { map(b.stereo_atoms[0]), map(b.stereo_atoms[1]) };
    const int nid = out.add_bond(nb.begin, nb.end, nb.order);
    if (b.removed) {
      out.remove_bond(nb.begin, nb.end);
    }
    nb.removed = b.removed;
    out.bond(nid) = nb;
  }

  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    if (a.chiral_tag == ChiralTag::kNone) {
      continue;
    }
    std::vector<int> before = chirality_reference(g, i);
    for (int &t: before) {
      t = map(t);
    }
    const std::vector<int> after = chirality_reference(out, map(i));
    if (permutation_parity(before, after) == 1) {
      out.atom(map(i)).chiral_tag = invert(a.chiral_tag);
    }
  }

  out.total_charge = g.total_charge;
  for (int h: g.initial_set_hs) {
    out.initial_set_hs.push_back(map(h));
  }
  std::sort(out.initial_set_hs.begin(), out.initial_set_hs.end());
  out.diagnostics = g.diagnostics;
  if (g.atom_priority.size() == static_cast<size_t>(n)) {
    out.atom_priority.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      out.atom_priority[static_cast<size_t>(map(i))] = g.atom_priority[static_cast<size_t>(i)];
    }
  }
  return out;
}

std::vector<int> atom_classes(const MolGraph &g) {
  const size_t n = static_cast<size_t>(g.num_atoms());
  std::vector<std::vector<int>> keys(n);
  for (size_t i = 0; i < n; ++i) {
    const Atom &a = g.atom(static_cast<int>(i));
    keys[i] = { a.z, a.charge, a.num_hs, a.isotope, a.num_radicals,
                a.phantom ? 1 : 0,
                static_cast<int>(g.adjacency(static_cast<int>(i)).size()) };
  }
  std::vector<int> rank(n, 0);
  size_t classes = 0;
  while (true) {
    std::map<std::vector<int>, int> ids;
    for (const auto &k: keys) {
      ids.emplace(k, 0);
    }
    int next = 0;
    for (auto &[k, id]: ids) {
      id = next++;
    }
    for (size_t i = 0; i < n; ++i) {
      rank[i] = ids[keys[i]];
    }
    if (ids.size() == classes) {
      return rank;
    }
    classes = ids.size();
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> env;
      for (const Neighbor &nb: g.adjacency(static_cast<int>(i))) {
        env.emplace_back(g.bond(nb.bond).order.halves(),
                         rank[static_cast<size_t>(nb.atom)]);
      }
      std::sort(env.begin(), env.end());
      keys[i] = { rank[i] };
      for (const auto &[order, r]: env) {
        keys[i].push_back(order);
        keys[i].push_back(r);
      }
    }
  }
}

std::string format_bond_order(BondOrder order) {
  std::ostringstream os;
  os << order.halves() / 2;
  if (order.is_fractional()) {
    os << ".5";
  }
  return os.str();
}

std::string dump_graph(const MolGraph &g) {
  std::ostringstream os;
  for (int i = 0; i < g.num_atoms(); ++i) {
    const Atom &a = g.atom(i);
    os << "atom " << i << " Z=" << a.z << " Q=" << a.charge
       << " H=" << a.num_hs << " iso=" << a.isotope
       << " rad=" << a.num_radicals << " deg=" << a.degree
       << " ring=" << (a.in_ring ? 1 : 0) << " phantom=" << (a.phantom ? 1 : 0)
       << " chiral=" << static_cast<int>(a.chiral_tag) << " cip=" << a.cip_code
       << " 1H=" << a.num_1h << " 2H=" << a.num_2h << " 3H=" << a.num_3h
       << " seths=";
    for (size_t k = 0; k < a.set_hs.size(); ++k) {
      os << (k ? "," : "") << a.set_hs[k];
    }
    os << '\n';
  }
  for (int id: g.live_bonds()) {
    const Bond &b = g.bond(id);
    os << "bond " << b.begin << ' ' << b.end
       << " order=" << format_bond_order(b.order)
       << " stereo=" << static_cast<int>(b.stereo) << " cip=" << b.cip_code
       << '\n';
  }
  if (g.total_charge) {
    os << "charge=" << *g.total_charge << '\n';
  }
  return os.str();
}

}  // namespace chemid
