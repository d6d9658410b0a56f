//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/fingerprint.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chemid/element.h"
#include "chemid/kekulize.h"
#include "chemid/smiles.h"

namespace chemid {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::int64_t kBondKeyTag = -1;

// (neighbor index, bond class) per atom, sorted by neighbor.
using Adjacency = std::vector<std::vector<std::pair<int, int>>>;
using AtomSet = std::vector<std::uint64_t>;

std::int64_t as_signed(std::uint64_t v) {
  return static_cast<std::int64_t>(v);
}

void add_key(SparseFingerprint &fp, std::uint64_t key, std::uint32_t count = 1) {
  if (key < 2) {
    key |= std::uint64_t{ 1 } << 63;
  }
  fp[key] += count;
}

void unite(AtomSet &into, const AtomSet &from) {
  for (size_t w = 0; w < into.size(); ++w) {
    into[w] |= from[w];
  }
}

/**
 * ECFP refinement from radius-0 identifiers. An environment is identified by
 * the atoms it covers; an environment whose atom set was already emitted (at
 * this or an earlier iteration) is dropped. Within one iteration duplicates
 * are resolved in (atom set, identifier) order so the result does not depend
 * on atom numbering.
 */
void accumulate_environments(std::vector<std::uint64_t> ids,
                             const Adjacency &adj, int radius,
                             SparseFingerprint &fp) {
  const size_t n = ids.size();
  const size_t words = (n + 63) / 64;
  std::vector<AtomSet> cover(n, AtomSet(words, 0));
  std::set<AtomSet> seen;
  for (size_t i = 0; i < n; ++i) {
    cover[i][i / 64] |= std::uint64_t{ 1 } << (i % 64);
    seen.insert(cover[i]);
    add_key(fp, ids[i]);
  }
  std::vector<std::int64_t> buf;
  std::vector<std::pair<std::int64_t, std::int64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    std::vector<AtomSet> next_cover = cover;
    bool grew = false;
    for (size_t i = 0; i < n; ++i) {
      env.clear();
      for (const auto &[nb, cls]: adj[i]) {
        env.emplace_back(cls, as_signed(ids[static_cast<size_t>(nb)]));
        unite(next_cover[i], cover[static_cast<size_t>(nb)]);
      }
      std::sort(env.begin(), env.end());
      buf.assign({ r, as_signed(ids[i]) });
      for (const auto &[cls, id]: env) {
        buf.push_back(cls);
        buf.push_back(id);
      }
      next[i] = hash_values(buf);
      grew = grew || next_cover[i] != cover[i];
    }
    if (!grew) {
      break;
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
      return std::tie(next_cover[x], next[x]) < std::tie(next_cover[y], next[y]);
    });
    for (size_t i: order) {
      if (seen.insert(next_cover[i]).second) {
        add_key(fp, next[i]);
      }
    }
    ids = std::move(next);
    cover = std::move(next_cover);
  }
}

void check_radius(int radius) {
  if (radius < 0) {
    throw std::invalid_argument("fingerprint radius must be >= 0, got "
                                + std::to_string(radius));
  }
}

SparseFingerprint daylight_fingerprint(const MolGraph &g, int radius) {
  std::vector<int> index(static_cast<size_t>(g.num_atoms()), -1);
  std::vector<int> atoms;
  for (int i = 0; i < g.num_atoms(); ++i) {
    if (!g.atom(i).phantom) {
      index[static_cast<size_t>(i)] = static_cast<int>(atoms.size());
      atoms.push_back(i);
    }
  }
  std::vector<std::uint64_t> ids;
  Adjacency adj(atoms.size());
  for (size_t k = 0; k < atoms.size(); ++k) {
    const int i = atoms[k];
    const Atom &a = g.atom(i);
    std::int64_t heavy = 0;
    std::int64_t heavy_halves = 0;
    std::int64_t hs = a.num_hs;
    for (const Neighbor &nb: g.adjacency(i)) {
      const Atom &other = g.atom(nb.atom);
      if (other.phantom) {
        continue;
      }
      const Bond &b = g.bond(nb.bond);
      adj[k].emplace_back(index[static_cast<size_t>(nb.atom)],
                          b.aromatic ? kAromaticBond.halves() : b.order.halves());
      if (other.z == 1) {
        ++hs;
      } else {
        ++heavy;
        heavy_halves += b.order.halves();
      }
    }
    const std::int64_t mass_delta =
        a.isotope == 0 ? 0 : a.isotope - std::lround(atomic_weight(a.z));
    const std::int64_t tuple[] = { 0,      heavy, heavy_halves,         a.z,
                                   a.charge, hs,  a.in_ring ? 1 : 0, mass_delta };
    ids.push_back(hash_values(tuple));
  }
  SparseFingerprint fp;
  accumulate_environments(std::move(ids), adj, radius, fp);
  return fp;
}

}  // namespace

InvariantMode parse_invariant_mode(std::string_view name) {
  if (name == "daylight") {
    return InvariantMode::kDaylight;
  }
  if (name == "inchified") {
    return InvariantMode::kInchified;
  }
  throw std::invalid_argument("unknown invariant mode '" + std::string(name)
                              + "'");
}

std::string_view mode_name(InvariantMode mode) {
  return mode == InvariantMode::kDaylight ? "daylight" : "inchified";
}

std::uint64_t hash_values(std::span<const std::int64_t> values) {
  std::uint64_t h = kFnvOffset;
  for (std::int64_t v: values) {
    auto u = static_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (u >> (8 * byte)) & 0xffU;
      h *= kFnvPrime;
    }
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

MolGraph prepare_raw(const MolGraph &g) {
  MolGraph raw = g;
  compute_total_charge(raw);
  kekulize(raw);
  fold_hydrogens(raw);
  perceive_rings(raw);
  return raw;
}

SparseFingerprint morgan_fingerprint(const MolGraph &g, int radius,
                                     InvariantMode mode) {
  check_radius(radius);
  if (mode == InvariantMode::kInchified) {
    return morgan_fingerprint(extract_invariants(g), radius);
  }
  return daylight_fingerprint(g, radius);
}

SparseFingerprint morgan_fingerprint(const InvariantSet &inv, int radius) {
  check_radius(radius);
  const size_t n = inv.atoms.size();
  auto index_of = [&](int id) {
    auto it = std::lower_bound(inv.atom_ids.begin(), inv.atom_ids.end(), id);
    if (it == inv.atom_ids.end() || *it != id) {
      throw std::invalid_argument("bond references unknown atom "
                                  + std::to_string(id));
    }
    return static_cast<int>(it - inv.atom_ids.begin());
  };
  std::vector<std::uint64_t> ids(n);
  for (size_t k = 0; k < n; ++k) {
    const AtomInvariants &a = inv.atoms[k];
    const std::int64_t tuple[] = { 0,        a.z,      a.isotope,
                                   a.degree, a.in_ring ? 1 : 0,
                                   a.num_hs, a.num_1h, a.num_2h,
                                   a.num_3h, a.cip_code };
    ids[k] = hash_values(tuple);
  }
  Adjacency adj(n);
  SparseFingerprint fp;
  for (const BondInvariants &b: inv.bonds) {
    const int i = index_of(b.begin);
    const int j = index_of(b.end);
    adj[static_cast<size_t>(i)].emplace_back(j, 0);
    adj[static_cast<size_t>(j)].emplace_back(i, 0);
    if (b.cip_code != 0) {
      const auto [lo, hi] = std::minmax(ids[static_cast<size_t>(i)],
                                        ids[static_cast<size_t>(j)]);
      const std::int64_t tuple[] = { kBondKeyTag, as_signed(lo), as_signed(hi),
                                     b.cip_code };
      add_key(fp, hash_values(tuple));
    }
  }
  for (auto &list: adj) {
    std::sort(list.begin(), list.end());
  }
  accumulate_environments(std::move(ids), adj, radius, fp);
  if (inv.charge < 0) {
    fp[kNegativeChargeKey] = static_cast<std::uint32_t>(-inv.charge);
  } else if (inv.charge > 0) {
    fp[kPositiveChargeKey] = static_cast<std::uint32_t>(inv.charge);
  }
  return fp;
}

double tanimoto(const SparseFingerprint &a, const SparseFingerprint &b) {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() || y != b.end()) {
    if (y == b.end() || (x != a.end() && x->first < y->first)) {
      hi += x->second;
      ++x;
    } else if (x == a.end() || y->first < x->first) {
      hi += y->second;
      ++y;
    } else {
      lo += std::min(x->second, y->second);
      hi += std::max(x->second, y->second);
      ++x;
      ++y;
    }
  }
  return hi == 0 ? 1.0 : static_cast<double>(lo) / static_cast<double>(hi);
}

SparseFingerprint fingerprint_smiles(std::string_view smiles, int radius,
                                     InvariantMode mode,
                                     const PipelineOptions &options) {
  check_radius(radius);
  const MolGraph g = parse_smiles(smiles);
  if (mode == InvariantMode::kDaylight) {
    return daylight_fingerprint(prepare_raw(g), radius);
  }
  return morgan_fingerprint(inchify(g, options).invariants, radius);
}

std::string format_fingerprint(const SparseFingerprint &fp) {
  std::string out;
  for (const auto &[key, count]: fp) {
    if (!out.empty()) {
      out += ' ';
    }
    out += std::to_string(key);
    out += ':';
    out += std::to_string(count);
  }
  return out;
}

std::string fingerprint_to_json(const SparseFingerprint &fp) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto &[key, count]: fp) {
    j[std::to_string(key)] = count;
  }
  return j.dump();
}

}  // namespace chemid
