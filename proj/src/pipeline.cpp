//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/pipeline.h"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chemid/element.h"
#include "chemid/kekulize.h"
#include "chemid/stereo.h"

namespace chemid {

PipelineError::PipelineError(int step, const std::string &what)
    : Error("step " + std::to_string(step) + ": " + what), step_(step) { }

namespace {

void add_sorted(std::vector<int> &v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) {
    v.insert(it, x);
  }
}

constexpr int kMaxInchifyPasses = 8;

void finish(StepTrace &t) {
  std::sort(t.touched.begin(), t.touched.end());
  t.touched.erase(std::unique(t.touched.begin(), t.touched.end()),
                  t.touched.end());
}

Bond &bond_between(MolGraph &g, int i, int j) {
  auto id = g.find_bond(i, j);
  if (!id) {
    throw std::logic_error("matched atoms are not bonded");
  }
  return g.bond(*id);
}

void shift_order(MolGraph &g, int i, int j, int units) {
  Bond &b = bond_between(g, i, j);
  if (b.order.halves() + 2 * units < 2) {
    throw std::logic_error("bond order would drop below one");
  }
  b.order = b.order.shifted(units);
  b.stereo = BondStereo::kNone;
}

void drop_bond_stereo_around(MolGraph &g, int i) {
  for (const Neighbor &n: g.adjacency(i)) {
    g.bond(n.bond).stereo = BondStereo::kNone;
  }
}

void assert_hydrogens(const MolGraph &g, int i) {
  if (g.atom(i).num_hs < 0) {
    throw std::logic_error("negative hydrogen count at atom "
                           + std::to_string(i));
  }
}

// Pipeline copy of a named rule with the configured chain length.
ChainPattern chain_rule(std::string_view name, int max_n) {
  ChainPattern p = rule(name);
  if (p.repeat) {
    p.n_max = max_n;
  }
  return p;
}

// Flags atoms whose integral valence is outside the standard set of the
// element (or of its isoelectronic element when charged).
void audit_valences(const MolGraph &g, std::string_view rule_name,
                    const Match &m, StepTrace &t) {
  for (int i: m) {
    const Atom &a = g.atom(i);
    const int halves = bond_order_sum_halves(g, i);
    if (halves % 2 != 0) {
      continue;
    }
    auto allowed = a.charge == 0 ? standard_valences(a.z)
                                 : isoelectronic_valences(a.z, a.charge);
    if (allowed.empty()) {
      continue;
    }
    const int v = halves / 2 + a.num_hs + a.num_radicals;
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      t.audit.push_back(std::string(rule_name) + ": atom " + std::to_string(i)
                        + " valence " + std::to_string(v)
                        + " outside standard set");
    }
  }
}

/**
 * Re-anchors cis/trans references that no longer point at a bonded,
 * non-phantom neighbor. The remaining substituent on that side takes over
 * with the relation flipped; without one the stereo is dropped.
 */
void repair_double_bond_refs(MolGraph &g) {
  for (int id: g.live_bonds()) {
    Bond &b = g.bond(id);
    if (b.stereo == BondStereo::kNone) {
      continue;
    }
    const int ends[2] = { b.begin, b.end };
    for (int k = 0; k < 2 && b.stereo != BondStereo::kNone; ++k) {
      const int ref = b.stereo_atoms[static_cast<size_t>(k)];
      const int end = ends[k];
      const int far = ends[1 - k];
      if (ref >= 0 && !g.atom(ref).phantom && g.find_bond(end, ref)) {
        continue;
      }
      int other = -1;
      for (const Neighbor &n: g.adjacency(end)) {
        if (n.atom != far && n.atom != ref) {
          other = n.atom;
          break;
        }
      }
      if (other < 0) {
        b.stereo = BondStereo::kNone;
        break;
      }
      b.stereo_atoms[static_cast<size_t>(k)] = other;
      b.stereo = b.stereo == BondStereo::kCis ? BondStereo::kTrans
                                              : BondStereo::kCis;
    }
  }
}

void check_phantom_safety(const MolGraph &g) {
  for (int id: g.live_bonds()) {
    const Bond &b = g.bond(id);
    if (g.atom(b.begin).phantom || g.atom(b.end).phantom) {
      throw std::logic_error("bond " + std::to_string(id)
                             + " references a phantom atom");
    }
  }
  for (int i = 0; i < g.num_atoms(); ++i) {
    assert_hydrogens(g, i);
  }
}

}  // namespace

void compute_total_charge(MolGraph &g) {
  if (!g.total_charge) {
    g.total_charge = sum_formal_charges(g);
  }
}

StepTrace fold_hydrogens(MolGraph &g) {
  StepTrace t;
  t.step = 1;
  const int n = g.num_atoms();

  std::vector<std::vector<int>> references(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (g.atom(i).chiral_tag != ChiralTag::kNone && !g.atom(i).phantom) {
      references[static_cast<size_t>(i)] = chirality_reference(g, i);
    }
  }

  // (hydrogen, receiving atom)
  std::vector<std::pair<int, int>> folded;
  for (int i = 0; i < n; ++i) {
    if (g.atom(i).z != 1 || g.atom(i).phantom) {
      continue;
    }
    const int iso = g.atom(i).isotope;
    if (g.atom(i).charge > 0 && iso == 0) {
      g.atom(i).phantom = true;
      t.touched.push_back(i);
    }
    for (int j: neighbors(g, i)) {
      if (g.atom(j).z == 1 && g.atom(j).isotope < iso) {
        continue;
      }
      remove_bond(g, i, j);
      g.atom(j).num_hs += 1;
      g.atom(i).phantom = true;
      if (iso >= 1 && iso <= 3) {
        add_sorted(g.atom(j).set_hs, i);
        add_sorted(g.initial_set_hs, i);
      }
      folded.emplace_back(i, j);
      ++t.applications;
      t.touched.push_back(i);
      t.touched.push_back(j);
    }
  }

  for (int c = 0; c < n; ++c) {
    std::vector<int> &before = references[static_cast<size_t>(c)];
    if (before.empty()) {
      continue;
    }
    for (int &token: before) {
      for (const auto &[h, into]: folded) {
        if (into == c && token == h) {
          const int iso = g.atom(h).isotope;
          token = hydrogen_token(iso >= 1 && iso <= 3 ? iso : 0);
        }
      }
    }
    Atom &a = g.atom(c);
    try {
      if (permutation_parity(before, chirality_reference(g, c)) == 1) {
        a.chiral_tag = invert(a.chiral_tag);
      }
    } catch (const std::invalid_argument &) {
      a.chiral_tag = ChiralTag::kNone;
    }
  }
  repair_double_bond_refs(g);
  finish(t);
  return t;
}

StepTrace disconnect_metals(MolGraph &g) {
  StepTrace t;
  t.step = 2;
  for (int i = 0; i < g.num_atoms(); ++i) {
    Atom &metal = g.atom(i);
    if (metal.phantom || is_nonmetal(metal.z)) {
      continue;
    }
    metal.num_hs = 0;
    metal.set_hs.clear();
    metal.chiral_tag = ChiralTag::kNone;
    for (int j: neighbors(g, i)) {
      const int before = sum_formal_charges(g);
      const int order = g.bond(*g.find_bond(i, j)).order.halves() / 2;
      const int delta = order + g.atom(j).num_radicals;
      remove_bond(g, i, j);
      g.atom(i).charge += delta;
      Atom &other = g.atom(j);
      other.charge -= delta;
      other.num_radicals = 0;
      other.chiral_tag = ChiralTag::kNone;
      drop_bond_stereo_around(g, j);
      if (sum_formal_charges(g) != before) {
        throw std::logic_error("disconnection changed the total charge");
      }
      ++t.applications;
      t.touched.push_back(i);
      t.touched.push_back(j);
    }
  }
  finish(t);
  return t;
}

StepTrace normalize_charges(MolGraph &g) {
  StepTrace t;
  t.step = 3;
  using Edit = std::function<void(MolGraph &, const Match &)>;
  const std::pair<const char *, Edit> rules[] = {
    { "normalize.1",
      [](MolGraph &h, const Match &m) {
        h.atom(m[0]).charge += 1;
        h.atom(m[1]).charge -= 1;
        shift_order(h, m[0], m[1], 1);
      } },
    { "normalize.2",
      [](MolGraph &h, const Match &m) {
        h.atom(m[0]).charge += 1;
        h.atom(m[2]).charge -= 1;
        shift_order(h, m[0], m[1], 1);
        shift_order(h, m[1], m[2], -1);
      } },
    { "normalize.3",
      [](MolGraph &h, const Match &m) {
        h.atom(m[0]).charge -= 1;
        h.atom(m[1]).charge += 1;
        shift_order(h, m[0], m[1], 1);
      } },
    { "normalize.4",
      [](MolGraph &h, const Match &m) {
        h.atom(m[0]).charge -= 1;
        h.atom(m[2]).charge += 1;
        shift_order(h, m[0], m[1], -1);
        shift_order(h, m[1], m[2], 1);
      } },
    { "normalize.5",
      [](MolGraph &h, const Match &m) {
        h.atom(m[0]).charge -= 1;
        h.atom(m[3]).charge += 1;
        shift_order(h, m[0], m[1], 1);
        shift_order(h, m[1], m[2], -1);
        shift_order(h, m[2], m[3], 1);
      } },
  };
  for (const auto &[name, edit]: rules) {
    const std::string rule_name = name;
    auto res = apply_until_fixpoint(
        g, rule(name), [&](MolGraph &h, const FoundMatch &m) {
          const int before = sum_formal_charges(h);
          edit(h, m.atoms);
          if (sum_formal_charges(h) != before) {
            throw std::logic_error(rule_name + " changed the total charge");
          }
          audit_valences(h, rule_name, m.atoms, t);
        });
    t.applications += res.applications;
    t.touched.insert(t.touched.end(), res.touched.begin(), res.touched.end());
  }
  finish(t);
  return t;
}

StepTrace deprotonate(MolGraph &g, const PipelineOptions &options) {
  StepTrace t;
  t.step = 4;
  auto soft = apply_until_fixpoint(
      g, rule("deprotonate.charged"), [](MolGraph &h, const FoundMatch &m) {
        Atom &a = h.atom(m.atoms[0]);
        a.charge -= 1;
        a.num_hs -= 1;
        a.chiral_tag = ChiralTag::kNone;
        a.set_hs.clear();
        assert_hydrogens(h, m.atoms[0]);
      });
  auto chain = apply_until_fixpoint(
      g, chain_rule("deprotonate.chain", options.max_n),
      [](MolGraph &h, const FoundMatch &m) {
        Atom &donor = h.atom(m.atoms.front());
        donor.num_hs -= 1;
        donor.chiral_tag = ChiralTag::kNone;
        donor.set_hs.clear();
        h.atom(m.atoms.back()).charge -= 1;
        for (size_t k = 1; k < m.atoms.size(); ++k) {
          Bond &b = bond_between(h, m.atoms[k - 1], m.atoms[k]);
          b.order = b.order == kSingleBond ? kDoubleBond : kSingleBond;
          b.stereo = BondStereo::kNone;
        }
        assert_hydrogens(h, m.atoms.front());
      });
  t.applications = soft.applications + chain.applications;
  t.touched = soft.touched;
  t.touched.insert(t.touched.end(), chain.touched.begin(), chain.touched.end());
  finish(t);
  return t;
}

StepTrace neutralize_fragments(MolGraph &g) {
  StepTrace t;
  t.step = 5;
  const ChainPattern &positive = rule("neutralize.positive");
  const ChainPattern &negative = rule("neutralize.negative");
  const int cap = 10 * std::max(1, g.num_atoms());
  for (const std::vector<int> &fragment: fragments(g)) {
    std::vector<char> allowed(static_cast<size_t>(g.num_atoms()), 0);
    int charge = 0;
    for (int i: fragment) {
      allowed[static_cast<size_t>(i)] = 1;
      charge += g.atom(i).charge;
    }
    int rounds = 0;
    while (charge != 0) {
      const ChainPattern &p = charge > 0 ? positive : negative;
      auto found = find_first(g, p, &allowed);
      if (!found) {
        break;
      }
      if (++rounds > cap) {
        throw FixpointError("neutralization did not terminate");
      }
      const int i = found->atoms[0];
      Atom &a = g.atom(i);
      a.chiral_tag = ChiralTag::kNone;
      if (charge > 0) {
        a.charge -= 1;
        a.num_hs -= 1;
        a.set_hs.clear();
        charge -= 1;
      } else {
        a.charge += 1;
        a.num_hs += 1;
        charge += 1;
      }
      assert_hydrogens(g, i);
      ++t.applications;
      t.touched.push_back(i);
    }
  }
  finish(t);
  return t;
}

StepTrace reduce_valence(MolGraph &g) {
  StepTrace t;
  t.step = 6;
  static constexpr int kReducible[] = { 5,  6,  7,  8,  9,  14, 15, 16,
                                        17, 32, 33, 34, 35, 52, 53, 85 };
  for (int i = 0; i < g.num_atoms(); ++i) {
    Atom &a = g.atom(i);
    if (a.phantom
        || std::find(std::begin(kReducible), std::end(kReducible), a.z)
               == std::end(kReducible)) {
      continue;
    }
    const int lowest = standard_valences(a.z).front();
    while (a.num_hs >= 2 && valence(g, i) >= lowest + 2) {
      a.num_hs -= 2;
      a.set_hs.clear();
      a.chiral_tag = ChiralTag::kNone;
      ++t.applications;
      t.touched.push_back(i);
    }
  }
  finish(t);
  return t;
}

StepTrace detect_movable_charges(MolGraph &g, const PipelineOptions &options) {
  StepTrace t;
  t.step = 7;
  const ChainPattern p = chain_rule("movable_charge", options.max_n);
  for (int n = p.n_min; n <= p.n_max; ++n) {
    for (const Match &m: match_chain(g, p, n)) {
      for (size_t k = 1; k < m.size(); ++k) {
        Bond &b = bond_between(g, m[k - 1], m[k]);
        b.order = kAromaticBond;
        b.tagged = true;
        b.stereo = BondStereo::kNone;
      }
      ++t.applications;
      t.touched.insert(t.touched.end(), m.begin(), m.end());
    }
  }
  finish(t);
  return t;
}

StepTrace detect_tautomers(MolGraph &g, const PipelineOptions &options) {
  StepTrace t;
  t.step = 8;
  const ChainPattern p = chain_rule("tautomer", options.max_n);
  std::set<int> found;
  const int max_sweeps = g.num_atoms() + 1;
  int sweeps = 0;
  int previous = -1;
  while (static_cast<int>(found.size()) != previous) {
    if (++sweeps > max_sweeps) {
      throw FixpointError("tautomer detection did not stabilize");
    }
    previous = static_cast<int>(found.size());
    for (int n = p.n_min; n <= p.n_max; ++n) {
      for (const Match &m: match_chain(g, p, n)) {
        for (int e: { m.front(), m.back() }) {
          found.insert(e);
          Atom &a = g.atom(e);
          a.charge = -1;
          a.num_hs = 0;
          a.set_hs.clear();
          a.chiral_tag = ChiralTag::kNone;
          drop_bond_stereo_around(g, e);
        }
        for (size_t k = 1; k < m.size(); ++k) {
          Bond &b = bond_between(g, m[k - 1], m[k]);
          b.order = kAromaticBond;
          b.tagged = true;
          b.stereo = BondStereo::kNone;
        }
        ++t.applications;
        t.touched.insert(t.touched.end(), m.begin(), m.end());
      }
    }
  }
  finish(t);
  return t;
}

StepTrace restore_mobile_isotopes(MolGraph &g) {
  StepTrace t;
  t.step = 9;
  std::vector<int> retained;
  for (const Atom &a: g.atoms()) {
    retained.insert(retained.end(), a.set_hs.begin(), a.set_hs.end());
  }
  std::sort(retained.begin(), retained.end());
  for (int h: g.initial_set_hs) {
    if (!std::binary_search(retained.begin(), retained.end(), h)
        && g.atom(h).phantom) {
      g.atom(h).phantom = false;
      ++t.applications;
      t.touched.push_back(h);
    }
  }
  for (int i = 0; i < g.num_atoms(); ++i) {
    Atom &a = g.atom(i);
    int counts[4] = { 0, 0, 0, 0 };
    for (int h: a.set_hs) {
      ++counts[g.atom(h).isotope];
    }
    a.num_1h = counts[1];
    a.num_2h = counts[2];
    a.num_3h = counts[3];
  }
  finish(t);
  return t;
}

InvariantSet extract_invariants(const MolGraph &g) {
  InvariantSet inv;
  inv.charge = g.total_charge.value_or(sum_formal_charges(g));
  for (int i = 0; i < g.num_atoms(); ++i) {
    const Atom &a = g.atom(i);
    if (a.phantom) {
      continue;
    }
    inv.atom_ids.push_back(i);
    inv.atoms.push_back({ a.z, a.isotope, a.degree, a.in_ring, a.num_hs,
                          a.num_1h, a.num_2h, a.num_3h, a.cip_code });
  }
  for (int id: g.live_bonds()) {
    const Bond &b = g.bond(id);
    inv.bonds.push_back({ std::min(b.begin, b.end), std::max(b.begin, b.end),
                          b.cip_code });
  }
  std::sort(inv.bonds.begin(), inv.bonds.end(),
            [](const BondInvariants &x, const BondInvariants &y) {
              return std::pair(x.begin, x.end) < std::pair(y.begin, y.end);
            });
  return inv;
}

std::string to_json(const InvariantSet &inv) {
  nlohmann::ordered_json j;
  j["charge"] = inv.charge;
  j["atom_ids"] = inv.atom_ids;
  auto atoms = nlohmann::ordered_json::array();
  for (const AtomInvariants &a: inv.atoms) {
    atoms.push_back({ a.z, a.isotope, a.degree, a.in_ring ? 1 : 0, a.num_hs,
                      a.num_1h, a.num_2h, a.num_3h, a.cip_code });
  }
  j["atoms"] = atoms;
  auto bonds = nlohmann::ordered_json::array();
  for (const BondInvariants &b: inv.bonds) {
    bonds.push_back({ b.begin, b.end, b.cip_code });
  }
  j["bonds"] = bonds;
  return j.dump();
}

std::string to_json(const StepTrace &trace) {
  nlohmann::ordered_json j;
  j["step"] = trace.step;
  j["applications"] = trace.applications;
  j["touched"] = trace.touched;
  j["audit"] = trace.audit;
  return j.dump();
}

namespace {

InchifyResult single_pass(const MolGraph &input, const PipelineOptions &options) {
  InchifyResult r;
  r.graph = input;
  MolGraph &g = r.graph;

  auto run = [&](int step, const std::function<StepTrace()> &body) {
    StepTrace t;
    try {
      t = body();
      check_phantom_safety(g);
    } catch (const PipelineError &) {
      throw;
    } catch (const std::exception &e) {
      throw PipelineError(step, e.what());
    }
    t.step = step;
    r.traces.push_back(std::move(t));
  };

  run(1, [&] {
    compute_total_charge(g);
    kekulize(g);
    StepTrace t = fold_hydrogens(g);
    perceive_rings(g);
    g.atom_priority = atom_classes(g);
    return t;
  });
  run(2, [&] {
    StepTrace t = disconnect_metals(g);
    perceive_rings(g);
    return t;
  });
  run(3, [&] { return normalize_charges(g); });
  run(4, [&] { return deprotonate(g, options); });
  run(5, [&] { return neutralize_fragments(g); });
  run(6, [&] { return reduce_valence(g); });
  run(7, [&] { return detect_movable_charges(g, options); });
  run(8, [&] { return detect_tautomers(g, options); });
  run(9, [&] { return restore_mobile_isotopes(g); });
  run(10, [&] {
    assign_cip(g);
    filter_stereo(g);
    StepTrace t;
    for (int i = 0; i < g.num_atoms(); ++i) {
      if (g.atom(i).cip_code != 0) {
        ++t.applications;
        t.touched.push_back(i);
      }
    }
    for (int id: g.live_bonds()) {
      const Bond &b = g.bond(id);
      if (b.cip_code != 0) {
        ++t.applications;
        t.touched.push_back(b.begin);
        t.touched.push_back(b.end);
      }
    }
    finish(t);
    return t;
  });

  r.invariants = extract_invariants(g);
  return r;
}

void merge_trace(StepTrace &into, const StepTrace &from) {
  into.applications += from.applications;
  into.touched.insert(into.touched.end(), from.touched.begin(), from.touched.end());
  into.audit.insert(into.audit.end(), from.audit.begin(), from.audit.end());
  finish(into);
}

}  // namespace

InchifyResult inchify(const MolGraph &input, const PipelineOptions &options) {
  // One pass can leave work for the steps before it: a proton removed in
  // Step 5 may form a charge pair for Step 3, and the charges Step 8 puts on
  // tautomer endpoints count towards Step 5's fragment charge. Passes repeat
  // until the invariants stop changing; the confirming pass is discarded.
  InchifyResult r = single_pass(input, options);
  for (int pass = 1; pass < kMaxInchifyPasses; ++pass) {
    InchifyResult next = single_pass(r.graph, options);
    if (next.invariants == r.invariants) {
      break;
    }
    for (size_t k = 0; k < r.traces.size(); ++k) {
      merge_trace(r.traces[k], next.traces[k]);
    }
    next.traces = std::move(r.traces);
    r = std::move(next);
  }
  return r;
}

}  // namespace chemid
