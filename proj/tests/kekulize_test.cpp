//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/kekulize.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chemid/element.h"
#include "chemid/smiles.h"

namespace chemid {
namespace {

bool at_standard_valence(const MolGraph &g, int i) {
  const Atom &a = g.atom(i);
  const int v = bond_order_sum_halves(g, i) / 2 + a.num_hs + a.num_radicals;
  auto allowed = isoelectronic_valences(a.z, a.charge);
  return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
}

std::vector<int> orders(const MolGraph &g) {
  std::vector<int> out;
  for (int id: g.live_bonds()) {
    out.push_back(g.bond(id).order.halves());
  }
  return out;
}

// Counts valid assignments by trying all single/double choices for the
// declared-aromatic bonds.
int brute_force_solutions(const MolGraph &g) {
  std::vector<int> ids;
  for (int id: g.live_bonds()) {
    if (g.bond(id).order == kAromaticBond) {
      ids.push_back(id);
    }
  }
  int count = 0;
  for (unsigned mask = 0; mask < (1U << ids.size()); ++mask) {
    MolGraph h = g;
    for (size_t k = 0; k < ids.size(); ++k) {
      h.bond(ids[k]).order = (mask >> k) & 1U ? kDoubleBond : kSingleBond;
    }
    bool ok = true;
    for (int i = 0; i < h.num_atoms() && ok; ++i) {
      ok = !h.atom(i).aromatic || at_standard_valence(h, i);
    }
    count += ok ? 1 : 0;
  }
  return count;
}

const char *const kAromatics[] = {
  "c1ccccc1",         // benzene
  "c1ccncc1",         // pyridine
  "c1cc[nH]c1",       // pyrrole
  "c1ccc2ccccc2c1",   // naphthalene
  "c1c[nH]cn1",       // imidazole
  "c1ccoc1",          // furan
  "Cn1ccnc1",         // N-methylimidazole
  "O=c1cccc[nH]1",    // 2-pyridone
  "c1cc[n+](C)cc1",   // N-methylpyridinium
  "c1cc2ccc3cccc4ccc(c1)c2c34",  // pyrene
};

TEST(KekulizeTest, BenzeneAlternates) {
  MolGraph g = parse_smiles("c1ccccc1");
  kekulize(g);
  EXPECT_EQ(orders(g), std::vector<int>({ 4, 2, 4, 2, 4, 2 }));
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(bond_order_sum_halves(g, i) / 2 + g.atom(i).num_hs, 4);
  }
  for (int id: g.live_bonds()) {
    EXPECT_TRUE(g.bond(id).aromatic);
  }
}

TEST(KekulizeTest, PyridineNitrogenGetsOneDoubleBond) {
  MolGraph g = parse_smiles("c1ccncc1");
  kekulize(g);
  EXPECT_EQ(bond_order_sum_halves(g, 3), 6);
  int doubles = 0;
  for (const Neighbor &n: g.adjacency(3)) {
    doubles += g.bond(n.bond).order == kDoubleBond ? 1 : 0;
  }
  EXPECT_EQ(doubles, 1);
}

TEST(KekulizeTest, PyrroleNitrogenHasNoDoubleBond) {
  MolGraph g = parse_smiles("c1cc[nH]c1");
  kekulize(g);
  EXPECT_EQ(bond_order_sum_halves(g, 3), 4);
}

TEST(KekulizeTest, KekuleInputUnchanged) {
  MolGraph g = parse_smiles("C1=CC=CC=C1");
  const std::string before = dump_graph(g);
  kekulize(g);
  EXPECT_EQ(dump_graph(g), before);
}

TEST(KekulizeTest, AllFormerAromaticAtomsAtStandardValence) {
  for (const char *smi: kAromatics) {
    MolGraph g = parse_smiles(smi);
    kekulize(g);
    for (int i = 0; i < g.num_atoms(); ++i) {
      if (g.atom(i).aromatic) {
        EXPECT_TRUE(at_standard_valence(g, i)) << smi << " atom " << i;
      }
    }
    for (int id: g.live_bonds()) {
      EXPECT_FALSE(g.bond(id).order.is_fractional()) << smi;
    }
  }
}

TEST(KekulizeTest, SolvableExactlyWhenBruteForceFindsAssignment) {
  const char *cases[] = { "c1ccccc1", "c1ccncc1", "c1c[nH]cn1", "c1cccc1",
                          "c1ccc2ccccc2c1", "c1ccc[cH-]1", "c1cc[c]cc1",
                          "c1ncncn1" };
  for (const char *smi: cases) {
    MolGraph g = parse_smiles(smi);
    const int solutions = brute_force_solutions(g);
    bool ok = true;
    try {
      kekulize(g);
    } catch (const KekulizeError &) {
      ok = false;
    }
    EXPECT_EQ(ok, solutions > 0) << smi;
  }
}

TEST(KekulizeTest, DeterministicAcrossReruns) {
  for (const char *smi: kAromatics) {
    MolGraph first = parse_smiles(smi);
    kekulize(first);
    const std::string expected = dump_graph(first);
    for (int run = 0; run < 100; ++run) {
      MolGraph g = parse_smiles(smi);
      kekulize(g);
      ASSERT_EQ(dump_graph(g), expected) << smi;
    }
  }
}

TEST(KekulizeTest, ErrorNamesRingSystem) {
  MolGraph g = parse_smiles("CC.c1cccc1");
  try {
    kekulize(g);
    FAIL() << "expected kekulization error";
  } catch (const KekulizeError &e) {
    EXPECT_EQ(e.atoms(), std::vector<int>({ 2, 3, 4, 5, 6 }));
  }
}

TEST(KekulizeTest, TaggedBondsAreLeftAlone) {
  MolGraph g = parse_smiles("NC=[NH2+]");
  g.bond(0).order = kAromaticBond;
  g.bond(0).tagged = true;
  kekulize(g);
  EXPECT_EQ(g.bond(0).order, kAromaticBond);
}

TEST(KekulizeTest, ChoiceFollowsRelabeling) {
  // Substituted fused rings have inequivalent Kekule forms; the chosen one
  // must not depend on atom order.
  for (const char *smi: { "Oc1ccc2ccccc2c1C", "Cc1cnc2ccccc2c1O", "Oc1cc2ccccc2cc1N" }) {
    const MolGraph g = parse_smiles(smi);
    MolGraph k = g;
    kekulize(k);
    std::mt19937 rng(17);
    for (int t = 0; t < 20; ++t) {
      std::vector<int> perm(static_cast<size_t>(g.num_atoms()));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      MolGraph p = permute_atoms(g, perm);
      kekulize(p);
      for (int id: k.live_bonds()) {
        const Bond &b = k.bond(id);
        auto moved = p.find_bond(perm[static_cast<size_t>(b.begin)],
                                 perm[static_cast<size_t>(b.end)]);
        ASSERT_TRUE(moved.has_value());
        EXPECT_EQ(p.bond(*moved).order, b.order) << smi;
      }
    }
  }
}

TEST(KekulizeTest, SymmetricChoiceEquivalentUnderRelabeling) {
  // Tied atoms in anthracene may pick mirror-image forms; the forms must
  // still be indistinguishable by refined atom classes.
  const MolGraph g = parse_smiles("c1ccc2cc3ccccc3cc2c1");
  MolGraph k = g;
  kekulize(k);
  std::vector<int> base = atom_classes(k);
  std::sort(base.begin(), base.end());
  std::mt19937 rng(17);
  for (int t = 0; t < 20; ++t) {
    std::vector<int> perm(static_cast<size_t>(g.num_atoms()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    MolGraph p = permute_atoms(g, perm);
    kekulize(p);
    std::vector<int> c = atom_classes(p);
    std::sort(c.begin(), c.end());
    EXPECT_EQ(c, base);
  }
}

}  // namespace
}  // namespace chemid
