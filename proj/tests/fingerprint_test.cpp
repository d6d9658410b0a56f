//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/fingerprint.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chemid/smiles.h"

namespace chemid {
namespace {

SparseFingerprint inchified(const std::string &smiles, int radius) {
  return fingerprint_smiles(smiles, radius, InvariantMode::kInchified);
}

SparseFingerprint daylight(const std::string &smiles, int radius) {
  return fingerprint_smiles(smiles, radius, InvariantMode::kDaylight);
}

std::uint32_t total_count(const SparseFingerprint &fp) {
  std::uint32_t n = 0;
  for (const auto &[key, count]: fp) {
    n += count;
  }
  return n;
}

/**
 * Direct ECFP definition: atom sets from BFS distances, identifiers by
 * recursion on radius, deduplication over all (radius, atom) pairs in
 * (atom set, identifier) order with earlier radii first.
 */
SparseFingerprint oracle_fingerprint(const InvariantSet &inv, int radius) {
  const int n = static_cast<int>(inv.atoms.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  auto idx = [&](int id) {
    return static_cast<int>(
        std::find(inv.atom_ids.begin(), inv.atom_ids.end(), id)
        - inv.atom_ids.begin());
  };
  for (const BondInvariants &b: inv.bonds) {
    adj[static_cast<size_t>(idx(b.begin))].push_back(idx(b.end));
    adj[static_cast<size_t>(idx(b.end))].push_back(idx(b.begin));
  }
  std::vector<std::vector<int>> dist(static_cast<size_t>(n),
                                     std::vector<int>(static_cast<size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    dist[static_cast<size_t>(s)][static_cast<size_t>(s)] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v: adj[static_cast<size_t>(u)]) {
        auto &d = dist[static_cast<size_t>(s)][static_cast<size_t>(v)];
        if (d < 0) {
          d = dist[static_cast<size_t>(s)][static_cast<size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
  }
  std::vector<std::vector<std::uint64_t>> ids(static_cast<size_t>(radius + 1),
                                              std::vector<std::uint64_t>(
                                                  static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const AtomInvariants &a = inv.atoms[static_cast<size_t>(i)];
    const std::int64_t t[] = { 0,        a.z,      a.isotope, a.degree,
                               a.in_ring, a.num_hs, a.num_1h,  a.num_2h,
                               a.num_3h,  a.cip_code };
    ids[0][static_cast<size_t>(i)] = hash_values(t);
  }
  for (int r = 1; r <= radius; ++r) {
    for (int i = 0; i < n; ++i) {
      std::vector<std::int64_t> nb;
      for (int v: adj[static_cast<size_t>(i)]) {
        nb.push_back(static_cast<std::int64_t>(
            ids[static_cast<size_t>(r - 1)][static_cast<size_t>(v)]));
      }
      std::sort(nb.begin(), nb.end());
      std::vector<std::int64_t> buf = {
        r, static_cast<std::int64_t>(
               ids[static_cast<size_t>(r - 1)][static_cast<size_t>(i)])
      };
      for (std::int64_t x: nb) {
        buf.push_back(0);
        buf.push_back(x);
      }
      ids[static_cast<size_t>(r)][static_cast<size_t>(i)] = hash_values(buf);
    }
  }
  SparseFingerprint fp;
  std::set<std::vector<int>> seen;
  for (int r = 0; r <= radius; ++r) {
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < n; ++i) {
      std::vector<int> s;
      for (int j = 0; j < n; ++j) {
        const int d = dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (d >= 0 && d <= r) {
          s.push_back(j);
        }
      }
      sets.push_back(s);
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // Same ordering as the bitset comparison: lexicographic over 64-bit
    // words with atom k at bit k, i.e. compare membership from the highest
    // atom of each word downward.
    auto word_key = [&](const std::vector<int> &s) {
      std::vector<std::uint64_t> w(static_cast<size_t>((n + 63) / 64), 0);
      for (int k: s) {
        w[static_cast<size_t>(k / 64)] |= std::uint64_t{ 1 } << (k % 64);
      }
      return w;
    };
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return std::pair(word_key(sets[static_cast<size_t>(x)]),
                       ids[static_cast<size_t>(r)][static_cast<size_t>(x)])
             < std::pair(word_key(sets[static_cast<size_t>(y)]),
                         ids[static_cast<size_t>(r)][static_cast<size_t>(y)]);
    });
    for (int i: order) {
      if (seen.insert(sets[static_cast<size_t>(i)]).second) {
        std::uint64_t key = ids[static_cast<size_t>(r)][static_cast<size_t>(i)];
        if (key < 2) {
          key |= std::uint64_t{ 1 } << 63;
        }
        fp[key] += 1;
      }
    }
  }
  return fp;
}

TEST(FingerprintTest, HashMatchesReferenceValues) {
  EXPECT_EQ(hash_values({}), 17665956581633026203ULL);
  const std::int64_t a[] = { 1, 2, 3 };
  EXPECT_EQ(hash_values(a), 12696223638411188064ULL);
  const std::int64_t b[] = { -1 };
  EXPECT_EQ(hash_values(b), 10922763448914652373ULL);
}

TEST(FingerprintTest, BenzeneRadiusZeroHasOneKey) {
  for (InvariantMode mode: { InvariantMode::kDaylight, InvariantMode::kInchified }) {
    const SparseFingerprint fp = fingerprint_smiles("c1ccccc1", 0, mode);
    ASSERT_EQ(fp.size(), 1u) << mode_name(mode);
    EXPECT_EQ(fp.begin()->second, 6u);
  }
  // (Z, Isotope, Degree, InRing, NumHs, ...) = (6, 0, 2, 1, 1, 0, 0, 0, 0).
  EXPECT_EQ(inchified("c1ccccc1", 0).begin()->first, 9906470057678804252ULL);
}

TEST(FingerprintTest, BenzeneEnvironmentCounts) {
  // Radii 1 and 2 give six distinct 3- and 5-atom arcs; radius 3 covers the
  // ring once; later radii add nothing.
  const SparseFingerprint r3 = inchified("c1ccccc1", 3);
  EXPECT_EQ(r3.size(), 4u);
  EXPECT_EQ(total_count(r3), 19u);
  EXPECT_EQ(inchified("c1ccccc1", 6), r3);
}

TEST(FingerprintTest, EthaneDeduplicatesSharedEnvironment) {
  const SparseFingerprint fp = inchified("CC", 1);
  ASSERT_EQ(fp.size(), 2u);
  EXPECT_EQ(total_count(fp), 3u);
}

TEST(FingerprintTest, ChargeKeys) {
  const SparseFingerprint oxalate = inchified("[O-]C(=O)C(=O)[O-]", 2);
  ASSERT_TRUE(oxalate.count(kNegativeChargeKey));
  EXPECT_EQ(oxalate.at(kNegativeChargeKey), 2u);
  EXPECT_FALSE(oxalate.count(kPositiveChargeKey));
  const SparseFingerprint ammonium = inchified("[NH4+]", 2);
  EXPECT_EQ(ammonium.at(kPositiveChargeKey), 1u);
  EXPECT_FALSE(ammonium.count(kNegativeChargeKey));
  for (const char *smi: { "CCO", "[Na+].[Cl-]", "C[N+](C)(C)CC(=O)[O-]" }) {
    const SparseFingerprint fp = inchified(smi, 2);
    EXPECT_FALSE(fp.count(kNegativeChargeKey)) << smi;
    EXPECT_FALSE(fp.count(kPositiveChargeKey)) << smi;
  }
}

TEST(FingerprintTest, DaylightHasNoReservedKeys) {
  for (const char *smi: { "[O-]C(=O)C(=O)[O-]", "[NH4+]", "[Na+]", "C" }) {
    const SparseFingerprint fp = daylight(smi, 2);
    EXPECT_FALSE(fp.count(0)) << smi;
    EXPECT_FALSE(fp.count(1)) << smi;
  }
}

TEST(FingerprintTest, StereoBondAddsKey) {
  const SparseFingerprint plain = inchified("FC=CF", 0);
  const SparseFingerprint e = inchified("F/C=C/F", 0);
  const SparseFingerprint z = inchified("F/C=C\\F", 0);
  EXPECT_EQ(total_count(e), total_count(plain) + 1);
  EXPECT_NE(e, z);
  std::vector<std::uint64_t> extra;
  for (const auto &[key, count]: e) {
    if (!plain.count(key)) {
      extra.push_back(key);
    }
  }
  EXPECT_EQ(extra.size(), 1u);
}

TEST(FingerprintTest, NegativeRadiusThrows) {
  EXPECT_THROW(inchified("CC", -1), std::invalid_argument);
  const MolGraph g = prepare_raw(parse_smiles("CC"));
  EXPECT_THROW(morgan_fingerprint(g, -1, InvariantMode::kDaylight),
               std::invalid_argument);
  EXPECT_THROW(morgan_fingerprint(InvariantSet{}, -1), std::invalid_argument);
}

TEST(FingerprintTest, MatchesDirectDefinition) {
  const char *molecules[] = {
    "c1ccccc1",          "CCO",    "CC(=O)Nc1ccc(O)cc1", "C1CC2CCC1CC2",
    "OC(=O)CC(N)C(=O)O", "C1CC1C", "c1ccc2ccccc2c1",     "CC(C)(C)C#N",
    "C.C.O",             "[Na+].[Cl-]", "C12C3C4C1C5C2C3C45",
  };
  for (const char *smi: molecules) {
    const InvariantSet inv = inchify(parse_smiles(smi)).invariants;
    for (int radius = 0; radius <= 5; ++radius) {
      SparseFingerprint got = morgan_fingerprint(inv, radius);
      got.erase(kNegativeChargeKey);
      got.erase(kPositiveChargeKey);
      EXPECT_EQ(got, oracle_fingerprint(inv, radius)) << smi << " r" << radius;
    }
  }
}

TEST(FingerprintTest, PermutationInvariance) {
  const char *molecules[] = {
    "CC(=O)Nc1ccc(O)cc1", "N[C@@H](C)C(=O)O", "F/C=C/C[C@H](Cl)CC",
    "CC(=O)[O-].[Na+]",   "Oc1ccncc1",        "CC(N)=[NH2+]",
    "C1=CC=CC=C1",        "OC(=O)CC(N)C(=O)O",
  };
  std::mt19937 rng(11);
  for (const char *smi: molecules) {
    const MolGraph g = parse_smiles(smi);
    for (InvariantMode mode: { InvariantMode::kDaylight, InvariantMode::kInchified }) {
      auto fp_of = [&](const MolGraph &m) {
        return mode == InvariantMode::kDaylight
                   ? morgan_fingerprint(prepare_raw(m), 3, mode)
                   : morgan_fingerprint(inchify(m).invariants, 3);
      };
      const SparseFingerprint base = fp_of(g);
      for (int t = 0; t < 10; ++t) {
        std::vector<int> perm(static_cast<size_t>(g.num_atoms()));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_EQ(fp_of(permute_atoms(g, perm)), base) << smi;
      }
    }
  }
}

TEST(FingerprintTest, EqualInvariantsGiveEqualFingerprints) {
  const InvariantSet a = inchify(parse_smiles("CC(=S)N")).invariants;
  const InvariantSet b = inchify(parse_smiles("CC(S)=N")).invariants;
  ASSERT_EQ(a, b);
  for (int r = 0; r <= 6; ++r) {
    EXPECT_EQ(morgan_fingerprint(a, r), morgan_fingerprint(b, r));
  }
}

TEST(FingerprintTest, DaylightSeesDepictionDifferences) {
  EXPECT_LT(tanimoto(daylight("CC(=S)N", 2), daylight("CC(S)=N", 2)), 1.0);
  EXPECT_LT(tanimoto(daylight("[Na]Cl", 2), daylight("[Na+].[Cl-]", 2)), 1.0);
  EXPECT_EQ(daylight("c1ccccc1", 2), daylight("c1ccccc1", 2));
}

TEST(FingerprintTest, TanimotoExamples) {
  const SparseFingerprint two = { { 5, 2 } };
  const SparseFingerprint one = { { 5, 1 } };
  const SparseFingerprint other = { { 6, 4 } };
  EXPECT_DOUBLE_EQ(tanimoto(two, one), 0.5);
  EXPECT_DOUBLE_EQ(tanimoto(two, two), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto(two, other), 0.0);
  EXPECT_DOUBLE_EQ(tanimoto({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto(two, {}), 0.0);
  const SparseFingerprint a = { { 1, 3 }, { 2, 1 }, { 9, 2 } };
  const SparseFingerprint b = { { 1, 1 }, { 9, 5 }, { 10, 1 } };
  // min: 1 + 0 + 2 + 0 = 3; max: 3 + 1 + 5 + 1 = 10.
  EXPECT_DOUBLE_EQ(tanimoto(a, b), 0.3);
}

TEST(FingerprintTest, TanimotoProperties) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> key(0, 12);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> size(0, 6);
  for (int t = 0; t < 500; ++t) {
    SparseFingerprint a;
    SparseFingerprint b;
    for (int k = size(rng); k > 0; --k) {
      a[static_cast<std::uint64_t>(key(rng))] = static_cast<std::uint32_t>(count(rng));
    }
    for (int k = size(rng); k > 0; --k) {
      b[static_cast<std::uint64_t>(key(rng))] = static_cast<std::uint32_t>(count(rng));
    }
    const double ab = tanimoto(a, b);
    EXPECT_DOUBLE_EQ(ab, tanimoto(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_DOUBLE_EQ(tanimoto(a, a), 1.0);
    EXPECT_EQ(ab == 1.0, a == b);
  }
}

TEST(FingerprintTest, TextAndJsonFormats) {
  const SparseFingerprint fp = { { 0, 2 }, { 12, 1 }, { 18446744073709551615ULL, 3 } };
  EXPECT_EQ(format_fingerprint(fp), "0:2 12:1 18446744073709551615:3");
  EXPECT_EQ(fingerprint_to_json(fp),
            "{\"0\":2,\"12\":1,\"18446744073709551615\":3}");
  EXPECT_EQ(format_fingerprint({}), "");
  EXPECT_EQ(fingerprint_to_json({}), "{}");
}

TEST(FingerprintTest, RingRelativeStereoHasNoLabel) {
  // Decalin bridgeheads are not CIP centers: each sees two equivalent ring
  // branches, so cis and trans collapse to the same fingerprint.
  EXPECT_EQ(inchified("C1CC[C@H]2CCCC[C@H]2C1", 2),
            inchified("C1CC[C@H]2CCCC[C@@H]2C1", 2));
}

TEST(FingerprintTest, ModeNames) {
  EXPECT_EQ(parse_invariant_mode("daylight"), InvariantMode::kDaylight);
  EXPECT_EQ(parse_invariant_mode("inchified"), InvariantMode::kInchified);
  EXPECT_THROW(parse_invariant_mode("ecfp"), std::invalid_argument);
  EXPECT_EQ(mode_name(InvariantMode::kInchified), "inchified");
}

}  // namespace
}  // namespace chemid
