//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/pipeline.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chemid/fingerprint.h"
#include "chemid/kekulize.h"
#include "chemid/smiles.h"

namespace chemid {
namespace {

int order_halves(const MolGraph &g, int i, int j) {
  auto id = g.find_bond(i, j);
  return id ? g.bond(*id).order.halves() : 0;
}

MolGraph prepared(const std::string &smiles) {
  MolGraph g = parse_smiles(smiles);
  compute_total_charge(g);
  kekulize(g);
  fold_hydrogens(g);
  perceive_rings(g);
  return g;
}

// Step 1

TEST(PipelineTest, TotalCharge) {
  MolGraph g = parse_smiles("CCO");
  compute_total_charge(g);
  EXPECT_EQ(g.total_charge, 0);
  g = parse_smiles("CC(=O)[O-]");
  compute_total_charge(g);
  EXPECT_EQ(g.total_charge, -1);
  g = parse_smiles("C[N+](C)(C)C");
  compute_total_charge(g);
  EXPECT_EQ(g.total_charge, 1);
}

TEST(PipelineTest, TotalChargeIsNotRecomputed) {
  MolGraph g = parse_smiles("[O-]");
  g.total_charge = 3;
  compute_total_charge(g);
  EXPECT_EQ(g.total_charge, 3);
}

TEST(PipelineTest, FoldsDeuteratedWater) {
  MolGraph g = parse_smiles("[2H]O[2H]");
  auto t = fold_hydrogens(g);
  EXPECT_EQ(t.applications, 2);
  EXPECT_EQ(g.atom(1).num_hs, 2);
  EXPECT_EQ(g.atom(1).set_hs, std::vector<int>({ 0, 2 }));
  EXPECT_TRUE(g.atom(0).phantom);
  EXPECT_TRUE(g.atom(2).phantom);
  EXPECT_EQ(g.atom(1).degree, 0);
  EXPECT_EQ(g.initial_set_hs, std::vector<int>({ 0, 2 }));
}

TEST(PipelineTest, FoldsProton) {
  MolGraph g = parse_smiles("C.[H+]");
  auto t = fold_hydrogens(g);
  EXPECT_TRUE(g.atom(1).phantom);
  EXPECT_EQ(g.atom(0).num_hs, 4);
  EXPECT_EQ(t.touched, std::vector<int>({ 1 }));
}

TEST(PipelineTest, FoldsMolecularHydrogenIntoSecondAtom) {
  // Atom 0 is visited first and qualifies against atom 1.
  MolGraph g = parse_smiles("[H][H]");
  fold_hydrogens(g);
  EXPECT_TRUE(g.atom(0).phantom);
  EXPECT_FALSE(g.atom(1).phantom);
  EXPECT_EQ(g.atom(1).num_hs, 1);
  EXPECT_EQ(g.num_live_bonds(), 0);
}

TEST(PipelineTest, FoldsMixedIsotopesOntoNitrogen) {
  MolGraph g = parse_smiles("[2H][NH][3H]");
  fold_hydrogens(g);
  EXPECT_EQ(g.atom(1).num_hs, 3);
  EXPECT_EQ(g.atom(1).set_hs, std::vector<int>({ 0, 2 }));
}

TEST(PipelineTest, FoldWithoutExplicitHydrogensIsIdentity) {
  MolGraph g = parse_smiles("C");
  const std::string before = dump_graph(g);
  auto t = fold_hydrogens(g);
  EXPECT_EQ(t.applications, 0);
  EXPECT_EQ(dump_graph(g), before);
}

TEST(PipelineTest, FoldKeepsTetrahedralConfiguration) {
  MolGraph a = prepared("F[C@H](Cl)Br");
  MolGraph b = prepared("F[C@@](Cl)([H])Br");
  MolGraph c = prepared("[H][C@@](F)(Cl)Br");
  MolGraph d = prepared("[H][C@](F)(Cl)Br");
  EXPECT_EQ(a.atom(1).chiral_tag, b.atom(1).chiral_tag);
  EXPECT_EQ(a.atom(1).chiral_tag, c.atom(1).chiral_tag);
  EXPECT_NE(a.atom(1).chiral_tag, d.atom(1).chiral_tag);
}

TEST(PipelineTest, FoldReanchorsDoubleBondStereo) {
  // H trans to F means the methyl is cis to F.
  MolGraph a = prepared("F/C=C(/[H])C");
  EXPECT_EQ(a.bond(1).stereo, BondStereo::kCis);
  EXPECT_EQ(a.bond(1).stereo_atoms, (std::array<int, 2> { 0, 4 }));
  EXPECT_EQ(prepared("F/C=C\\C").bond(1).stereo, BondStereo::kCis);
  // Nothing is left to anchor on when the folded H was the only substituent.
  EXPECT_EQ(prepared("F/C=C/[H]").bond(1).stereo, BondStereo::kNone);
}

// Step 2

TEST(PipelineTest, DisconnectsSodiumChloride) {
  MolGraph g = parse_smiles("[Na]Cl");
  auto t = disconnect_metals(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(0).charge, 1);
  EXPECT_EQ(g.atom(1).charge, -1);
  EXPECT_EQ(g.num_live_bonds(), 0);
}

TEST(PipelineTest, DisconnectionTurnsRadicalsIntoCharge) {
  MolGraph g = parse_smiles("C[CH][Na]");
  ASSERT_EQ(g.atom(1).num_radicals, 1);
  disconnect_metals(g);
  EXPECT_EQ(g.atom(2).charge, 2);
  EXPECT_EQ(g.atom(1).charge, -2);
  EXPECT_EQ(g.atom(1).num_radicals, 0);
}

TEST(PipelineTest, DisconnectionDropsNeighborStereo) {
  MolGraph g = parse_smiles("[Na]O[C@H](F)Cl");
  disconnect_metals(g);
  EXPECT_EQ(g.atom(1).chiral_tag, ChiralTag::kNone);
  g = parse_smiles("F/C=C/[Li]");
  disconnect_metals(g);
  EXPECT_EQ(g.bond(1).stereo, BondStereo::kNone);
}

TEST(PipelineTest, MetalFreeMoleculeUnchanged) {
  MolGraph g = parse_smiles("CC(=O)O");
  const std::string before = dump_graph(g);
  EXPECT_EQ(disconnect_metals(g).applications, 0);
  EXPECT_EQ(dump_graph(g), before);
}

// Step 3

TEST(PipelineTest, NormalizationRuleOne) {
  MolGraph g = parse_smiles("C[N-][N+](C)(C)C");
  auto t = normalize_charges(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(1).charge, 0);
  EXPECT_EQ(g.atom(2).charge, 0);
  EXPECT_EQ(order_halves(g, 1, 2), 4);
  // The pentavalent N is applied literally and flagged.
  ASSERT_EQ(t.audit.size(), 1U);
  EXPECT_NE(t.audit[0].find("atom 2"), std::string::npos);
}

TEST(PipelineTest, NormalizationRuleTwo) {
  MolGraph g = parse_smiles("[O-]C=[N+](C)C");
  normalize_charges(g);
  EXPECT_EQ(g.atom(0).charge, 0);
  EXPECT_EQ(g.atom(2).charge, 0);
  EXPECT_EQ(order_halves(g, 0, 1), 4);
  EXPECT_EQ(order_halves(g, 1, 2), 2);
}

TEST(PipelineTest, NormalizationRuleThree) {
  MolGraph g = parse_smiles("[CH2+]N");
  auto t = normalize_charges(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(0).charge, 0);
  EXPECT_EQ(g.atom(1).charge, 1);
  EXPECT_EQ(order_halves(g, 0, 1), 4);
  EXPECT_TRUE(t.audit.empty());
}

TEST(PipelineTest, NormalizationRuleFour) {
  MolGraph g = parse_smiles("C[O+]=CN(C)C");
  normalize_charges(g);
  EXPECT_EQ(g.atom(1).charge, 0);
  EXPECT_EQ(g.atom(3).charge, 1);
  EXPECT_EQ(order_halves(g, 1, 2), 2);
  EXPECT_EQ(order_halves(g, 2, 3), 4);
}

TEST(PipelineTest, NormalizationRuleFive) {
  MolGraph g = parse_smiles("C[N+](C)(C)C=C[NH-]");
  auto t = normalize_charges(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(1).charge, 0);
  EXPECT_EQ(g.atom(6).charge, 0);
  EXPECT_EQ(order_halves(g, 1, 4), 4);
  EXPECT_EQ(order_halves(g, 4, 5), 2);
  EXPECT_EQ(order_halves(g, 5, 6), 4);
}

TEST(PipelineTest, NormalizationLeavesUnchargedMolecule) {
  MolGraph g = parse_smiles("CC(=O)NC");
  const std::string before = dump_graph(g);
  EXPECT_EQ(normalize_charges(g).applications, 0);
  EXPECT_EQ(dump_graph(g), before);
}

TEST(PipelineTest, NormalizationDropsStereoOfModifiedBonds) {
  MolGraph g = parse_smiles("F/C([O-])=[N+](/C)C");
  ASSERT_NE(g.bond(2).stereo, BondStereo::kNone);
  normalize_charges(g);
  EXPECT_EQ(order_halves(g, 1, 3), 2);
  EXPECT_EQ(g.bond(2).stereo, BondStereo::kNone);
}

// Step 4

TEST(PipelineTest, SoftDeprotonation) {
  MolGraph g = parse_smiles("[NH4+]");
  auto t = deprotonate(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(0).charge, 0);
  EXPECT_EQ(g.atom(0).num_hs, 3);
}

TEST(PipelineTest, ChainDeprotonation) {
  MolGraph g = parse_smiles("OC=[N+](C)C");
  auto t = deprotonate(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(g.atom(0).num_hs, 0);
  EXPECT_EQ(g.atom(2).charge, 0);
  EXPECT_EQ(order_halves(g, 0, 1), 4);
  EXPECT_EQ(order_halves(g, 1, 2), 2);
}

TEST(PipelineTest, LongChainDeprotonation) {
  MolGraph g = parse_smiles("OC=CC=[N+](C)C");
  deprotonate(g);
  EXPECT_EQ(g.atom(0).num_hs, 0);
  EXPECT_EQ(g.atom(4).charge, 0);
  EXPECT_EQ(order_halves(g, 0, 1), 4);
  EXPECT_EQ(order_halves(g, 1, 2), 2);
  EXPECT_EQ(order_halves(g, 2, 3), 4);
  EXPECT_EQ(order_halves(g, 3, 4), 2);
}

TEST(PipelineTest, ChainLengthIsConfigurable) {
  MolGraph g = parse_smiles("OC=CC=[N+](C)C");
  PipelineOptions options;
  options.max_n = 0;
  EXPECT_EQ(deprotonate(g, options).applications, 0);
}

TEST(PipelineTest, NeutralAmineNotDeprotonated) {
  MolGraph g = parse_smiles("CCN");
  EXPECT_EQ(deprotonate(g).applications, 0);
}

// Step 5

TEST(PipelineTest, NeutralizesAcetate) {
  MolGraph g = parse_smiles("CC(=O)[O-]");
  neutralize_fragments(g);
  EXPECT_EQ(g.atom(3).charge, 0);
  EXPECT_EQ(g.atom(3).num_hs, 1);
}

TEST(PipelineTest, NeutralizesProtonatedEther) {
  MolGraph g = parse_smiles("C[OH+]C");
  neutralize_fragments(g);
  EXPECT_EQ(g.atom(1).charge, 0);
  EXPECT_EQ(g.atom(1).num_hs, 0);
}

TEST(PipelineTest, NeutralFragmentUnaltered) {
  MolGraph g = parse_smiles("CC(=O)[O-].CCO.[Na+]");
  neutralize_fragments(g);
  EXPECT_EQ(g.atom(3).charge, 0);
  EXPECT_EQ(g.atom(6).num_hs, 1);
  EXPECT_EQ(g.atom(7).charge, 1);
}

TEST(PipelineTest, QuaternaryCationKeepsCharge) {
  MolGraph g = parse_smiles("C[N+](C)(C)C");
  EXPECT_EQ(neutralize_fragments(g).applications, 0);
  EXPECT_EQ(g.atom(1).charge, 1);
}

// Step 6

TEST(PipelineTest, ReducesSulfurValence) {
  MolGraph g = parse_smiles("[SH4]");
  EXPECT_EQ(reduce_valence(g).applications, 1);
  EXPECT_EQ(g.atom(0).num_hs, 2);
}

TEST(PipelineTest, ReducesPhosphorusValence) {
  MolGraph g = parse_smiles("[PH5]");
  reduce_valence(g);
  EXPECT_EQ(g.atom(0).num_hs, 3);
}

TEST(PipelineTest, MethaneUnchangedByValenceReduction) {
  MolGraph g = parse_smiles("C");
  EXPECT_EQ(reduce_valence(g).applications, 0);
  EXPECT_EQ(g.atom(0).num_hs, 4);
}

// Step 7

TEST(PipelineTest, TagsAmidiniumChain) {
  MolGraph g = parse_smiles("C[N+](C)=CN(C)C");
  auto t = detect_movable_charges(g);
  EXPECT_EQ(t.applications, 1);
  EXPECT_EQ(order_halves(g, 1, 3), 3);
  EXPECT_EQ(order_halves(g, 3, 4), 3);
  EXPECT_EQ(g.atom(1).charge, 1);
}

TEST(PipelineTest, MovableChargeNeedsHydrogenFreeNitrogen) {
  MolGraph g = parse_smiles("C[N+](C)=CNC");
  EXPECT_EQ(detect_movable_charges(g).applications, 0);
}

// Step 8

TEST(PipelineTest, ThioamideTautomer) {
  MolGraph g = parse_smiles("CC(=S)N");
  auto t = detect_tautomers(g);
  EXPECT_GE(t.applications, 1);
  EXPECT_EQ(g.atom(2).charge, -1);
  EXPECT_EQ(g.atom(3).charge, -1);
  EXPECT_EQ(g.atom(2).num_hs, 0);
  EXPECT_EQ(g.atom(3).num_hs, 0);
  EXPECT_EQ(order_halves(g, 1, 2), 3);
  EXPECT_EQ(order_halves(g, 1, 3), 3);
}

TEST(PipelineTest, SaturatedAlcoholHasNoTautomer) {
  MolGraph g = parse_smiles("CCO");
  EXPECT_EQ(detect_tautomers(g).applications, 0);
}

TEST(PipelineTest, MovableChargeTagsFeedTautomerSearch) {
  // O=C-C(=[N+])-N-OH: the C-N bond only alternates once Step 7 tags the
  // amidinium, which opens the O=C-C:N-O(H) tautomer path.
  const std::string smiles = "ON(C)C(C=O)=[N+](C)C";
  MolGraph direct = parse_smiles(smiles);
  EXPECT_EQ(detect_tautomers(direct).applications, 0);
  EXPECT_EQ(direct.atom(0).num_hs, 1);
  MolGraph chained = parse_smiles(smiles);
  EXPECT_EQ(detect_movable_charges(chained).applications, 1);
  EXPECT_GE(detect_tautomers(chained).applications, 1);
  EXPECT_EQ(chained.atom(0).num_hs, 0);
  EXPECT_EQ(chained.atom(5).charge, -1);
}

// Step 9

TEST(PipelineTest, MobileDeuteriumIsReleased) {
  InchifyResult r = inchify(parse_smiles("CC(=O)N([2H])[2H]"));
  EXPECT_FALSE(r.graph.atom(4).phantom);
  EXPECT_FALSE(r.graph.atom(5).phantom);
  EXPECT_EQ(r.graph.atom(3).num_2h, 0);
}

TEST(PipelineTest, FixedDeuteriumStaysFolded) {
  InchifyResult r = inchify(parse_smiles("CCO[2H]"));
  EXPECT_TRUE(r.graph.atom(3).phantom);
  EXPECT_EQ(r.graph.atom(2).num_2h, 1);
  EXPECT_EQ(r.graph.atom(2).num_hs, 1);
}

TEST(PipelineTest, NoIsotopesNoRelease) {
  MolGraph g = prepared("CCO");
  EXPECT_EQ(restore_mobile_isotopes(g).applications, 0);
}

// Driver

TEST(PipelineTest, BenzeneInvariants) {
  InchifyResult r = inchify(parse_smiles("c1ccccc1"));
  ASSERT_EQ(r.invariants.atoms.size(), 6U);
  for (const AtomInvariants &a: r.invariants.atoms) {
    EXPECT_EQ(a, (AtomInvariants { 6, 0, 2, true, 1, 0, 0, 0, 0 }));
  }
  EXPECT_EQ(r.invariants.charge, 0);
  EXPECT_EQ(r.traces.size(), 10U);
  for (size_t k = 0; k < r.traces.size(); ++k) {
    EXPECT_EQ(r.traces[k].step, static_cast<int>(k) + 1);
  }
}

TEST(PipelineTest, SaltFormsAgree) {
  EXPECT_EQ(inchify(parse_smiles("[Na]Cl")).invariants,
            inchify(parse_smiles("[Na+].[Cl-]")).invariants);
}

TEST(PipelineTest, ThioamideFormsAgree) {
  EXPECT_EQ(inchify(parse_smiles("CC(=S)N")).invariants,
            inchify(parse_smiles("CC(S)=N")).invariants);
}

TEST(PipelineTest, ChargeCarriedThrough) {
  InchifyResult r = inchify(parse_smiles("CC(=O)[O-]"));
  EXPECT_EQ(r.graph.total_charge, -1);
  EXPECT_EQ(r.invariants.charge, -1);
}

TEST(PipelineTest, ErrorsCarryStepIndex) {
  try {
    inchify(parse_smiles("c1cccc1"));
    FAIL() << "expected a pipeline error";
  } catch (const PipelineError &e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(PipelineTest, InvariantJsonLayout) {
  InchifyResult r = inchify(parse_smiles("[Na+].[OH-]"));
  EXPECT_EQ(to_json(r.invariants),
            "{\"charge\":0,\"atom_ids\":[0,1],"
            "\"atoms\":[[11,0,0,0,0,0,0,0,0],[8,0,0,0,2,0,0,0,0]],"
            "\"bonds\":[]}");
}

TEST(PipelineTest, PhantomsExcludedFromInvariants) {
  InchifyResult r = inchify(parse_smiles("[H]OC"));
  EXPECT_EQ(r.invariants.atom_ids, std::vector<int>({ 1, 2 }));
  ASSERT_EQ(r.invariants.bonds.size(), 1U);
  EXPECT_EQ(r.invariants.bonds[0].begin, 1);
}

TEST(PipelineTest, IdempotentOnMechanismSamples) {
  const char *samples[] = {
    "CC(=S)N",         "[Na]Cl",           "CC(=O)[O-].[Na+]", "C[NH3+]",
    "OC=CC=[N+](C)C",  "C[N+](C)=CN(C)C",  "CC(=O)N([2H])[2H]", "[SH4]",
    "c1ccc(O)cc1",     "N[C@@H](C)C(=O)O", "F/C=C/F",           "O=c1cccc[nH]1",
    "C[N-][N+](C)(C)C", "[O-][n+]1ccccc1", "CC(=O)C",          "Oc1ncccc1",
  };
  for (const char *smi: samples) {
    InchifyResult once = inchify(parse_smiles(smi));
    InchifyResult twice = inchify(once.graph);
    EXPECT_EQ(to_json(once.invariants), to_json(twice.invariants)) << smi;
  }
}

TEST(PipelineTest, LateChargePairsSettleInOneCall) {
  // Step 5 turns the hydroxyl into O- next to N+, a pair only Step 3 handles;
  // tautomer endpoint charges likewise feed back into Step 5.
  for (const char *smi: { "O[N+](C)(C)N.[K+]",
                          "C(NC(F)([C@@H](O)NC(O[N+](CC)(C)C)=O)F)=S" }) {
    const InchifyResult once = inchify(parse_smiles(smi));
    EXPECT_EQ(once.traces.size(), 10U);
    EXPECT_EQ(inchify(once.graph).invariants, once.invariants) << smi;
  }
}

TEST(PipelineTest, StableInputTakesSinglePassTraces) {
  const InchifyResult r = inchify(parse_smiles("CC(=O)[O-].[Na+]"));
  ASSERT_EQ(r.traces.size(), 10U);
  EXPECT_EQ(r.traces[1].applications, 0);
  EXPECT_EQ(r.traces[4].applications, 1);
}

TEST(PipelineTest, CompetingMatchesChosenByAtomClass) {
  // A cation with several [X;H1] sites: which one Step 5 deprotonates must
  // not depend on atom order.
  const MolGraph g = parse_smiles(
      "O=C(OO)NC(=O)P(O)(=O)C(O[N+](C)(C)[PH](=O)O)=O.OC(=O)C");
  const SparseFingerprint base = morgan_fingerprint(inchify(g).invariants, 2);
  std::mt19937 rng(5150);
  for (int t = 0; t < 30; ++t) {
    std::vector<int> perm(static_cast<size_t>(g.num_atoms()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(morgan_fingerprint(inchify(permute_atoms(g, perm)).invariants, 2), base);
  }
}

TEST(PipelineTest, StepOneRecordsAtomClasses) {
  const InchifyResult r = inchify(parse_smiles("OCC"));
  EXPECT_EQ(r.graph.atom_priority.size(), 3U);
}

}  // namespace
}  // namespace chemid
