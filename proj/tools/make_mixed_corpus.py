#!/usr/bin/env python3
#
# Project chemid - Copyright 2026 chemid authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Builds the seeded random corpora under tests/data.

mixed_corpus.smi: 1,000 molecules mixing drug-like scaffolds, salts, metal
complexes, zwitterions, isotopes and stereo, written as randomized (and
sometimes Kekule) SMILES. bench_corpus.smi: 20 molecules per 10-atom bin,
1 to 100 heavy atoms. Development aid only; RDKit filters out chemically
invalid assemblies and is not needed by the build.
"""

import random

from rdkit import Chem, RDLogger

SEED = 20261014

# Substituent blocks; "*" marks where the next block attaches.
BLOCKS = [
    "C*", "CC*", "C(C)*", "C(C)(C)*", "N*", "O*", "S*", "C(=O)*", "C(=O)O*",
    "C(=O)N*", "S(=O)(=O)*", "c1ccc(cc1)*", "c1ccncc1*", "c1cc[nH]c1*",
    "C1CCN(CC1)*", "C1CCOCC1*", "c1ccc2ccccc2c1*", "C(F)(F)*", "C=C*",
    "/C=C/*", "[C@H](N)*", "[C@@H](O)*", "C#C*", "P(=O)(O)*", "c1cnc[nH]1*",
    "C(=N)N*", "C(=S)N*", "OC(=O)*", "[N+](C)(C)*", "C[2H]*",
]
CAPS = ["", "C", "O", "N", "F", "Cl", "Br", "C(=O)O", "C(=O)[O-]", "C#N",
        "[N+](=O)[O-]", "[NH3+]", "S(=O)C", "O[13C]", "C(=O)[O-].[Na+]"]
ADDITIONS = ["", "", "", ".[Na+]", ".[K+]", ".Cl", ".[Cl-]", ".O", ".[Mg+2]",
             ".[Li]", ".CC(=O)O"]
TEMPLATES = [
    "CC(=O)O[Na]", "C[O-].[Na+]", "[Mg](CC)Br", "[Fe](Cl)(Cl)Cl",
    "OC(=O)CC[NH3+]", "C[S+](C)[O-]", "CC(=O)[CH-][N+]#N", "CC(=O)[NH-]",
    "Oc1ccccn1", "CC(S)=N", "N=C(O)C=C", "C[N@]1CC1F", "F/C=C/F",
    "[2H]OC(=O)C", "C[N+](C)(C)C.[OH-]", "[O-]C(=O)C[N+](C)(C)C",
]


def assemble(rng, n_blocks):
    smiles = "*"
    for _ in range(n_blocks):
        smiles = smiles.replace("*", rng.choice(BLOCKS), 1)
    return smiles.replace("*", rng.choice(CAPS), 1)


def depiction(rng, mol):
    if rng.random() < 0.25:
        m = Chem.Mol(mol)
        Chem.Kekulize(m, clearAromaticFlags=True)
        return Chem.MolToSmiles(m, kekuleSmiles=True, doRandom=True)
    return Chem.MolToSmiles(mol, doRandom=True)


def valid(smiles):
    mol = Chem.MolFromSmiles(smiles)
    return mol if mol is not None and mol.GetNumAtoms() > 0 else None


def mixed(rng, count):
    out, seen = [], set()
    while len(out) < count:
        if rng.random() < 0.1:
            smi = rng.choice(TEMPLATES)
        else:
            smi = assemble(rng, rng.randint(1, 8)) + rng.choice(ADDITIONS)
        mol = valid(smi)
        if mol is None:
            continue
        d = depiction(rng, mol)
        if d in seen:
            continue
        seen.add(d)
        out.append(d)
    return out


def bench(rng, per_bin, bins):
    buckets = [[] for _ in range(bins)]
    while any(len(b) < per_bin for b in buckets):
        target = next(i for i, b in enumerate(buckets) if len(b) < per_bin)
        mol = valid(assemble(rng, rng.randint(max(1, 2 * target), 4 * target + 2)))
        if mol is None:
            continue
        heavy = mol.GetNumHeavyAtoms()
        bin_index = (heavy - 1) // 10
        if bin_index < bins and len(buckets[bin_index]) < per_bin:
            buckets[bin_index].append(depiction(rng, mol))
    return [s for b in buckets for s in b]


def write(path, smiles, prefix):
    with open(path, "w") as f:
        for i, s in enumerate(smiles):
            f.write(f"{s} {prefix}{i:04d}\n")


def main():
    RDLogger.DisableLog("rdApp.*")
    rng = random.Random(SEED)
    write("tests/data/mixed_corpus.smi", mixed(rng, 1000), "mix")
    write("tests/data/bench_corpus.smi", bench(rng, 20, 10), "bench")


if __name__ == "__main__":
    main()
