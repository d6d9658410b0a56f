#!/usr/bin/env python3
#
# Project chemid - Copyright 2026 chemid authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Builds tests/data/golden_keyed.tsv: SMILES keyed by RDKit InChIKeys.

Development aid only. The checked-in TSV is the test input; rerun this
script when the molecule lists change. Records are sorted by
(identityKey, SMILES) as compare_pairs requires.
"""

import csv
import sys

from rdkit import Chem, RDLogger

# Further depictions sharing an identity with a suite pair.
EXTRA_DEPICTIONS = [
    "C[NH+]=C(C)[O-]",
    "CC(=[NH2+])[S-]",
    "[O-]C(=O)CN.[H+]",
    "O=C1C=CC=CN1",
    "OC1=NC=CC=C1",
    "[O-]c1cccc[nH+]1",
    "CC1=CN=CN1",
    "CC1=CNC=N1",
    "OC1C=CC=CC=1",
    "CC1C=CC=CC=1",
    "CC(=S)N[3H]",
]

# Distinct identities, including stereo, isotope and charge near misses.
# Ring-relative stereo (cis/trans decalin) is left out: it has no CIP label.
DISTINCT = [
    "CC(=O)Oc1ccccc1C(=O)O",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "CC(=O)Nc1ccc(O)cc1",
    "c1ccc2c(c1)ccc1ccccc12",
    "C1CCCCC1",
    "C1CCCC1",
    "CCCCCC",
    "CC(C)CC",
    "CC(C)(C)C",
    "CCO",
    "CC[2H]",
    "C([2H])([2H])([2H])O",
    "CO",
    "OC[C@H](N)C(=O)O",
    "OC[C@@H](N)C(=O)O",
    "N[C@@H](C)C(=O)O",
    "N[C@H](C)C(=O)O",
    "C/C=C/C",
    "C/C=C\\C",
    "F/C=C/F",
    "F/C=C\\F",
    "CC(=O)[O-]",
    "CC(=O)O",
    "C[NH3+]",
    "c1ccncc1",
    "c1cc[nH]c1",
    "c1ccoc1",
    "c1ccsc1",
    "O=C(O)c1ccccc1",
    "Oc1ccccc1C",
    "Oc1cccc(C)c1",
    "Oc1ccc(C)cc1",
    "ClC(Cl)Cl",
    "BrCCBr",
    "C#N",
    "CC#N",
    "N#CC#N",
    "OCC(O)CO",
    "O=C1CCCCC1",
    "CC(C)=O",
    "CC=O",
    "C=O",
    "O=CO",
    "NC(N)=O",
    "NC(=O)c1ccccc1",
    "c1ccc2[nH]ccc2c1",
    "C1=CC2=CC=CC=CC2=C1",
    "[K+].[Br-]",
    "[Ca+2].[Cl-].[Cl-]",
    "O=P(O)(O)O",
    "OS(=O)(=O)O",
    "C[C@H](O)CC",
    "C[C@@H](O)CC",
]


def key(smiles):
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        # Literal pentavalent depictions fail sanitization but still key.
        mol = Chem.MolFromSmiles(smiles, sanitize=False)
        if mol is None:
            return None
        mol.UpdatePropertyCache(strict=False)
    return Chem.MolToInchiKey(mol) or None


def main():
    RDLogger.DisableLog("rdApp.*")
    rows = {}
    with open("tests/data/equivalence_pairs.tsv") as f:
        pairs = list(csv.DictReader(f, delimiter="\t"))
    suite_keys = set()
    for p in pairs:
        if p["inchikey_agrees"] != "1":
            continue
        for s in (p["smiles_a"], p["smiles_b"]):
            k = key(s)
            rows[s] = k
            suite_keys.add(k)
    for s in EXTRA_DEPICTIONS:
        k = key(s)
        if k is not None and k in suite_keys:
            rows[s] = k
        else:
            print(f"skipping extra depiction {s}: key {k} not in suite",
                  file=sys.stderr)
    for s in DISTINCT:
        k = key(s)
        if k is None:
            sys.exit(f"RDKit rejects {s}")
        rows[s] = k
    ordered = sorted(rows.items(), key=lambda kv: (kv[1], kv[0]))
    with open("tests/data/golden_keyed.tsv", "w") as f:
        f.write("smiles\tidentityKey\n")
        for s, k in ordered:
            f.write(f"{s}\t{k}\n")
    print(f"{len(ordered)} records, {len(set(rows.values()))} identities",
          file=sys.stderr)


if __name__ == "__main__":
    main()
