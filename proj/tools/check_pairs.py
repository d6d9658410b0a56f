#!/usr/bin/env python3
#
# Project chemid - Copyright 2026 chemid authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Cross-checks the equivalence pair suite against RDKit InChIKeys.

Development aid only; the C++ build and tests do not depend on RDKit.
Prints one line per pair: InChIKey agreement, inchified equality at radii
2/4/6 and daylight Tanimoto at radius 2, computed with the chemid CLI.
"""

import argparse
import csv
import subprocess
import sys
import tempfile

from rdkit import Chem, RDLogger


def inchikey(smiles):
    mol = Chem.MolFromSmiles(smiles)
    if mol is None:
        mol = Chem.MolFromSmiles(smiles, sanitize=False)
        if mol is None:
            return "unparsable"
        mol.UpdatePropertyCache(strict=False)
    key = Chem.MolToInchiKey(mol)
    return key or "no-key"


def fingerprints(cli, smiles, radius, mode):
    with tempfile.NamedTemporaryFile("w", suffix=".smi", delete=False) as f:
        for i, s in enumerate(smiles):
            f.write(f"{s} m{i}\n")
        path = f.name
    out = subprocess.run([cli, "fingerprint", "--in", path, "--radius", str(radius),
                          "--mode", mode], capture_output=True, text=True)
    fps = {}
    for line in out.stdout.splitlines():
        ident, _, body = line.partition("\t")
        fps[ident] = dict((int(k), int(v)) for k, v in
                          (kv.split(":") for kv in body.split()))
    if out.stderr:
        sys.stderr.write(out.stderr)
    return [fps.get(f"m{i}") for i in range(len(smiles))]


def tanimoto(a, b):
    keys = set(a) | set(b)
    hi = sum(max(a.get(k, 0), b.get(k, 0)) for k in keys)
    lo = sum(min(a.get(k, 0), b.get(k, 0)) for k in keys)
    return 1.0 if hi == 0 else lo / hi


def main():
    RDLogger.DisableLog("rdApp.*")
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", default="build/chemid")
    ap.add_argument("pairs", nargs="?", default="tests/data/equivalence_pairs.tsv")
    args = ap.parse_args()
    with open(args.pairs) as f:
        rows = list(csv.DictReader(f, delimiter="\t"))
    smiles = [s for r in rows for s in (r["smiles_a"], r["smiles_b"])]
    inch = {r: fingerprints(args.cli, smiles, r, "inchified") for r in (2, 4, 6)}
    day = fingerprints(args.cli, smiles, 2, "daylight")
    bad = 0
    for i, r in enumerate(rows):
        ka, kb = inchikey(r["smiles_a"]), inchikey(r["smiles_b"])
        same = all(inch[rad][2 * i] is not None and inch[rad][2 * i] == inch[rad][2 * i + 1]
                   for rad in (2, 4, 6))
        t = tanimoto(day[2 * i] or {}, day[2 * i + 1] or {})
        expect_diff = r["daylight_differs"] == "1"
        agrees = (ka == kb) == (r["inchikey_agrees"] == "1")
        ok = same and (t < 1.0) == expect_diff and agrees
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {r['id']:28s} inchikey={'same' if ka == kb else 'DIFF'}"
              f" inchified={'same' if same else 'DIFF'} daylight_t2={t:.4f}"
              f" {ka} {kb}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
