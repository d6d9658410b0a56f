//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMID_CORPUS_H_
#define CHEMID_CORPUS_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chemid/fingerprint.h"
#include "chemid/mol_graph.h"
#include "chemid/pipeline.h"

namespace chemid {

class CorpusError: public Error {
public:
  using Error::Error;
};

enum class CorpusFormat { kTsv, kSmi };

// "tsv" / "smi"; throws std::invalid_argument otherwise.
CorpusFormat parse_corpus_format(const std::string &name);

// Picks the format from the file extension: .tsv is tsv, anything else smi.
CorpusFormat guess_corpus_format(const std::string &path);

struct CorpusRecord {
  std::string smiles;
  // External identity key (e.g. an InChIKey). For .smi input the optional
  // second column, else the line number.
  std::string identity_key;
  std::optional<double> label;
  int line = 0;
};

struct SkippedLine {
  int line = 0;
  std::string reason;
};

struct LoadOptions {
  // Drops molecules with more than max_heavy_atoms non-hydrogen atoms.
  bool filter_large = false;
  int max_heavy_atoms = 100;
};

/**
 * Streaming reader. TSV files start with the header "smiles<TAB>identityKey"
 * optionally followed by "<TAB>label"; SMI files hold "SMILES [name]" per
 * line. Blank lines and lines starting with '#' are ignored. Lines whose
 * SMILES does not parse are skipped and recorded.
 */
class CorpusReader {
public:
  // Throws CorpusError for a missing file or a malformed TSV header.
  CorpusReader(const std::string &path, CorpusFormat format,
               const LoadOptions &options = {});

  std::optional<CorpusRecord> next();

  const std::vector<SkippedLine> &skipped() const { return skipped_; }

private:
  std::ifstream in_;
  CorpusFormat format_;
  LoadOptions options_;
  bool has_label_ = false;
  int line_ = 0;
  std::vector<SkippedLine> skipped_;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::vector<SkippedLine> skipped;
};

Corpus load_corpus(const std::string &path, CorpusFormat format,
                   const LoadOptions &options = {});

// Number of non-hydrogen atoms in a parsed SMILES.
int heavy_atom_count(const MolGraph &g);

struct ConfusionMatrix {
  std::uint64_t samekey_samefp = 0;
  std::uint64_t samekey_difffp = 0;
  std::uint64_t diffkey_samefp = 0;
  std::uint64_t diffkey_difffp = 0;

  std::uint64_t total() const {
    return samekey_samefp + samekey_difffp + diffkey_samefp + diffkey_difffp;
  }
  ConfusionMatrix &operator+=(const ConfusionMatrix &other);
  bool operator==(const ConfusionMatrix &) const = default;
};

struct CompareOptions {
  int window = 100;
  int radius = 2;
  int threads = 1;
  PipelineOptions pipeline;
};

struct FeaturizeFailure {
  int line = 0;
  std::string message;
};

struct PairComparison {
  ConfusionMatrix daylight;
  ConfusionMatrix inchified;
  // Records whose fingerprint could not be computed; they take no part in
  // any comparison.
  std::vector<FeaturizeFailure> failures;
};

/**
 * Compares every record i with records i+1 .. i+window: identity-key equality
 * against exact fingerprint equality, for both invariant modes. Records must
 * be sorted by identity key (CorpusError otherwise). Results do not depend on
 * the thread count.
 */
PairComparison compare_pairs(const std::vector<CorpusRecord> &records,
                             const CompareOptions &options = {});

struct EquivalentPair {
  std::string a;
  std::string b;
};

// All pairs (i, j), j in (i, i+window], with equal identity keys.
std::vector<EquivalentPair> equivalent_pairs(
    const std::vector<CorpusRecord> &records, int window);

struct QuantileRow {
  InvariantMode mode = InvariantMode::kDaylight;
  int radius = 0;
  double quantile = 0;
  double value = 0;
};

// Nearest-rank quantile: the ceil(q * N)-th smallest value (1-based, at least
// the first). Throws std::invalid_argument for an empty sample or q outside
// [0, 1].
double nearest_rank(std::vector<double> values, double q);

/**
 * Tanimoto quantiles over equivalent pairs, one row per (mode, radius,
 * quantile) with daylight first, then radii and quantiles in the given
 * order. Throws std::invalid_argument for an empty pair set.
 */
std::vector<QuantileRow> tanimoto_quantiles(
    const std::vector<EquivalentPair> &pairs, const std::vector<int> &radii,
    const std::vector<double> &quantiles, int threads = 1,
    const PipelineOptions &options = {});

// Thread count from the CHEMID_THREADS environment variable, else 1.
int default_thread_count();

/**
 * Runs body(i) for i in [0, n) on `threads` workers with static contiguous
 * chunks. The first exception thrown by any worker is rethrown.
 */
void parallel_for(size_t n, int threads, const std::function<void(size_t)> &body);

}  // namespace chemid

#endif  // CHEMID_CORPUS_H_
