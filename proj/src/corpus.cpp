//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemid/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chemid/smiles.h"

namespace chemid {
namespace {

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) {
      break;
    }
    start = tab + 1;
  }
  return out;
}

void strip_cr(std::string &line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

bool ignorable(const std::string &line) {
  const size_t first = line.find_first_not_of(" \t");
  return first == std::string::npos || line[first] == '#';
}

struct Fingerprints {
  SparseFingerprint daylight;
  SparseFingerprint inchified;
};

struct PerRadius {
  std::vector<SparseFingerprint> daylight;
  std::vector<SparseFingerprint> inchified;
};

PerRadius fingerprints_at(const std::string &smiles, const std::vector<int> &radii,
                          const PipelineOptions &options) {
  const MolGraph g = parse_smiles(smiles);
  const MolGraph raw = prepare_raw(g);
  const InvariantSet inv = inchify(g, options).invariants;
  PerRadius out;
  for (int r: radii) {
    out.daylight.push_back(morgan_fingerprint(raw, r, InvariantMode::kDaylight));
    out.inchified.push_back(morgan_fingerprint(inv, r));
  }
  return out;
}

}  // namespace

CorpusFormat parse_corpus_format(const std::string &name) {
  if (name == "tsv") {
    return CorpusFormat::kTsv;
  }
  if (name == "smi") {
    return CorpusFormat::kSmi;
  }
  throw std::invalid_argument("unknown corpus format '" + name + "'");
}

CorpusFormat guess_corpus_format(const std::string &path) {
  const bool tsv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0;
  return tsv ? CorpusFormat::kTsv : CorpusFormat::kSmi;
}

CorpusReader::CorpusReader(const std::string &path, CorpusFormat format,
                           const LoadOptions &options)
    : in_(path), format_(format), options_(options) {
  if (!in_) {
    throw CorpusError("cannot open corpus file '" + path + "'");
  }
  if (format_ != CorpusFormat::kTsv) {
    return;
  }
  std::string header;
  while (std::getline(in_, header)) {
    ++line_;
    strip_cr(header);
    if (!ignorable(header)) {
      break;
    }
    header.clear();
  }
  const std::vector<std::string> cols = split_tabs(header);
  const bool ok = (cols.size() == 2 || cols.size() == 3) && cols[0] == "smiles"
                  && cols[1] == "identityKey"
                  && (cols.size() == 2 || cols[2] == "label");
  if (!ok) {
    throw CorpusError("malformed header in '" + path
                      + "': expected smiles<TAB>identityKey[<TAB>label]");
  }
  has_label_ = cols.size() == 3;
}

std::optional<CorpusRecord> CorpusReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    strip_cr(line);
    if (ignorable(line)) {
      continue;
    }
    CorpusRecord rec;
    rec.line = line_;
    if (format_ == CorpusFormat::kTsv) {
      const std::vector<std::string> cols = split_tabs(line);
      const size_t want = has_label_ ? 3 : 2;
      if (cols.size() < 2 || cols.size() > want) {
        skipped_.push_back({ line_, "expected " + std::to_string(want) + " columns" });
        continue;
      }
      rec.smiles = cols[0];
      rec.identity_key = cols[1];
      if (rec.identity_key.empty()) {
        skipped_.push_back({ line_, "empty identity key" });
        continue;
      }
      if (cols.size() == 3 && !cols[2].empty()) {
        try {
          size_t used = 0;
          rec.label = std::stod(cols[2], &used);
          if (used != cols[2].size()) {
            throw std::invalid_argument(cols[2]);
          }
        } catch (const std::exception &) {
          skipped_.push_back({ line_, "bad label '" + cols[2] + "'" });
          continue;
        }
      }
    } else {
      std::istringstream fields(line);
      fields >> rec.smiles;
      if (!(fields >> rec.identity_key)) {
        rec.identity_key = std::to_string(line_);
      }
    }
    try {
      const MolGraph g = parse_smiles(rec.smiles);
      if (options_.filter_large && heavy_atom_count(g) > options_.max_heavy_atoms) {
        skipped_.push_back({ line_, "more than "
                                        + std::to_string(options_.max_heavy_atoms)
                                        + " heavy atoms" });
        continue;
      }
    } catch (const std::exception &e) {
      skipped_.push_back({ line_, e.what() });
      continue;
    }
    return rec;
  }
  return std::nullopt;
}

Corpus load_corpus(const std::string &path, CorpusFormat format,
                   const LoadOptions &options) {
  CorpusReader reader(path, format, options);
  Corpus corpus;
  while (auto rec = reader.next()) {
    corpus.records.push_back(std::move(*rec));
  }
  corpus.skipped = reader.skipped();
  return corpus;
}

int heavy_atom_count(const MolGraph &g) {
  int n = 0;
  for (const Atom &a: g.atoms()) {
    n += a.z != 1 ? 1 : 0;
  }
  return n;
}

ConfusionMatrix &ConfusionMatrix::operator+=(const ConfusionMatrix &other) {
  samekey_samefp += other.samekey_samefp;
  samekey_difffp += other.samekey_difffp;
  diffkey_samefp += other.diffkey_samefp;
  diffkey_difffp += other.diffkey_difffp;
  return *this;
}

PairComparison compare_pairs(const std::vector<CorpusRecord> &records,
                             const CompareOptions &options) {
  if (options.window < 1) {
    throw std::invalid_argument("window must be >= 1");
  }
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].identity_key < records[i - 1].identity_key) {
      throw CorpusError("corpus is not sorted by identity key at line "
                        + std::to_string(records[i].line));
    }
  }
  std::vector<std::optional<Fingerprints>> fps(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), options.threads, [&](size_t i) {
    try {
      const std::vector<int> radii = { options.radius };
      PerRadius p = fingerprints_at(records[i].smiles, radii, options.pipeline);
      fps[i] = Fingerprints{ std::move(p.daylight[0]), std::move(p.inchified[0]) };
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  PairComparison out;
  std::vector<size_t> ok;
  for (size_t i = 0; i < records.size(); ++i) {
    if (fps[i]) {
      ok.push_back(i);
    } else {
      out.failures.push_back({ records[i].line, errors[i] });
    }
  }
  const int workers = std::max(1, options.threads);
  std::vector<PairComparison> partial(static_cast<size_t>(workers));
  const size_t window = static_cast<size_t>(options.window);
  // One matrix per worker chunk; addition commutes, so the merge order does
  // not matter.
  const size_t chunk = (ok.size() + static_cast<size_t>(workers) - 1)
                       / static_cast<size_t>(workers);
  parallel_for(static_cast<size_t>(workers), workers, [&](size_t w) {
    const size_t lo = w * chunk;
    const size_t hi = std::min(ok.size(), lo + chunk);
    for (size_t a = lo; a < hi; ++a) {
      const CorpusRecord &ra = records[ok[a]];
      const Fingerprints &fa = *fps[ok[a]];
      for (size_t b = a + 1; b < ok.size() && b <= a + window; ++b) {
        const bool same_key = ra.identity_key == records[ok[b]].identity_key;
        const Fingerprints &fb = *fps[ok[b]];
        auto tally = [&](ConfusionMatrix &m, bool same_fp) {
          if (same_key) {
            ++(same_fp ? m.samekey_samefp : m.samekey_difffp);
          } else {
            ++(same_fp ? m.diffkey_samefp : m.diffkey_difffp);
          }
        };
        tally(partial[w].daylight, fa.daylight == fb.daylight);
        tally(partial[w].inchified, fa.inchified == fb.inchified);
      }
    }
  });
  for (const PairComparison &p: partial) {
    out.daylight += p.daylight;
    out.inchified += p.inchified;
  }
  return out;
}

std::vector<EquivalentPair> equivalent_pairs(
    const std::vector<CorpusRecord> &records, int window) {
  std::vector<EquivalentPair> out;
  for (size_t i = 0; i < records.size(); ++i) {
    for (size_t j = i + 1; j < records.size() && j <= i + static_cast<size_t>(window);
         ++j) {
      if (records[i].identity_key == records[j].identity_key) {
        out.push_back({ records[i].smiles, records[j].smiles });
      }
    }
  }
  return out;
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::invalid_argument("nearest_rank of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile level outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // The small epsilon keeps q * N exact for levels like 0.1 * 10.
  size_t rank = static_cast<size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<QuantileRow> tanimoto_quantiles(
    const std::vector<EquivalentPair> &pairs, const std::vector<int> &radii,
    const std::vector<double> &quantiles, int threads,
    const PipelineOptions &options) {
  if (pairs.empty()) {
    throw std::invalid_argument("tanimoto_quantiles needs at least one pair");
  }
  // sims[mode][radius index][pair]
  std::vector<std::vector<std::vector<double>>> sims(
      2, std::vector<std::vector<double>>(radii.size(),
                                          std::vector<double>(pairs.size())));
  parallel_for(pairs.size(), threads, [&](size_t p) {
    const PerRadius a = fingerprints_at(pairs[p].a, radii, options);
    const PerRadius b = fingerprints_at(pairs[p].b, radii, options);
    for (size_t r = 0; r < radii.size(); ++r) {
      sims[0][r][p] = tanimoto(a.daylight[r], b.daylight[r]);
      sims[1][r][p] = tanimoto(a.inchified[r], b.inchified[r]);
    }
  });
  std::vector<QuantileRow> rows;
  for (int m = 0; m < 2; ++m) {
    const InvariantMode mode = m == 0 ? InvariantMode::kDaylight
                                      : InvariantMode::kInchified;
    for (size_t r = 0; r < radii.size(); ++r) {
      for (double q: quantiles) {
        rows.push_back({ mode, radii[r], q,
                         nearest_rank(sims[static_cast<size_t>(m)][r], q) });
      }
    }
  }
  return rows;
}

int default_thread_count() {
  const char *env = std::getenv("CHEMID_THREADS");
  if (env == nullptr) {
    return 1;
  }
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception &) {
    return 1;
  }
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)> &body) {
  const size_t workers = std::min(n, static_cast<size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i) {
          body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) {
          first = std::current_exception();
        }
      }
    });
  }
  for (std::thread &t: pool) {
    t.join();
  }
  if (first) {
    std::rethrow_exception(first);
  }
}

}  // namespace chemid
