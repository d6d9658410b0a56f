//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemid/corpus.h"
#include "chemid/fingerprint.h"
#include "chemid/patterns.h"
#include "chemid/pipeline.h"
#include "chemid/smiles.h"

namespace {

using namespace chemid;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitAllFailed = 2;
constexpr int kExitUsage = 64;

std::string fixed(double v, int places) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(places) << v;
  return s.str();
}

// Output stream for --out, stdout when empty.
class Output {
public:
  explicit Output(const std::string &path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw CorpusError("cannot write '" + path + "'");
      }
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

struct Settings {
  int threads = 1;
  int max_n = 4;
};

// Per-record work with failures reported in input order.
template <typename Fn>
int for_each_record(const std::string &in, const Settings &s, std::ostream &out, Fn fn) {
  const Corpus corpus = load_corpus(in, guess_corpus_format(in));
  for (const SkippedLine &skip: corpus.skipped) {
    std::cerr << in << ":" << skip.line << ": " << skip.reason << "\n";
  }
  std::vector<std::optional<std::string>> lines(corpus.records.size());
  std::vector<std::string> errors(corpus.records.size());
  parallel_for(corpus.records.size(), s.threads, [&](size_t i) {
    try {
      lines[i] = fn(corpus.records[i]);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  int ok = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i]) {
      out << *lines[i] << "\n";
      ++ok;
    } else {
      std::cerr << in << ":" << corpus.records[i].line << ": " << errors[i] << "\n";
    }
  }
  return ok > 0 ? kExitOk : kExitAllFailed;
}

int cmd_featurize(const std::string &in, const std::string &out_path, bool trace,
                  const Settings &s) {
  Output out(out_path);
  PipelineOptions opts;
  opts.max_n = s.max_n;
  return for_each_record(in, s, out.stream(), [&](const CorpusRecord &rec) {
    const InchifyResult r = inchify(parse_smiles(rec.smiles), opts);
    std::string line = "{\"id\":" + nlohmann::json(rec.identity_key).dump()
                       + ",\"invariants\":" + to_json(r.invariants);
    if (trace) {
      line += ",\"traces\":[";
      for (size_t k = 0; k < r.traces.size(); ++k) {
        line += (k ? "," : "") + to_json(r.traces[k]);
      }
      line += "]";
    }
    return line + "}";
  });
}

int cmd_fingerprint(const std::string &in, const std::string &out_path, int radius,
                    InvariantMode mode, const Settings &s) {
  Output out(out_path);
  PipelineOptions opts;
  opts.max_n = s.max_n;
  return for_each_record(in, s, out.stream(), [&](const CorpusRecord &rec) {
    return rec.identity_key + "\t"
           + format_fingerprint(fingerprint_smiles(rec.smiles, radius, mode, opts));
  });
}

std::vector<std::string> split_commas(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(item);
  }
  return out;
}

void print_matrix(std::ostream &out, std::string_view name, const ConfusionMatrix &m) {
  out << name << "\n";
  out << "               samefp      difffp\n";
  out << "  samekey " << std::setw(11) << m.samekey_samefp << " " << std::setw(11)
      << m.samekey_difffp << "\n";
  out << "  diffkey " << std::setw(11) << m.diffkey_samefp << " " << std::setw(11)
      << m.diffkey_difffp << "\n";
}

nlohmann::ordered_json matrix_json(const ConfusionMatrix &m) {
  nlohmann::ordered_json j;
  j["samekey_samefp"] = m.samekey_samefp;
  j["samekey_difffp"] = m.samekey_difffp;
  j["diffkey_samefp"] = m.diffkey_samefp;
  j["diffkey_difffp"] = m.diffkey_difffp;
  return j;
}

int cmd_validate(const std::string &in, const std::string &out_path,
                 const std::string &json_path, int window, int radius,
                 const std::vector<int> &radii, const std::vector<double> &quantiles,
                 const Settings &s) {
  const Corpus corpus = load_corpus(in, CorpusFormat::kTsv);
  for (const SkippedLine &skip: corpus.skipped) {
    std::cerr << in << ":" << skip.line << ": " << skip.reason << "\n";
  }
  CompareOptions opts;
  opts.window = window;
  opts.radius = radius;
  opts.threads = s.threads;
  opts.pipeline.max_n = s.max_n;
  const PairComparison cmp = compare_pairs(corpus.records, opts);
  for (const FeaturizeFailure &f: cmp.failures) {
    std::cerr << in << ":" << f.line << ": " << f.message << "\n";
  }
  Output out(out_path);
  std::ostream &os = out.stream();
  os << "# records " << corpus.records.size() << ", skipped " << corpus.skipped.size()
     << ", failed " << cmp.failures.size() << ", window " << window << ", radius "
     << radius << "\n";
  print_matrix(os, "daylight", cmp.daylight);
  print_matrix(os, "inchified", cmp.inchified);
  const std::vector<EquivalentPair> pairs = equivalent_pairs(corpus.records, window);
  std::vector<QuantileRow> rows;
  if (!pairs.empty()) {
    rows = tanimoto_quantiles(pairs, radii, quantiles, s.threads, opts.pipeline);
    os << "mode\tradius\tquantile\tvalue\n";
    for (const QuantileRow &row: rows) {
      os << mode_name(row.mode) << "\t" << row.radius << "\t" << fixed(row.quantile, 2)
         << "\t" << fixed(row.value, 4) << "\n";
    }
  } else {
    os << "# no equivalent pairs within the window\n";
  }
  if (!json_path.empty()) {
    nlohmann::ordered_json j;
    j["records"] = corpus.records.size();
    j["window"] = window;
    j["radius"] = radius;
    j["daylight"] = matrix_json(cmp.daylight);
    j["inchified"] = matrix_json(cmp.inchified);
    auto q = nlohmann::ordered_json::array();
    for (const QuantileRow &row: rows) {
      q.push_back({ { "mode", mode_name(row.mode) },
                    { "radius", row.radius },
                    { "quantile", row.quantile },
                    { "value", row.value } });
    }
    j["quantiles"] = q;
    Output js(json_path);
    js.stream() << j.dump(2) << "\n";
  }
  return kExitOk;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const std::string &in, const std::string &out_path, int bins, int radius,
              int repeats, const Settings &s) {
  using Clock = std::chrono::steady_clock;
  const Corpus corpus = load_corpus(in, guess_corpus_format(in));
  PipelineOptions opts;
  opts.max_n = s.max_n;
  const size_t nb = static_cast<size_t>(bins);
  // Keeps the timed results observable.
  volatile size_t sink = 0;
  std::vector<std::vector<double>> parse_ms(nb), ecfp_ms(nb), iecfp_ms(nb);
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  for (const CorpusRecord &rec: corpus.records) {
    try {
      double tp = 1e300;
      double te = 1e300;
      double ti = 1e300;
      MolGraph g;
      // Best of `repeats` per stage to damp scheduler noise.
      for (int k = 0; k < repeats; ++k) {
        auto t0 = Clock::now();
        g = parse_smiles(rec.smiles);
        tp = std::min(tp, ms_since(t0));
        t0 = Clock::now();
        const SparseFingerprint d =
            morgan_fingerprint(prepare_raw(g), radius, InvariantMode::kDaylight);
        te = std::min(te, ms_since(t0));
        t0 = Clock::now();
        const SparseFingerprint f = morgan_fingerprint(inchify(g, opts).invariants, radius);
        ti = std::min(ti, ms_since(t0));
        sink = sink + d.size() + f.size();
      }
      const int atoms = heavy_atom_count(g);
      if (atoms < 1) {
        continue;
      }
      const size_t bin = static_cast<size_t>((atoms - 1) / 10);
      if (bin >= nb) {
        continue;
      }
      parse_ms[bin].push_back(tp);
      ecfp_ms[bin].push_back(te);
      iecfp_ms[bin].push_back(ti);
    } catch (const std::exception &e) {
      std::cerr << in << ":" << rec.line << ": " << e.what() << "\n";
    }
  }
  Output out(out_path);
  std::ostream &os = out.stream();
  const int w = 9;
  os << std::left << std::setw(14) << "atoms" << std::right;
  for (size_t b = 0; b < nb; ++b) {
    os << std::setw(w) << (std::to_string(10 * b + 1) + "-" + std::to_string(10 * b + 10));
  }
  os << "\n" << std::left << std::setw(14) << "count" << std::right;
  for (size_t b = 0; b < nb; ++b) {
    os << std::setw(w) << parse_ms[b].size();
  }
  os << "\n";
  struct Row {
    const char *name;
    int kind;
  };
  const Row rows[] = { { "MolFromSmiles", 0 }, { "ECFP", 1 }, { "IECFP", 2 },
                       { "Abs. Overhead", 3 }, { "Rel. Overhead", 4 } };
  for (const Row &row: rows) {
    os << std::left << std::setw(14) << row.name << std::right;
    for (size_t b = 0; b < nb; ++b) {
      if (parse_ms[b].empty()) {
        os << std::setw(w) << "-";
        continue;
      }
      const double p = median(parse_ms[b]);
      const double e = median(ecfp_ms[b]);
      const double i = median(iecfp_ms[b]);
      double v = 0;
      switch (row.kind) {
        case 0: v = p; break;
        case 1: v = e; break;
        case 2: v = i; break;
        case 3: v = i - e; break;
        default: v = (p + i) / (p + e); break;
      }
      os << std::setw(w) << fixed(v, 2);
    }
    os << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{ "chemid: identity-invariant molecular graphs and fingerprints" };
  app.require_subcommand(1);
  Settings settings;
  settings.threads = default_thread_count();
  app.add_option("--threads", settings.threads,
                 "Worker threads (default: CHEMID_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-n", settings.max_n, "Largest chain repeat count")
      ->check(CLI::NonNegativeNumber);

  std::string in;
  std::string out;
  bool trace = false;
  auto *featurize = app.add_subcommand("featurize", "Write invariant sets as JSON lines");
  featurize->add_option("--in", in, "Input .smi or .tsv")->required();
  featurize->add_option("--out", out, "Output file (default stdout)");
  featurize->add_flag("--trace", trace, "Include per-step traces");

  int radius = 2;
  std::string mode = "inchified";
  auto *fingerprint = app.add_subcommand("fingerprint", "Write sparse count fingerprints");
  fingerprint->add_option("--in", in, "Input .smi or .tsv")->required();
  fingerprint->add_option("--out", out, "Output file (default stdout)");
  fingerprint->add_option("--radius", radius, "Morgan radius")
      ->check(CLI::NonNegativeNumber);
  fingerprint->add_option("--mode", mode, "daylight or inchified")
      ->check(CLI::IsMember({ "daylight", "inchified" }));

  int window = 100;
  std::string radii_text = "2,4,6";
  std::string quantiles_text = "0.1,0.25,0.5,0.75,0.9";
  std::string json_path;
  auto *validate = app.add_subcommand("validate", "Confusion matrices and quantiles");
  validate->add_option("--in", in, "Keyed TSV sorted by identityKey")->required();
  validate->add_option("--out", out, "Output file (default stdout)");
  validate->add_option("--json", json_path, "Also write the results as JSON");
  validate->add_option("--window", window, "Records compared after each record")
      ->check(CLI::PositiveNumber);
  validate->add_option("--radius", radius, "Radius used for the matrices")
      ->check(CLI::NonNegativeNumber);
  validate->add_option("--radii", radii_text, "Comma-separated quantile radii");
  validate->add_option("--quantiles", quantiles_text, "Comma-separated quantile levels");

  int bins = 10;
  int repeats = 3;
  auto *bench = app.add_subcommand("bench", "Median timings per atom-count bin");
  bench->add_option("--in", in, "Input .smi or .tsv")->required();
  bench->add_option("--out", out, "Output file (default stdout)");
  bench->add_option("--bins", bins, "Number of 10-atom bins")->check(CLI::PositiveNumber);
  bench->add_option("--radius", radius, "Morgan radius")->check(CLI::NonNegativeNumber);
  bench->add_option("--repeats", repeats, "Timing repeats per molecule")
      ->check(CLI::PositiveNumber);

  auto *patterns = app.add_subcommand("patterns", "Print the rule table as JSON");
  patterns->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  std::vector<int> radii;
  std::vector<double> quantiles;
  try {
    for (const std::string &r: split_commas(radii_text)) {
      radii.push_back(std::stoi(r));
      if (radii.back() < 0) {
        throw std::invalid_argument(r);
      }
    }
    for (const std::string &q: split_commas(quantiles_text)) {
      quantiles.push_back(std::stod(q));
      if (quantiles.back() < 0 || quantiles.back() > 1) {
        throw std::invalid_argument(q);
      }
    }
  } catch (const std::exception &) {
    std::cerr << "invalid --radii or --quantiles list\n";
    return kExitUsage;
  }

  try {
    if (*featurize) {
      return cmd_featurize(in, out, trace, settings);
    }
    if (*fingerprint) {
      return cmd_fingerprint(in, out, radius, parse_invariant_mode(mode), settings);
    }
    if (*validate) {
      return cmd_validate(in, out, json_path, window, radius, radii, quantiles, settings);
    }
    if (*bench) {
      return cmd_bench(in, out, bins, radius, repeats, settings);
    }
    if (*patterns) {
      Output o(out);
      o.stream() << rule_table_json(settings.max_n) << "\n";
      return kExitOk;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}
