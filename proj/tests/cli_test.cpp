//
// Project chemid - Copyright 2026 chemid authors.
// SPDX-License-Identifier: Apache-2.0
//
// Runs the chemid executable end to end.
//

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class CliTest: public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("chemid_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string &name, const std::string &content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  // Exit status of `chemid <args>`; stdout and stderr land in out_ / err_.
  int run(const std::string &args) {
    const fs::path out = dir_ / "stdout";
    const fs::path err = dir_ / "stderr";
    const std::string cmd = std::string(CHEMID_CLI) + " " + args + " >" + out.string()
                            + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    out_ = slurp(out);
    err_ = slurp(err);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::string out_;
  std::string err_;
};

TEST_F(CliTest, UsageErrorsExit64) {
  EXPECT_EQ(run(""), 64);
  EXPECT_EQ(run("fingerprint"), 64);
  EXPECT_EQ(run("fingerprint --in x.smi --radius -1"), 64);
  EXPECT_EQ(run("fingerprint --in x.smi --mode ecfp"), 64);
  EXPECT_EQ(run("featurize --no-such-flag"), 64);
}

TEST_F(CliTest, MissingInputExits1) {
  EXPECT_EQ(run("fingerprint --in " + (dir_ / "absent.smi").string()), 1);
  EXPECT_NE(err_.find("absent.smi"), std::string::npos);
}

TEST_F(CliTest, AllLinesUnparsableExits2) {
  const std::string in = write("bad.smi", "xx(( a\n)) b\n");
  EXPECT_EQ(run("fingerprint --in " + in), 2);
  EXPECT_NE(err_.find(":1:"), std::string::npos);
  EXPECT_NE(err_.find(":2:"), std::string::npos);
}

TEST_F(CliTest, PartialFailureStillSucceeds) {
  const std::string in = write("mixed.smi", "CCO good\nxx(( bad\n");
  EXPECT_EQ(run("fingerprint --in " + in), 0);
  EXPECT_EQ(out_.rfind("good\t", 0), 0U);
  EXPECT_NE(err_.find(":2:"), std::string::npos);
}

TEST_F(CliTest, FeaturizeBenzene) {
  const std::string in = write("benzene.smi", "c1ccccc1 benz\n");
  ASSERT_EQ(run("featurize --in " + in), 0);
  const auto j = nlohmann::json::parse(out_);
  EXPECT_EQ(j["id"], "benz");
  EXPECT_EQ(j["invariants"]["charge"], 0);
  ASSERT_EQ(j["invariants"]["atoms"].size(), 6U);
  for (const auto &a: j["invariants"]["atoms"]) {
    EXPECT_EQ(a, nlohmann::json({ 6, 0, 2, 1, 1, 0, 0, 0, 0 }));
  }
  EXPECT_EQ(j["invariants"]["bonds"].size(), 6U);
  EXPECT_FALSE(j.contains("traces"));
}

TEST_F(CliTest, FeaturizeTraceListsTenSteps) {
  const std::string in = write("acetate.smi", "CC(=O)[O-].[Na+] ac\n");
  ASSERT_EQ(run("featurize --trace --in " + in), 0);
  const auto j = nlohmann::json::parse(out_);
  ASSERT_EQ(j["traces"].size(), 10U);
  EXPECT_EQ(j["traces"][4]["step"], 5);
  EXPECT_EQ(j["traces"][4]["applications"], 1);
}

TEST_F(CliTest, ChargedMoleculeGetsReservedKey) {
  const std::string in = write("ammonium.smi", "[NH4+] am\n");
  ASSERT_EQ(run("fingerprint --radius 0 --in " + in), 0);
  EXPECT_EQ(out_.rfind("am\t1:1 ", 0), 0U) << out_;
  ASSERT_EQ(run("fingerprint --radius 0 --mode daylight --in " + in), 0);
  EXPECT_EQ(out_.find("\t1:1"), std::string::npos) << out_;
}

TEST_F(CliTest, ValidateWindowOneComparesOnePair) {
  const std::string in = write("pair.tsv", "smiles\tidentityKey\nCCO\tK1\nOCC\tK1\n");
  const std::string json = (dir_ / "report.json").string();
  ASSERT_EQ(run("validate --window 1 --quantiles 0.5 --radii 2 --in " + in + " --json "
                + json),
            0);
  const auto j = nlohmann::json::parse(slurp(json));
  for (const char *mode: { "daylight", "inchified" }) {
    int total = 0;
    for (const auto &[cell, count]: j[mode].items()) {
      total += count.get<int>();
    }
    EXPECT_EQ(total, 1) << mode;
    EXPECT_EQ(j[mode]["samekey_samefp"], 1) << mode;
  }
  EXPECT_NE(out_.find("inchified\t2\t0.50\t1.0000"), std::string::npos) << out_;
}

TEST_F(CliTest, ValidateRejectsUnsortedCorpus) {
  const std::string in =
      write("unsorted.tsv", "smiles\tidentityKey\nCCO\tK2\nC\tK1\n");
  EXPECT_EQ(run("validate --in " + in), 1);
}

TEST_F(CliTest, PatternsMatchesCheckedInRules) {
  ASSERT_EQ(run("patterns"), 0);
  EXPECT_EQ(out_, slurp(CHEMID_DOCS_DIR "/rules.json"));
}

TEST_F(CliTest, FingerprintGoldenCorpus) {
  const std::string out = (dir_ / "golden.txt").string();
  ASSERT_EQ(run("fingerprint --radius 2 --mode inchified --in " CHEMID_TEST_DATA
                "/golden_keyed.tsv --out "
                + out),
            0);
  EXPECT_EQ(slurp(out), slurp(CHEMID_TEST_DATA "/golden_fp_r2_inchified.txt"));
}

TEST_F(CliTest, ThreadCountDoesNotChangeValidate) {
  ASSERT_EQ(run("--threads 1 validate --in " CHEMID_TEST_DATA "/golden_keyed.tsv"), 0);
  const std::string one = out_;
  ASSERT_EQ(run("--threads 3 validate --in " CHEMID_TEST_DATA "/golden_keyed.tsv"), 0);
  EXPECT_EQ(out_, one);
}

TEST_F(CliTest, BenchReportsAllRows) {
  const std::string in = write("bench.smi", "CCO a\nc1ccccc1CCCCCCCCCCN b\n");
  ASSERT_EQ(run("bench --bins 2 --repeats 1 --in " + in), 0);
  for (const char *row: { "MolFromSmiles", "ECFP", "IECFP", "Abs. Overhead",
                          "Rel. Overhead" }) {
    EXPECT_NE(out_.find(row), std::string::npos) << row;
  }
}

}  // namespace
