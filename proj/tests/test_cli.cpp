// SPDX-License-Identifier: Apache-2.0
//
// End-to-end command-line checks: output formats, data-format equivalence,
// byte-identical reruns across seeds and thread counts, and exit codes for
// user errors.

#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "support/run_cli.hpp"

namespace {

using testsupport::CliResult;
using testsupport::run_cli;
using testsupport::unique_tmp_name;
using testsupport::write_file;

// 60 fixed counts, mean 2.5, variance about 4.42: a comfortably
// overdispersed target for the katz fit.
const char* kRawData =
    "2 0 1 4 3 0 1 2 5 1\n"
    "0 2 3 1 7 2 4 0 1 3\n"
    "2 6 1 0 2 4 3 1 5 2\n"
    "0 1 3 2 8 1 2 4 0 3\n"
    "2 1 6 3 1 2 5 0 4 2\n"
    "3 1 2 7 0 3 2 1 4 9\n";

// The same multiset as value/count pairs.
const char* kFreqData =
    "0 9\n1 13\n2 14\n3 9\n4 6\n5 3\n6 2\n7 2\n8 1\n9 1\n";

std::string raw_data_path() {
  static const std::string path = [] {
    const std::string p = unique_tmp_name("raw.txt");
    write_file(p, kRawData);
    return p;
  }();
  return path;
}

std::string freq_data_path() {
  static const std::string path = [] {
    const std::string p = unique_tmp_name("freq.txt");
    write_file(p, kFreqData);
    return p;
  }();
  return path;
}

}  // namespace

TEST(CliTest, TextReportAndRerunBytes) {
  const std::string cmd = "test --family katz --data " + raw_data_path() +
                          " --bootstrap 199 --seed 7";
  const CliResult a = run_cli(cmd);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("family: katz"), std::string::npos);
  EXPECT_NE(a.out.find("n: 60"), std::string::npos);
  EXPECT_NE(a.out.find("S1"), std::string::npos);
  EXPECT_NE(a.out.find("CVM"), std::string::npos);
  const CliResult b = run_cli(cmd);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.code, 0);
}

TEST(CliTest, FreqAndRawLayoutsAgreeByteForByte) {
  const CliResult raw = run_cli("test --family katz --data " +
                                raw_data_path() + " --bootstrap 99 --seed 3");
  const CliResult freq =
      run_cli("test --family katz --data " + freq_data_path() +
              " --format freq --bootstrap 99 --seed 3");
  ASSERT_EQ(raw.code, 0) << raw.err;
  ASSERT_EQ(freq.code, 0) << freq.err;
  EXPECT_EQ(raw.out, freq.out);
}

TEST(CliTest, ThreadCountDoesNotChangeOutput) {
  const std::string base = "test --family katz --data " + raw_data_path() +
                           " --bootstrap 199 --seed 11 --out json";
  const CliResult serial = run_cli(base + " --threads 1");
  const CliResult threaded = run_cli(base + " --threads 3");
  ASSERT_EQ(serial.code, 0) << serial.err;
  ASSERT_EQ(threaded.code, 0) << threaded.err;
  EXPECT_EQ(serial.out, threaded.out);
}

TEST(CliTest, ThreadsEnvironmentVariableIsHonored) {
  const std::string base = "test --family katz --data " + raw_data_path() +
                           " --bootstrap 99 --seed 13";
  const CliResult flag = run_cli(base + " --threads 2");
  ASSERT_EQ(setenv("GPGOF_THREADS", "2", 1), 0);
  const CliResult env = run_cli(base);
  unsetenv("GPGOF_THREADS");
  ASSERT_EQ(flag.code, 0) << flag.err;
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(flag.out, env.out);

  ASSERT_EQ(setenv("GPGOF_THREADS", "banana", 1), 0);
  const CliResult bad = run_cli(base);
  unsetenv("GPGOF_THREADS");
  EXPECT_EQ(bad.code, 2);
}

TEST(CliTest, SeedChangesCalibration) {
  const std::string base = "test --family katz --data " + raw_data_path() +
                           " --bootstrap 199 --out json";
  const CliResult a = run_cli(base + " --seed 1");
  const CliResult b = run_cli(base + " --seed 2");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.out, b.out);
}

TEST(CliTest, JsonReportParsesWithConsistentFields) {
  const CliResult r = run_cli("test --family katz --data " + raw_data_path() +
                              " --bootstrap 199 --seed 5 --out json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("family"), "katz");
  EXPECT_EQ(j.at("n"), 60);
  EXPECT_EQ(j.at("b"), 199);
  const auto& results = j.at("results");
  ASSERT_EQ(results.size(), 9u);
  for (const auto& row : results) {
    const double p = row.at("p_value").get<double>();
    EXPECT_GE(p, 1.0 / 200.0);
    EXPECT_LE(p, 1.0);
    EXPECT_EQ(row.at("reject").get<bool>(), p <= 0.05);
    EXPECT_GE(row.at("value").get<double>(), 0.0);
  }
  EXPECT_EQ(results[0].at("statistic"), "S1");
  EXPECT_EQ(results[8].at("statistic"), "CVM");
}

TEST(CliTest, CsvReportHasHeaderAndNineRows) {
  const CliResult r = run_cli("test --family katz --data " + raw_data_path() +
                              " --bootstrap 99 --seed 5 --out csv");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("statistic,value,p_value,critical_value,reject\n", 0),
            0u);
  std::size_t rows = 0, pos = 0;
  while ((pos = r.out.find('\n', pos)) != std::string::npos) {
    ++rows;
    ++pos;
  }
  EXPECT_EQ(rows, 10u);
}

TEST(CliTest, SingleStatRequestOnly) {
  const CliResult r = run_cli("test --family katz --data " + raw_data_path() +
                              " --stat S4 --bootstrap 99 --seed 5 --out csv");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\nS4,"), std::string::npos);
  EXPECT_EQ(r.out.find("S1,"), std::string::npos);
}

TEST(CliTest, UserErrorsExitTwo) {
  const std::string empty = unique_tmp_name("empty.txt");
  write_file(empty, "");
  const CliResult no_data =
      run_cli("test --family katz --data " + empty + " --bootstrap 99");
  EXPECT_EQ(no_data.code, 2);
  EXPECT_NE(no_data.err.find("empty sample"), std::string::npos);

  const std::string junk = unique_tmp_name("junk.txt");
  write_file(junk, "1 2 x 3\n");
  EXPECT_EQ(run_cli("test --family katz --data " + junk + " --bootstrap 99")
                .code,
            2);

  const std::string negative = unique_tmp_name("neg.txt");
  write_file(negative, "1 2 -3\n");
  EXPECT_EQ(
      run_cli("test --family katz --data " + negative + " --bootstrap 99")
          .code,
      2);

  const std::string odd = unique_tmp_name("odd.txt");
  write_file(odd, "0 3 1\n");
  const CliResult odd_freq = run_cli("test --family katz --data " + odd +
                                     " --format freq --bootstrap 99");
  EXPECT_EQ(odd_freq.code, 2);
  EXPECT_NE(odd_freq.err.find("pairs"), std::string::npos);

  EXPECT_EQ(run_cli("test --family nb --data " + raw_data_path()).code, 2);
  EXPECT_EQ(run_cli("test --family pb:1 --data " + raw_data_path()).code, 2);
  EXPECT_EQ(run_cli("test --family katz --data /no/such/file").code, 2);
  EXPECT_EQ(run_cli("test --family katz --data " + raw_data_path() +
                    " --stat S9")
                .code,
            2);
  EXPECT_EQ(run_cli("test --family katz --data " + raw_data_path() +
                    " --out bogus")
                .code,
            2);
  EXPECT_EQ(run_cli("test --family katz --data " + raw_data_path() +
                    " --bootstrap 0")
                .code,
            2);
  EXPECT_EQ(run_cli("test --data " + raw_data_path()).code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
}

TEST(CliTest, HelpExitsZero) {
  EXPECT_EQ(run_cli("--help").code, 0);
  EXPECT_EQ(run_cli("test --help").code, 0);
  EXPECT_EQ(run_cli("simulate --help").code, 0);
  EXPECT_EQ(run_cli("diagnose --help").code, 0);
}

TEST(CliSimulate, EndToEndWithIdenticalRerunBytes) {
  const std::string cfg = unique_tmp_name("sim.cfg");
  write_file(cfg,
             "null_family = katz\n"
             "alternatives = du:2 mkdu:8,0.5,2,0.5\n"
             "n_values = 20\n"
             "statistics = S4 AD\n"
             "mc_replicates = 6\n"
             "bootstrap_cycles = 29\n"
             "seed = 12\n");
  const std::string dir_a = unique_tmp_name("sim_a");
  const std::string dir_b = unique_tmp_name("sim_b");
  const CliResult a = run_cli("simulate --config " + cfg + " --out-dir " + dir_a);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("results.csv"), std::string::npos);
  EXPECT_NE(a.err.find("du:2"), std::string::npos);
  const CliResult b = run_cli("simulate --config " + cfg + " --out-dir " + dir_b);
  ASSERT_EQ(b.code, 0) << b.err;

  const std::string csv_a = testsupport::read_file(dir_a + "/results.csv");
  const std::string csv_b = testsupport::read_file(dir_b + "/results.csv");
  EXPECT_EQ(csv_a, csv_b);
  EXPECT_EQ(csv_a.rfind("alternative,n,statistic,rejection_pct,failures\n", 0),
            0u);
  // Comma-bearing labels are quoted.
  EXPECT_NE(csv_a.find("\"mkdu:8,0.5,2,0.5\""), std::string::npos);

  // JSON carries the same cells; wall-clock time may differ between runs.
  const auto ja = nlohmann::json::parse(testsupport::read_file(dir_a + "/results.json"));
  const auto jb = nlohmann::json::parse(testsupport::read_file(dir_b + "/results.json"));
  EXPECT_EQ(ja.at("cells"), jb.at("cells"));
  EXPECT_EQ(ja.at("seed"), jb.at("seed"));
  ASSERT_EQ(ja.at("cells").size(), 4u);
}

TEST(CliSimulate, SeedOverrideChangesResults) {
  const std::string cfg = unique_tmp_name("sim2.cfg");
  write_file(cfg,
             "null_family = katz\n"
             "alternatives = du:2\n"
             "n_values = 20\n"
             "statistics = S4\n"
             "mc_replicates = 12\n"
             "bootstrap_cycles = 29\n"
             "seed = 12\n");
  const std::string dir_a = unique_tmp_name("sim_s1");
  const std::string dir_b = unique_tmp_name("sim_s2");
  const CliResult a = run_cli("simulate --config " + cfg + " --out-dir " + dir_a);
  const CliResult b = run_cli("simulate --config " + cfg + " --seed 99 --out-dir " + dir_b);
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const auto ja = nlohmann::json::parse(testsupport::read_file(dir_a + "/results.json"));
  const auto jb = nlohmann::json::parse(testsupport::read_file(dir_b + "/results.json"));
  EXPECT_EQ(jb.at("seed").get<std::uint64_t>(), 99u);
  EXPECT_NE(ja.at("seed"), jb.at("seed"));
}

TEST(CliSimulate, BadConfigExitsTwoNamingTheKey) {
  const std::string cfg = unique_tmp_name("bad.cfg");
  write_file(cfg,
             "null_family = katz\nalternatives = du:2\nn_values = 20\n"
             "mc_replicates = 0\n");
  const CliResult r = run_cli("simulate --config " + cfg);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mc_replicates"), std::string::npos);
  EXPECT_EQ(run_cli("simulate --config /no/such/config.cfg").code, 2);
}

TEST(CliDiagnose, TextAndJsonReports) {
  const CliResult text = run_cli(
      "diagnose --family katz --alt pp:1,2 --n 1000 --reps 200 --seed 3");
  ASSERT_EQ(text.code, 0) << text.err;
  EXPECT_NE(text.out.find("recommended weights: S4"), std::string::npos);
  EXPECT_NE(text.out.find("alternative: pp:1,2"), std::string::npos);

  const CliResult json = run_cli(
      "diagnose --family katz --alt bb:6,2 --n 500 --reps 200 --seed 3 "
      "--out json");
  ASSERT_EQ(json.code, 0) << json.err;
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j.at("alternative"), "bb:6,2");
  ASSERT_EQ(j.at("avg_abs_d").size(), 9u);
  const std::string rec = j.at("recommendation").get<std::string>();
  EXPECT_TRUE(rec == "S4" || rec == "S5") << rec;

  EXPECT_EQ(
      run_cli("diagnose --family katz --alt zz:1 --n 100 --reps 10").code, 2);
  EXPECT_EQ(
      run_cli("diagnose --family pb:1 --alt du:2 --n 100 --reps 10").code, 2);
}
