// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: fit-and-test a data file, run a Monte Carlo
// rejection study from a config file, or profile an alternative's
// residuals to pick a weight scheme.
//
// Exit codes: 0 success, 2 user/data error (bad flags, unreadable or
// malformed input, domain violations), 1 internal numeric failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpgof/gpgof.hpp"

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("GPGOF_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
      throw std::domain_error("GPGOF_THREADS is not a positive integer");
    }
    throw std::domain_error("GPGOF_THREADS is not a positive integer");
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::domain_error("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

gpgof::CountSample load_sample(const std::string& path,
                               const std::string& format) {
  std::istringstream in(read_file(path));
  if (format == "raw") {
    std::vector<int> values;
    long long v = 0;
    while (in >> v) {
      if (v < 0) throw std::domain_error("negative value in data file");
      if (v > 100000000) throw std::domain_error("value too large");
      values.push_back(static_cast<int>(v));
    }
    if (!in.eof()) throw std::domain_error("non-integer token in data file");
    if (values.empty()) throw std::domain_error("empty sample");
    return gpgof::CountSample::from_values(values);
  }
  if (format == "freq") {
    std::vector<std::pair<int, std::int64_t>> pairs;
    long long value = 0, count = 0;
    while (in >> value) {
      if (!(in >> count))
        throw std::domain_error("freq file needs value/count pairs");
      if (value < 0) throw std::domain_error("negative value in data file");
      if (value > 100000000) throw std::domain_error("value too large");
      pairs.emplace_back(static_cast<int>(value), count);
    }
    if (!in.eof()) throw std::domain_error("non-integer token in data file");
    if (pairs.empty()) throw std::domain_error("empty sample");
    return gpgof::CountSample::from_pairs(pairs);
  }
  throw std::domain_error("format must be raw or freq");
}

std::vector<gpgof::StatDescriptor> resolve_stats(const std::string& name) {
  std::string lower = name;
  for (auto& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "all") return gpgof::all_statistics();
  return {gpgof::stat_from_name(name)};
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_test(const std::string& family, const std::string& data_path,
             const std::string& format, const std::string& stat_name,
             long long bootstrap, double alpha, unsigned long long seed,
             int threads_flag, const std::string& out) {
  const gpgof::FamilySpec spec = gpgof::parse_family(family);
  if (spec.id == gpgof::family_id::pb && spec.nu < 2)
    throw std::domain_error("pb testing needs nu >= 2");
  const gpgof::CountSample sample = load_sample(data_path, format);
  const auto stats = resolve_stats(stat_name);
  const int threads = resolve_threads(threads_flag);

  const gpgof::FittedParams fit = gpgof::estimate_moments(spec, sample);
  const auto results = gpgof::bootstrap_run(sample, spec, stats, bootstrap,
                                            alpha, seed, threads);

  if (out == "json") {
    nlohmann::json j;
    j["family"] = gpgof::family_label(spec);
    j["n"] = sample.n;
    j["max_value"] = sample.max_value();
    j["fitted"] = {{"lambda", fit.lambda},
                   {"theta", fit.theta},
                   {"clamped", fit.clamped}};
    j["alpha"] = alpha;
    j["b"] = bootstrap;
    j["seed"] = seed;
    j["degenerate_replicates"] = results[0].degenerate_replicates;
    j["results"] = nlohmann::json::array();
    for (const auto& r : results) {
      j["results"].push_back({{"statistic", r.statistic},
                              {"value", r.observed},
                              {"p_value", r.p_value},
                              {"critical_value", r.critical_value},
                              {"reject", gpgof::reject(r, alpha)}});
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (out == "csv") {
    std::cout << "statistic,value,p_value,critical_value,reject\n";
    for (const auto& r : results) {
      std::printf("%s,%.17g,%.17g,%.17g,%d\n", r.statistic.c_str(),
                  r.observed, r.p_value, r.critical_value,
                  gpgof::reject(r, alpha) ? 1 : 0);
    }
    return 0;
  }
  if (out != "text") throw std::domain_error("out must be text, json, or csv");

  std::cout << "family: " << gpgof::family_label(spec) << "\n";
  std::cout << "n: " << sample.n << "  max value: " << sample.max_value()
            << "\n";
  std::cout << "fitted: lambda = " << fmt(fit.lambda)
            << "  theta = " << fmt(fit.theta)
            << (fit.clamped ? "  (clamped)" : "") << "\n";
  std::cout << "bootstrap: b = " << bootstrap << "  alpha = " << fmt(alpha)
            << "  seed = " << seed << "\n";
  std::cout << "degenerate replicates: " << results[0].degenerate_replicates
            << "\n\n";
  std::printf("%-10s %12s %10s  %s\n", "statistic", "value", "p-value",
              "reject");
  bool s4 = false, s5 = false, have4 = false, have5 = false;
  for (const auto& r : results) {
    const bool rej = gpgof::reject(r, alpha);
    std::printf("%-10s %12s %10s  %s\n", r.statistic.c_str(),
                fmt(r.observed).c_str(), fmt(r.p_value).c_str(),
                rej ? "yes" : "no");
    if (r.statistic == "S4") have4 = true, s4 = rej;
    if (r.statistic == "S5") have5 = true, s5 = rej;
  }
  if (have4 && have5 && s4 != s5) {
    std::cout << "\nhint: S4 and S5 disagree on rejection; run "
                 "'gpgof diagnose' against a candidate alternative to pick "
                 "a weight scheme for this data shape.\n";
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int threads_flag, long long seed_override) {
  gpgof::SimConfig cfg = gpgof::parse_sim_config(read_file(config_path));
  if (threads_flag > 0 || std::getenv("GPGOF_THREADS"))
    cfg.threads = resolve_threads(threads_flag);
  if (seed_override >= 0)
    cfg.seed = static_cast<std::uint64_t>(seed_override);

  const gpgof::SimResult res = gpgof::run_experiment(
      cfg, [](const std::string& msg) { std::cerr << msg << "\n"; });

  std::error_code dir_ec;
  std::filesystem::create_directories(out_dir, dir_ec);
  const std::string csv_path = out_dir + "/results.csv";
  const std::string json_path = out_dir + "/results.json";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::domain_error("cannot write '" + csv_path + "'");
    csv << gpgof::write_csv(res);
  }
  {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw std::domain_error("cannot write '" + json_path + "'");
    js << gpgof::write_json(res).dump(2) << "\n";
  }
  std::cout << csv_path << "\n" << json_path << "\n";
  return 0;
}

int cmd_diagnose(const std::string& family, const std::string& alt_text,
                 long long n, long long reps, unsigned long long seed,
                 int threads_flag, const std::string& out) {
  const gpgof::FamilySpec spec = gpgof::parse_family(family);
  if (spec.id == gpgof::family_id::pb && spec.nu < 2)
    throw std::domain_error("pb diagnostics needs nu >= 2");
  const gpgof::AlternativeSpec alt = gpgof::parse_alternative(alt_text);
  const int threads = resolve_threads(threads_flag);
  const gpgof::WeightDiagnostics diag =
      gpgof::diagnostics(spec, alt, n, reps, seed, threads);

  if (out == "json") {
    nlohmann::json j;
    j["family"] = gpgof::family_label(spec);
    j["alternative"] = alt.label;
    j["n"] = n;
    j["reps"] = reps;
    j["failures"] = diag.failures;
    j["avg_abs_d"] = diag.avg_abs_d;
    j["max_value"] = diag.max_value;
    j["argmax_k"] = diag.argmax_k;
    j["recommendation"] = diag.recommendation;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (out != "text") throw std::domain_error("out must be text or json");

  std::cout << "family: " << gpgof::family_label(spec)
            << "  alternative: " << alt.label << "  n = " << n
            << "  reps = " << reps << "  failures = " << diag.failures
            << "\n";
  std::printf("%-4s", "k");
  for (int k = 0; k <= 8; ++k) std::printf(" %8d", k);
  std::printf("\n%-4s", "avg");
  for (double v : diag.avg_abs_d) std::printf(" %8.4f", v);
  std::printf("\n");
  std::cout << "max avg|d| = " << fmt(diag.max_value)
            << " at k = " << diag.argmax_k << "\n";
  std::cout << "recommended weights: " << diag.recommendation << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goodness-of-fit tests for recurrence-defined count families"};
  app.require_subcommand(1);

  std::string family = "katz", data_path, format = "raw", stat_name = "all";
  std::string out = "text";
  long long bootstrap = 5000;
  double alpha = 0.05;
  unsigned long long seed = 1729;
  int threads = 0;

  auto* test = app.add_subcommand("test", "fit a family and test fit");
  test->add_option("--family", family, "null family: katz, pp, or pb:<nu>")
      ->required();
  test->add_option("--data", data_path, "path to count data")->required();
  test->add_option("--format", format, "data layout: raw or freq");
  test->add_option("--stat", stat_name, "S1..S7, AD, CVM, or all");
  test->add_option("--bootstrap", bootstrap, "resampling cycles")
      ->check(CLI::PositiveNumber);
  test->add_option("--alpha", alpha, "test level");
  test->add_option("--seed", seed, "master seed");
  test->add_option("--threads", threads, "worker threads");
  test->add_option("--out", out, "output: text, json, or csv");

  std::string config_path, out_dir = ".";
  long long seed_override = -1;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo rejection study");
  sim->add_option("--config", config_path, "key = value config file")
      ->required();
  sim->add_option("--out-dir", out_dir, "directory for results.csv/json");
  sim->add_option("--threads", threads, "worker threads");
  sim->add_option("--seed", seed_override, "override config seed");

  std::string alt_text;
  long long n = 1000, reps = 2000;
  auto* diag = app.add_subcommand("diagnose", "weight-scheme diagnostic");
  diag->add_option("--family", family, "null family: katz, pp, or pb:<nu>")
      ->required();
  diag->add_option("--alt", alt_text, "alternative descriptor name:p1,p2,...")
      ->required();
  diag->add_option("--n", n, "sample size per replicate");
  diag->add_option("--reps", reps, "replicates");
  diag->add_option("--seed", seed, "master seed");
  diag->add_option("--threads", threads, "worker threads");
  diag->add_option("--out", out, "output: text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (test->parsed())
      return cmd_test(family, data_path, format, stat_name, bootstrap, alpha,
                      seed, threads, out);
    if (sim->parsed())
      return cmd_simulate(config_path, out_dir, threads, seed_override);
    if (diag->parsed())
      return cmd_diagnose(family, alt_text, n, reps, seed, threads, out);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gpgof::estimation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
