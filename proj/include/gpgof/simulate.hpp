// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpgof/alternatives.hpp"
#include "gpgof/bootstrap.hpp"
#include "gpgof/family.hpp"
#include "gpgof/parallel.hpp"
#include "gpgof/rng.hpp"

namespace gpgof {

// Monte Carlo rejection study: every (alternative, n) pair gets
// mc_replicates independent datasets, each calibrated by a bootstrap_cycles
// resampling run against the null family, with all statistics sharing the
// replicate's resamples.
struct SimConfig {
  FamilySpec null_spec;
  std::vector<AlternativeSpec> alternatives;
  std::vector<int> n_values;
  std::vector<StatDescriptor> statistics;
  std::int64_t mc_replicates = 1000;
  std::int64_t bootstrap_cycles = 750;
  double alpha = 0.05;
  std::uint64_t seed = 1729;
  int threads = 1;
};

struct SimCell {
  std::string alternative;
  int n = 0;
  std::string statistic;
  double rejection_pct = 0.0;
  std::int64_t failures = 0;
};

struct SimResult {
  std::vector<SimCell> cells;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
};

// Key-value config text: one "key = value" per line, '#' comments.
// Required keys: null_family, alternatives, n_values. Optional:
// statistics (default all), mc_replicates (1000), bootstrap_cycles (750),
// alpha (0.05), seed (1729), threads (1). Lists are whitespace-separated.
inline SimConfig parse_sim_config(const std::string& text) {
  SimConfig cfg;
  bool have_family = false, have_alts = false, have_n = false;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::domain_error("config line " + std::to_string(lineno) + ": " +
                            msg);
  };
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = line.find_first_not_of(" \t\r");
    if (notspace == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail("empty value for key '" + key + "'");
    // Alternative names embed commas (pb:1,3,0.75), so their list splits
    // on whitespace only; comma-free lists accept commas as separators too.
    auto tokens = [&value](bool commas_split = false) {
      std::string src = value;
      if (commas_split) std::replace(src.begin(), src.end(), ',', ' ');
      std::vector<std::string> out;
      std::istringstream ts(src);
      std::string tok;
      while (ts >> tok) out.push_back(tok);
      return out;
    };
    auto as_int64 = [&](const std::string& what) {
      try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return static_cast<std::int64_t>(v);
      } catch (const std::exception&) {
        fail("bad integer for " + what);
        return std::int64_t{0};
      }
    };
    if (key == "null_family") {
      cfg.null_spec = parse_family(value);
      have_family = true;
    } else if (key == "alternatives") {
      cfg.alternatives.clear();
      for (const auto& tok : tokens())
        cfg.alternatives.push_back(parse_alternative(tok));
      have_alts = true;
    } else if (key == "n_values") {
      cfg.n_values.clear();
      for (const auto& tok : tokens(true)) {
        int n = 0;
        try {
          std::size_t pos = 0;
          n = std::stoi(tok, &pos);
          if (pos != tok.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          fail("bad n value '" + tok + "'");
        }
        if (n < 2) fail("n_values entries must be >= 2");
        cfg.n_values.push_back(n);
      }
      have_n = true;
    } else if (key == "statistics") {
      cfg.statistics.clear();
      for (auto tok : tokens(true)) {
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (tok == "all") {
          cfg.statistics = all_statistics();
          break;
        }
        cfg.statistics.push_back(stat_from_name(tok));
      }
    } else if (key == "mc_replicates") {
      cfg.mc_replicates = as_int64("mc_replicates");
      if (cfg.mc_replicates < 1) fail("mc_replicates must be >= 1");
    } else if (key == "bootstrap_cycles") {
      cfg.bootstrap_cycles = as_int64("bootstrap_cycles");
      if (cfg.bootstrap_cycles < 1) fail("bootstrap_cycles must be >= 1");
    } else if (key == "alpha") {
      try {
        std::size_t pos = 0;
        cfg.alpha = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail("bad alpha");
      }
      if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
        fail("alpha must lie in (0, 1)");
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(as_int64("seed"));
    } else if (key == "threads") {
      const std::int64_t t = as_int64("threads");
      if (t < 1) fail("threads must be >= 1");
      cfg.threads = static_cast<int>(t);
    } else {
      fail("unknown config key '" + key + "'");
    }
  }
  if (!have_family) throw std::domain_error("config: missing null_family");
  if (!have_alts || cfg.alternatives.empty())
    throw std::domain_error("config: missing alternatives");
  if (!have_n || cfg.n_values.empty())
    throw std::domain_error("config: missing n_values");
  if (cfg.statistics.empty()) cfg.statistics = all_statistics();
  if (cfg.null_spec.id == family_id::pb && cfg.null_spec.nu < 2)
    throw std::domain_error("config: pb null family needs nu >= 2");
  return cfg;
}

// Runs the study. Per-replicate streams derive from
// (seed, alternative label, n, replicate), so cells are identical for any
// thread count; estimation or table failures mark the replicate failed and
// never abort a cell. Rejection percentages are over succeeded replicates.
inline SimResult run_experiment(
    const SimConfig& cfg,
    const std::function<void(const std::string&)>& log = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  SimResult res;
  res.seed = cfg.seed;
  const std::uint64_t exp_seed = derive_seed(cfg.seed, kSaltExperiment);
  const std::size_t nstats = cfg.statistics.size();

  for (const auto& alt : cfg.alternatives) {
    const std::uint64_t alt_seed =
        derive_seed(exp_seed, hash_label(alt.label));
    for (int n : cfg.n_values) {
      const std::uint64_t cell_seed =
          derive_seed(alt_seed, static_cast<std::uint64_t>(n));
      std::vector<char> rejected(
          static_cast<std::size_t>(cfg.mc_replicates) * nstats, 0);
      std::vector<char> failed(
          static_cast<std::size_t>(cfg.mc_replicates), 0);

      parallel_chunks(
          cfg.mc_replicates, cfg.threads,
          [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t r = begin; r < end; ++r) {
              const std::uint64_t rep_seed =
                  derive_seed(cell_seed, static_cast<std::uint64_t>(r));
              RngStream data_rng(derive_seed(rep_seed, kSaltData));
              try {
                const CountSample s = sample_alternative(alt, n, data_rng);
                const auto results = bootstrap_run(
                    s, cfg.null_spec, cfg.statistics, cfg.bootstrap_cycles,
                    cfg.alpha, rep_seed, /*threads=*/1);
                for (std::size_t j = 0; j < nstats; ++j)
                  rejected[static_cast<std::size_t>(r) * nstats + j] =
                      reject(results[j], cfg.alpha);
              } catch (const estimation_error&) {
                failed[r] = 1;
              } catch (const computation_error&) {
                failed[r] = 1;
              }
            }
          });

      std::int64_t failures = 0;
      for (char f : failed) failures += f;
      const std::int64_t succeeded = cfg.mc_replicates - failures;
      for (std::size_t j = 0; j < nstats; ++j) {
        std::int64_t count = 0;
        for (std::int64_t r = 0; r < cfg.mc_replicates; ++r)
          count += rejected[static_cast<std::size_t>(r) * nstats + j];
        SimCell cell;
        cell.alternative = alt.label;
        cell.n = n;
        cell.statistic = cfg.statistics[j].label;
        cell.rejection_pct =
            succeeded > 0
                ? 100.0 * static_cast<double>(count) /
                      static_cast<double>(succeeded)
                : 0.0;
        cell.failures = failures;
        res.cells.push_back(std::move(cell));
      }
      if (log) {
        std::ostringstream msg;
        msg << alt.label << " n=" << n << " done (" << failures
            << " failed replicates)";
        log(msg.str());
      }
    }
  }
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

inline void to_json(nlohmann::json& j, const SimCell& c) {
  j = nlohmann::json{{"alternative", c.alternative},
                     {"n", c.n},
                     {"statistic", c.statistic},
                     {"rejection_pct", c.rejection_pct},
                     {"failures", c.failures}};
}

inline void from_json(const nlohmann::json& j, SimCell& c) {
  j.at("alternative").get_to(c.alternative);
  j.at("n").get_to(c.n);
  j.at("statistic").get_to(c.statistic);
  j.at("rejection_pct").get_to(c.rejection_pct);
  j.at("failures").get_to(c.failures);
}

inline void to_json(nlohmann::json& j, const SimResult& r) {
  j = nlohmann::json{{"seed", r.seed},
                     {"elapsed_seconds", r.elapsed_seconds},
                     {"cells", r.cells}};
}

inline void from_json(const nlohmann::json& j, SimResult& r) {
  j.at("seed").get_to(r.seed);
  j.at("elapsed_seconds").get_to(r.elapsed_seconds);
  j.at("cells").get_to(r.cells);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

// CSV table, one row per cell. Wall-clock time is deliberately absent so
// that repeated runs of the same configuration emit identical bytes.
inline std::string write_csv(const SimResult& res) {
  std::string out = "alternative,n,statistic,rejection_pct,failures\n";
  char buf[64];
  for (const auto& c : res.cells) {
    std::snprintf(buf, sizeof buf, "%d", c.n);
    out += detail::csv_field(c.alternative);
    out += ',';
    out += buf;
    out += ',';
    out += detail::csv_field(c.statistic);
    std::snprintf(buf, sizeof buf, ",%.4f,%lld\n", c.rejection_pct,
                  static_cast<long long>(c.failures));
    out += buf;
  }
  return out;
}

inline nlohmann::json write_json(const SimResult& res) {
  return nlohmann::json(res);
}

}  // namespace gpgof
