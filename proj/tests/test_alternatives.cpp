// SPDX-License-Identifier: Apache-2.0
//
// Alternative-distribution descriptors and samplers. Mean checks compare
// the empirical mean against closed-form mixture means; degenerate mixture
// weights reduce to known distributions that closed-form pmfs can verify.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gpgof/gpgof.hpp"
#include "support/stat_checks.hpp"

namespace {

double nb_pmf(double r, double s, int k) {
  return std::exp(std::lgamma(k + r) - std::lgamma(r) -
                  std::lgamma(k + 1.0) + r * std::log(s) +
                  k * std::log(1.0 - s));
}

double katz_pmf_closed(double lambda, double theta, int k) {
  return nb_pmf(lambda / theta, 1.0 - theta, k);
}

double pois_pmf(int k, double mu) {
  return std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
}

gpgof::CountSample draw(const std::string& text, std::int64_t n,
                        std::uint64_t seed) {
  const auto alt = gpgof::parse_alternative(text);
  gpgof::RngStream rng(seed);
  return gpgof::sample_alternative(alt, n, rng);
}

// Empirical mean within four standard errors of the target.
void expect_mean_near(const std::string& text, double want,
                      std::uint64_t seed) {
  const std::int64_t n = 400000;
  const auto s = draw(text, n, seed);
  const double se = std::sqrt(s.variance() / static_cast<double>(n));
  EXPECT_NEAR(s.mean(), want, 4.0 * se) << text;
}

}  // namespace

TEST(AlternativeParse, CanonicalLabels) {
  EXPECT_EQ(gpgof::parse_alternative("du:2").label, "du:2");
  EXPECT_EQ(gpgof::parse_alternative("mkdu:8,0.5,2,0.5").label,
            "mkdu:8,0.5,2,0.5");
  // Numerically equal parameter spellings collapse to one label.
  EXPECT_EQ(gpgof::parse_alternative("pp:1,2.0").label, "pp:1,2");
  EXPECT_EQ(gpgof::parse_alternative("PB:1,3,0.750").label, "pb:1,3,0.75");
  EXPECT_EQ(gpgof::parse_alternative("bb:6,2").kind,
            gpgof::alt_kind::beta_binomial);
  EXPECT_EQ(gpgof::parse_alternative("maxkdu:2,0.5,8").kind,
            gpgof::alt_kind::max_katz_uniform);
}

TEST(AlternativeParse, RejectsMalformedDescriptors) {
  EXPECT_THROW(gpgof::parse_alternative("zz:1"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("du"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("du:"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("du:1,2"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("du:0"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("du:2.5"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("mkdu:8,1.5,2,0.5"),
               std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("bb:0,1"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("pb:1,3,0"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("pb:1,3"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("nb:2,x"), std::domain_error);
  EXPECT_THROW(gpgof::parse_alternative("mpdu:10,1.5"), std::domain_error);
}

TEST(AlternativeSample, MeansMatchClosedForms) {
  expect_mean_near("bb:6,2", 3.0, 901);
  expect_mean_near("du:2", 1.0, 902);
  expect_mean_near("du:15", 7.5, 903);
  expect_mean_near("mpdu:10,0.25", 0.25 * 1.0 + 0.75 * 5.0, 904);
  expect_mean_near("pb:1,3,0.75", 2.25, 905);
  expect_mean_near("nb:2,0.5", 2.0, 906);
  expect_mean_near("mkdu:8,0.5,2,0.5", 0.5 * 16.0 + 0.5 * 1.0, 907);
  expect_mean_near("mkp:4,0.5,1,0.25", 0.25 * 8.0 + 0.75 * 1.0, 908);
  expect_mean_near("mnbp:4,0.25,1,0.25", 0.25 * 12.0 + 0.75 * 1.0, 909);
  expect_mean_near("mpbdu:2,3,0.75,2,0.5", 0.5 * 4.5 + 0.5 * 1.0, 910);
  expect_mean_near("katz:2,0.5", 4.0, 911);
  expect_mean_near("pp:1,2", 2.0, 912);
}

TEST(AlternativeSample, MaxMixtureMeanByEnumeration) {
  // E max(K, U) = sum_k P(max > k) with independent K ~ katz(2, 0.5) and
  // U uniform on {0..top}.
  const int top = 2;
  double want = 0.0;
  double katz_cdf = 0.0;
  for (int k = 0; k <= 400; ++k) {
    katz_cdf += katz_pmf_closed(2.0, 0.5, k);
    const double unif_cdf = std::min(1.0, (k + 1.0) / (top + 1.0));
    want += 1.0 - katz_cdf * unif_cdf;
  }
  expect_mean_near("maxkdu:2,0.5,2", want, 913);
}

TEST(AlternativeSample, UnitEpsReducesToFirstComponent) {
  {
    // mpdu with eps = 1 is Poisson(1).
    const auto s = draw("mpdu:10,1", 100000, 71);
    const int width = s.max_value() + 1;
    std::vector<double> observed(static_cast<std::size_t>(width) + 1, 0.0);
    std::vector<double> expected(observed.size(), 0.0);
    double head = 0.0;
    for (int k = 0; k < width; ++k) {
      observed[static_cast<std::size_t>(k)] =
          static_cast<double>(s.freq[static_cast<std::size_t>(k)]);
      const double p = pois_pmf(k, 1.0);
      expected[static_cast<std::size_t>(k)] = 100000.0 * p;
      head += p;
    }
    expected.back() = 100000.0 * (1.0 - head);
    EXPECT_GT(testsupport::chi2_gof_pvalue(observed, expected), 1e-3);
  }
  {
    // mkdu with eps = 1 is katz(2, 0.5).
    const auto s = draw("mkdu:2,0.5,3,1", 100000, 72);
    const int width = s.max_value() + 1;
    std::vector<double> observed(static_cast<std::size_t>(width) + 1, 0.0);
    std::vector<double> expected(observed.size(), 0.0);
    double head = 0.0;
    for (int k = 0; k < width; ++k) {
      observed[static_cast<std::size_t>(k)] =
          static_cast<double>(s.freq[static_cast<std::size_t>(k)]);
      const double p = katz_pmf_closed(2.0, 0.5, k);
      expected[static_cast<std::size_t>(k)] = 100000.0 * p;
      head += p;
    }
    expected.back() = 100000.0 * (1.0 - head);
    EXPECT_GT(testsupport::chi2_gof_pvalue(observed, expected), 1e-3);
  }
}

TEST(AlternativeSample, ZeroEpsReducesToSecondComponent) {
  // mpdu with eps = 0 is uniform on {0..10}: eleven equal cells.
  const auto s = draw("mpdu:10,0", 110000, 73);
  ASSERT_EQ(s.max_value(), 10);
  std::vector<double> observed(11, 0.0);
  for (int k = 0; k <= 10; ++k)
    observed[static_cast<std::size_t>(k)] =
        static_cast<double>(s.freq[static_cast<std::size_t>(k)]);
  const std::vector<double> expected(11, 10000.0);
  EXPECT_GT(testsupport::chi2_gof_pvalue(observed, expected), 1e-3);
}

TEST(AlternativeSample, DeterministicPerSeedAndLabel) {
  const auto a = draw("mkdu:8,0.5,2,0.5", 400, 5);
  const auto b = draw("mkdu:8,0.5,2,0.5", 400, 5);
  const auto c = draw("mkdu:8,0.5,2,0.5", 400, 6);
  EXPECT_EQ(a.freq, b.freq);
  EXPECT_NE(a.freq, c.freq);
}

TEST(AlternativeSample, ConsecutiveDrawsDiffer) {
  const auto alt = gpgof::parse_alternative("du:6");
  gpgof::RngStream rng(14);
  const auto a = gpgof::sample_alternative(alt, 300, rng);
  const auto b = gpgof::sample_alternative(alt, 300, rng);
  EXPECT_NE(a.freq, b.freq);
}

TEST(AlternativeSample, RejectsNonPositiveCount) {
  const auto alt = gpgof::parse_alternative("du:2");
  gpgof::RngStream rng(1);
  EXPECT_THROW(gpgof::sample_alternative(alt, 0, rng), std::domain_error);
}
