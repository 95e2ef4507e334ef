// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "gpgof/count_sample.hpp"
#include "gpgof/family.hpp"
#include "gpgof/pmf.hpp"
#include "gpgof/rng.hpp"

namespace gpgof {
namespace variates {

// Scalar samplers built on RngStream uniforms only, so every draw is a
// pure function of the stream state.

inline double normal(RngStream& rng) {
  const double u1 = 1.0 - rng.u01();  // (0, 1], log-safe
  const double u2 = rng.u01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline int poisson(RngStream& rng, double mu) {
  if (!(mu >= 0.0)) throw std::domain_error("poisson mean must be >= 0");
  if (mu == 0.0) return 0;
  // Halve large means and add: sums of independent pieces are exact.
  if (mu > 30.0)
    return poisson(rng, mu / 2) + poisson(rng, mu - mu / 2);
  double p = std::exp(-mu);
  double cum = p;
  const double u = rng.u01();
  int k = 0;
  while (u > cum && k < 10 * static_cast<int>(mu) + 200) {
    ++k;
    p *= mu / k;
    cum += p;
  }
  return k;
}

inline int binomial(RngStream& rng, int trials, double p) {
  if (trials < 0) throw std::domain_error("binomial trials must be >= 0");
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::domain_error("binomial prob must lie in [0, 1]");
  int k = 0;
  for (int i = 0; i < trials; ++i) k += rng.u01() < p;
  return k;
}

// Failures before the first success.
inline int geometric_failures(RngStream& rng, double p) {
  if (!(p > 0.0) || !(p <= 1.0))
    throw std::domain_error("geometric prob must lie in (0, 1]");
  if (p == 1.0) return 0;
  const double u = 1.0 - rng.u01();  // (0, 1]
  return static_cast<int>(std::floor(std::log(u) / std::log1p(-p)));
}

inline double gamma_shape(RngStream& rng, double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma shape must be > 0");
  if (shape < 1.0) {
    const double u = 1.0 - rng.u01();  // (0, 1]
    return gamma_shape(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.u01();  // (0, 1]
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

inline double beta(RngStream& rng, double a, double b) {
  const double x = gamma_shape(rng, a);
  const double y = gamma_shape(rng, b);
  return x / (x + y);
}

// Failures before the size-th success; non-integer size uses the
// gamma-mixed Poisson representation.
inline int negative_binomial(RngStream& rng, double size, double p) {
  if (!(size > 0.0)) throw std::domain_error("nb size must be > 0");
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("nb prob must lie in (0, 1)");
  if (size == std::floor(size) && size <= 64.0) {
    int k = 0;
    for (int i = 0; i < static_cast<int>(size); ++i)
      k += geometric_failures(rng, p);
    return k;
  }
  const double rate = gamma_shape(rng, size) * (1.0 - p) / p;
  return poisson(rng, rate);
}

inline int discrete_uniform(RngStream& rng, int top) {
  if (top < 0) throw std::domain_error("uniform top must be >= 0");
  return static_cast<int>(rng.below(static_cast<std::uint64_t>(top) + 1));
}

}  // namespace variates

// Data-generating models for power studies. Mixtures draw the first-named
// component with probability eps. All integer draws are non-negative.
//
//   bb:v,a            beta-mixed binomial: p ~ Beta(a, a) per observation,
//                     then Binomial(v, p)
//   du:t              uniform on {0, ..., t}
//   mpdu:t,eps        Poisson(1) w.p. eps, else du:t
//   mpbdu:l,v,p,t,eps pb:l,v,p w.p. eps, else du:t
//   pb:l,v,p          Poisson(l)-stopped sum of Binomial(v, p); the pb
//                     family itself with fixed parameters
//   nb:v,p            failures before v successes
//   mkdu:l,th,t,eps   katz(l, th) w.p. eps, else du:t
//   mkp:l,th,m,eps    katz(l, th) w.p. eps, else Poisson(m)
//   mnbp:s,p,m,eps    nb(size s, prob p) w.p. eps, else Poisson(m)
//   maxkdu:l,th,t     max of independent katz(l, th) and du:t
//   katz:l,th pp:l,th the null families with fixed parameters
enum class alt_kind {
  beta_binomial,
  uniform,
  mix_poisson_uniform,
  mix_pb_uniform,
  pb_compound,
  neg_binomial,
  mix_katz_uniform,
  mix_katz_poisson,
  mix_nb_poisson,
  max_katz_uniform,
  null_katz,
  null_pp,
};

struct AlternativeSpec {
  alt_kind kind = alt_kind::uniform;
  double lambda = 0.0;  // katz/pb rate or nb size
  double theta = 0.0;   // katz theta
  double prob = 0.0;    // binomial or nb success probability
  double shape = 0.0;   // beta shape a
  double eps = 0.0;     // weight of the first-named mixture component
  double pois_mean = 0.0;
  int trials = 0;       // binomial trials / nb success count
  int top = 0;          // uniform upper end
  std::string label;    // canonical descriptor
};

namespace detail {

inline std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // trim to shortest round-trip-free form for common values
  double parsed = 0.0;
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == v) break;
  }
  return buf;
}

inline std::string canonical_label(const std::string& name,
                                   const std::vector<double>& params) {
  std::string out = name;
  for (std::size_t i = 0; i < params.size(); ++i)
    out += (i == 0 ? ":" : ",") + format_param(params[i]);
  return out;
}

inline int int_param(double v, const char* what) {
  if (v != std::floor(v) || v < 0 || v > 1e9)
    throw std::domain_error(std::string(what) +
                            " must be a non-negative integer");
  return static_cast<int>(v);
}

inline void check_prob(double v, const char* what, bool open_ends = true) {
  const bool ok = open_ends ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
  if (!ok)
    throw std::domain_error(std::string(what) + " out of range");
}

inline void check_pos(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::domain_error(std::string(what) + " must be positive");
}

}  // namespace detail

// Parses "name:p1,p2,..." into a validated AlternativeSpec with a
// canonical label (used verbatim in seed derivation, so equal descriptors
// always map to equal streams).
inline AlternativeSpec parse_alternative(const std::string& text) {
  const auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::vector<double> par;
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const std::string tok =
          rest.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
      if (tok.empty())
        throw std::domain_error("empty parameter in alternative '" + text +
                                "'");
      try {
        std::size_t pos = 0;
        par.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::domain_error("bad parameter '" + tok + "' in alternative '" +
                                text + "'");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  auto need = [&](std::size_t count) {
    if (par.size() != count)
      throw std::domain_error("alternative '" + name + "' takes " +
                              std::to_string(count) + " parameters");
  };
  using detail::check_pos;
  using detail::check_prob;
  using detail::int_param;

  AlternativeSpec a;
  a.label = detail::canonical_label(name, par);
  if (name == "bb") {
    need(2);
    a.kind = alt_kind::beta_binomial;
    a.trials = int_param(par[0], "bb trials");
    if (a.trials < 1) throw std::domain_error("bb trials must be >= 1");
    check_pos(par[1], "bb shape");
    a.shape = par[1];
  } else if (name == "du") {
    need(1);
    a.kind = alt_kind::uniform;
    a.top = int_param(par[0], "du top");
    if (a.top < 1) throw std::domain_error("du top must be >= 1");
  } else if (name == "mpdu") {
    need(2);
    a.kind = alt_kind::mix_poisson_uniform;
    a.top = int_param(par[0], "mpdu top");
    if (a.top < 1) throw std::domain_error("mpdu top must be >= 1");
    check_prob(par[1], "mpdu eps", false);
    a.eps = par[1];
    a.pois_mean = 1.0;
  } else if (name == "mpbdu") {
    need(5);
    a.kind = alt_kind::mix_pb_uniform;
    check_pos(par[0], "mpbdu lambda");
    a.lambda = par[0];
    a.trials = int_param(par[1], "mpbdu trials");
    if (a.trials < 1) throw std::domain_error("mpbdu trials must be >= 1");
    check_prob(par[2], "mpbdu prob");
    a.prob = par[2];
    a.top = int_param(par[3], "mpbdu top");
    if (a.top < 1) throw std::domain_error("mpbdu top must be >= 1");
    check_prob(par[4], "mpbdu eps", false);
    a.eps = par[4];
  } else if (name == "pb") {
    need(3);
    a.kind = alt_kind::pb_compound;
    check_pos(par[0], "pb lambda");
    a.lambda = par[0];
    a.trials = int_param(par[1], "pb trials");
    if (a.trials < 1) throw std::domain_error("pb trials must be >= 1");
    check_prob(par[2], "pb prob");
    a.prob = par[2];
  } else if (name == "nb") {
    need(2);
    a.kind = alt_kind::neg_binomial;
    check_pos(par[0], "nb size");
    a.lambda = par[0];
    check_prob(par[1], "nb prob");
    a.prob = par[1];
  } else if (name == "mkdu") {
    need(4);
    a.kind = alt_kind::mix_katz_uniform;
    check_pos(par[0], "mkdu lambda");
    a.lambda = par[0];
    check_prob(par[1], "mkdu theta");
    a.theta = par[1];
    a.top = int_param(par[2], "mkdu top");
    if (a.top < 1) throw std::domain_error("mkdu top must be >= 1");
    check_prob(par[3], "mkdu eps", false);
    a.eps = par[3];
  } else if (name == "mkp") {
    need(4);
    a.kind = alt_kind::mix_katz_poisson;
    check_pos(par[0], "mkp lambda");
    a.lambda = par[0];
    check_prob(par[1], "mkp theta");
    a.theta = par[1];
    check_pos(par[2], "mkp poisson mean");
    a.pois_mean = par[2];
    check_prob(par[3], "mkp eps", false);
    a.eps = par[3];
  } else if (name == "mnbp") {
    need(4);
    a.kind = alt_kind::mix_nb_poisson;
    check_pos(par[0], "mnbp size");
    a.lambda = par[0];
    check_prob(par[1], "mnbp prob");
    a.prob = par[1];
    check_pos(par[2], "mnbp poisson mean");
    a.pois_mean = par[2];
    check_prob(par[3], "mnbp eps", false);
    a.eps = par[3];
  } else if (name == "maxkdu") {
    need(3);
    a.kind = alt_kind::max_katz_uniform;
    check_pos(par[0], "maxkdu lambda");
    a.lambda = par[0];
    check_prob(par[1], "maxkdu theta");
    a.theta = par[1];
    a.top = int_param(par[2], "maxkdu top");
    if (a.top < 1) throw std::domain_error("maxkdu top must be >= 1");
  } else if (name == "katz") {
    need(2);
    a.kind = alt_kind::null_katz;
    check_pos(par[0], "katz lambda");
    a.lambda = par[0];
    check_prob(par[1], "katz theta");
    a.theta = par[1];
  } else if (name == "pp") {
    need(2);
    a.kind = alt_kind::null_pp;
    check_pos(par[0], "pp lambda");
    a.lambda = par[0];
    check_pos(par[1], "pp theta");
    a.theta = par[1];
  } else {
    throw std::domain_error("unknown alternative '" + name + "'");
  }
  return a;
}

// Draws n observations. Component order inside an observation is fixed
// (mixture indicator first, then the chosen component), which pins the
// stream consumption pattern and with it reproducibility.
inline CountSample sample_alternative(const AlternativeSpec& alt,
                                      std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::domain_error("sample size must be >= 1");
  std::unique_ptr<GpSampler> katz;
  if (alt.kind == alt_kind::mix_katz_uniform ||
      alt.kind == alt_kind::mix_katz_poisson ||
      alt.kind == alt_kind::max_katz_uniform ||
      alt.kind == alt_kind::null_katz) {
    katz = std::make_unique<GpSampler>(FamilySpec{family_id::katz, 0},
                                       FittedParams{alt.lambda, alt.theta});
  }
  std::unique_ptr<GpSampler> pp;
  if (alt.kind == alt_kind::null_pp) {
    pp = std::make_unique<GpSampler>(FamilySpec{family_id::pp, 0},
                                     FittedParams{alt.lambda, alt.theta});
  }

  auto draw_pb = [&alt](RngStream& g) {
    const int count = variates::poisson(g, alt.lambda);
    int x = 0;
    for (int i = 0; i < count; ++i)
      x += variates::binomial(g, alt.trials, alt.prob);
    return x;
  };

  auto draw_one = [&](RngStream& g) -> int {
    switch (alt.kind) {
      case alt_kind::beta_binomial: {
        const double p = variates::beta(g, alt.shape, alt.shape);
        return variates::binomial(g, alt.trials, p);
      }
      case alt_kind::uniform:
        return variates::discrete_uniform(g, alt.top);
      case alt_kind::mix_poisson_uniform:
        return g.u01() < alt.eps ? variates::poisson(g, alt.pois_mean)
                                 : variates::discrete_uniform(g, alt.top);
      case alt_kind::mix_pb_uniform:
        return g.u01() < alt.eps ? draw_pb(g)
                                 : variates::discrete_uniform(g, alt.top);
      case alt_kind::pb_compound:
        return draw_pb(g);
      case alt_kind::neg_binomial:
        return variates::negative_binomial(g, alt.lambda, alt.prob);
      case alt_kind::mix_katz_uniform:
        return g.u01() < alt.eps ? katz->draw(g)
                                 : variates::discrete_uniform(g, alt.top);
      case alt_kind::mix_katz_poisson:
        return g.u01() < alt.eps ? katz->draw(g)
                                 : variates::poisson(g, alt.pois_mean);
      case alt_kind::mix_nb_poisson:
        return g.u01() < alt.eps
                   ? variates::negative_binomial(g, alt.lambda, alt.prob)
                   : variates::poisson(g, alt.pois_mean);
      case alt_kind::max_katz_uniform: {
        const int a = katz->draw(g);
        const int b = variates::discrete_uniform(g, alt.top);
        return std::max(a, b);
      }
      case alt_kind::null_katz:
        return katz->draw(g);
      case alt_kind::null_pp:
        return pp->draw(g);
    }
    throw std::domain_error("unknown alternative kind");
  };

  CountSample s;
  s.n = n;
  for (std::int64_t i = 0; i < n; ++i) {
    const int v = draw_one(rng);
    if (static_cast<std::size_t>(v) >= s.freq.size()) s.freq.resize(v + 1, 0);
    ++s.freq[v];
  }
  return s;
}

}  // namespace gpgof
