#pragma once

// Power-law tail fitting by maximum likelihood with the lower cutoff chosen
// to minimize the Kolmogorov-Smirnov distance (Clauset-Shalizi-Newman).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "creditnet/error.hpp"
#include "creditnet/random.hpp"

namespace creditnet {

enum class TailMode { Discrete, Continuous };

struct PowerLawFit {
  double alpha = 0.0;
  double xmin = 0.0;
  double ks = 0.0;
  std::size_t n_tail = 0;
  TailMode mode = TailMode::Continuous;
  std::optional<double> p_value;  // set when bootstrapping was requested
};

struct PowerLawOptions {
  TailMode mode = TailMode::Continuous;
  std::size_t min_tail = 10;
  bool bootstrap = false;
  std::size_t resamples = 100;
  std::uint64_t seed = 0;
};

class FitFailure : public Error {
 public:
  using Error::Error;
};

// Hurwitz zeta(s, q) for s > 1, q > 0 by Euler-Maclaurin summation.
inline double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw InvalidArgument("hurwitz_zeta: need s > 1 and q > 0");
  constexpr int kDirect = 12;
  // B_2k / (2k)!
  static constexpr double kBernoulli[] = {1.0 / 12,           -1.0 / 720,          1.0 / 30240,
                                          -1.0 / 1209600,     1.0 / 47900160,      -691.0 / 1307674368000.0,
                                          1.0 / 74724249600.0};
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
  const double a = q + kDirect;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;                 // s (s+1) ... (s+2j-2)
  double power = std::pow(a, -s - 1.0);  // a^{-s-2j+1}
  for (int j = 0; j < 7; ++j) {
    sum += kBernoulli[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= a * a;
  }
  return sum;
}

namespace detail {

inline double model_cdf(TailMode mode, double alpha, double xmin, double x) {
  if (x < xmin) return 0.0;
  if (mode == TailMode::Continuous) return 1.0 - std::pow(x / xmin, 1.0 - alpha);
  return 1.0 - hurwitz_zeta(alpha, std::floor(x) + 1.0) / hurwitz_zeta(alpha, xmin);
}

// Exact sup-norm distance for a sorted tail.
inline double ks_sorted(std::span<const double> tail, TailMode mode, double alpha, double xmin) {
  const double n = static_cast<double>(tail.size());
  double d = 0.0;
  if (mode == TailMode::Continuous) {
    for (std::size_t i = 0; i < tail.size(); ++i) {
      const double f = model_cdf(mode, alpha, xmin, tail[i]);
      d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
  }
  // Integer support: both CDFs are right-continuous steps at integers, so
  // the supremum is attained at a sample value or the integer just below it.
  const double zmin = hurwitz_zeta(alpha, xmin);
  std::size_t i = 0;
  while (i < tail.size()) {
    const double v = tail[i];
    std::size_t j = i;
    while (j < tail.size() && tail[j] == v) ++j;
    const double f = 1.0 - hurwitz_zeta(alpha, v + 1.0) / zmin;
    d = std::max(d, std::abs(static_cast<double>(j) / n - f));
    if (v - 1.0 >= xmin) {
      const double fb = 1.0 - hurwitz_zeta(alpha, v) / zmin;
      d = std::max(d, std::abs(static_cast<double>(i) / n - fb));
    }
    i = j;
  }
  return d;
}

inline double discrete_mle(std::span<const double> tail, double xmin) {
  double log_sum = 0.0;
  for (double x : tail) log_sum += std::log(x);
  const double n = static_cast<double>(tail.size());
  auto neg_loglik = [&](double a) { return n * std::log(hurwitz_zeta(a, xmin)) + a * log_sum; };
  auto [alpha, value] = boost::math::tools::brent_find_minima(neg_loglik, 1.0 + 1e-6, 50.0, 50);
  (void)value;
  return alpha;
}

inline void check_samples(std::span<const double> samples, TailMode mode) {
  for (double x : samples) {
    if (!(x > 0) || !std::isfinite(x)) throw InvalidArgument("power-law samples must be positive and finite");
    if (mode == TailMode::Discrete && x != std::floor(x)) {
      throw InvalidArgument("discrete power-law samples must be integers");
    }
  }
}

inline PowerLawFit fit_sorted(std::span<const double> sorted, const PowerLawOptions& opt) {
  const std::size_t n = sorted.size();
  // suffix[i] = sum of log(sorted[k]) for k >= i
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + std::log(sorted[i]);

  std::optional<PowerLawFit> best;
  std::size_t i = 0;
  while (i < n) {
    const double xmin = sorted[i];
    const std::size_t n_tail = n - i;
    if (n_tail < opt.min_tail) break;
    const auto tail = sorted.subspan(i);
    double alpha;
    if (opt.mode == TailMode::Continuous) {
      const double denom = suffix[i] - static_cast<double>(n_tail) * std::log(xmin);
      if (denom <= 0) break;  // every remaining sample equals xmin
      alpha = 1.0 + static_cast<double>(n_tail) / denom;
    } else {
      if (tail.back() == xmin) break;
      alpha = discrete_mle(tail, xmin);
    }
    const double ks = ks_sorted(tail, opt.mode, alpha, xmin);
    if (!best || ks < best->ks) best = PowerLawFit{alpha, xmin, ks, n_tail, opt.mode, std::nullopt};
    while (i < n && sorted[i] == xmin) ++i;
  }
  if (!best) {
    throw FitFailure("power-law fit failed: no cutoff leaves " + std::to_string(opt.min_tail) +
                     " or more non-degenerate tail samples");
  }
  return *best;
}

}  // namespace detail

// Sup-norm distance between the empirical CDF of `tail` and the fitted model.
inline double ks_distance(std::span<const double> tail, const PowerLawFit& fit) {
  if (tail.empty()) throw InvalidArgument("ks_distance: empty tail");
  std::vector<double> sorted(tail.begin(), tail.end());
  detail::check_samples(sorted, fit.mode);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < fit.xmin) throw InvalidArgument("ks_distance: sample below xmin");
  return detail::ks_sorted(sorted, fit.mode, fit.alpha, fit.xmin);
}

// Draw from the fitted tail model (discrete via the rounded continuous
// approximation).
inline double sample_power_law(Rng& rng, TailMode mode, double xmin, double alpha) {
  if (mode == TailMode::Continuous) return pareto(rng, xmin, alpha);
  return std::floor(pareto(rng, xmin - 0.5, alpha) + 0.5);
}

inline PowerLawFit fit_power_law(std::span<const double> samples, const PowerLawOptions& opt = {}) {
  if (samples.size() < opt.min_tail) {
    throw FitFailure("power-law fit needs at least " + std::to_string(opt.min_tail) + " samples");
  }
  detail::check_samples(samples, opt.mode);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  PowerLawFit fit = detail::fit_sorted(sorted, opt);

  if (opt.bootstrap) {
    // Semi-parametric bootstrap: tail draws from the fitted model, body
    // draws resampled from the observed values below xmin.
    const auto body_end = std::lower_bound(sorted.begin(), sorted.end(), fit.xmin);
    const std::vector<double> body(sorted.begin(), body_end);
    const double p_tail = static_cast<double>(fit.n_tail) / static_cast<double>(sorted.size());
    PowerLawOptions inner = opt;
    inner.bootstrap = false;
    std::size_t worse = 0, done = 0;
    for (std::size_t b = 0; b < opt.resamples; ++b) {
      Rng rng(derive_seed(opt.seed, b));
      std::vector<double> synth(sorted.size());
      for (auto& x : synth) {
        if (body.empty() || uniform01(rng) < p_tail) {
          x = sample_power_law(rng, opt.mode, fit.xmin, fit.alpha);
        } else {
          x = body[uniform_index(rng, body.size())];
        }
      }
      std::sort(synth.begin(), synth.end());
      try {
        if (detail::fit_sorted(synth, inner).ks >= fit.ks) ++worse;
        ++done;
      } catch (const FitFailure&) {
      }
    }
    fit.p_value = done ? static_cast<double>(worse) / static_cast<double>(done) : 0.0;
  }
  return fit;
}

inline nlohmann::ordered_json to_json(const PowerLawFit& fit, const std::string& series) {
  nlohmann::ordered_json j;
  j["series"] = series;
  j["alpha"] = fit.alpha;
  j["xmin"] = fit.xmin;
  j["ks"] = fit.ks;
  j["n_tail"] = fit.n_tail;
  if (fit.p_value) j["p_value"] = *fit.p_value;
  return j;
}

}  // namespace creditnet
