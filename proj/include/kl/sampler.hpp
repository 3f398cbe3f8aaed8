#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "kl/cf.hpp"
#include "kl/constants.hpp"

namespace kl {

struct SampleConfig {
  long long trials = 1000;
  long long n = 100;          // digits per sample
  std::uint64_t seed = 0;
  long long bits = 0;         // 0: derived from n via default_bits
  int threads = 1;
};

/// Precision budget from the Levy growth rate ln q_n / n -> pi^2/(12 ln 2):
/// certifying n quotients needs width below ~1/q_n^2, so 2 l n / ln 2 bits,
/// with a 1.2x safety factor and a 64-bit margin.
long long default_bits(long long n);

struct SimulationResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  long long trials_used = 0;
  long long trials_short = 0;       // certification stopped before n digits
  std::optional<double> bound;      // theoretical value compared against
  std::uint64_t seed = 0;
};

/// One draw from the Gauss measure as a certified rational interval in (0,1):
/// u uniform on dyadic rationals with `bits` random bits, x = 2^u - 1
/// (whose distribution function is log2(1 + x)); width <= 2^{1-bits} ln 2.
/// Deterministic in (seed, trial), independent of call order and threads.
std::pair<Rational, Rational> sample_gauss(std::uint64_t seed, long long trial,
                                           long long bits);

/// The sampled interval piped through the certified expansion; may hold
/// fewer than cfg.n quotients (a "short" sample, to be excluded upstream).
ContinuedFraction sample_quotients(const SampleConfig& cfg, long long trial);

/// Mean of S_n/n (variant M) or S_n'/n (Mprime); bound = kappa or kappa'.
/// Throws if more than half the trials are short.
SimulationResult estimate_kappa(const SampleConfig& cfg, Variant v);

/// Empirical frequency of +-(S_n - n kappa) >= n T; bound = xi(T, v)^sqrt(n).
SimulationResult estimate_tail(const SampleConfig& cfg, double T, Variant v,
                               bool upper);

}  // namespace kl
