#pragma once

#include <cstdint>

#include "kl/constants.hpp"

namespace kl {

enum class Side { upper, lower, both };

/// A Khintchine-Levy membership query: which statistic (M or M'), the rate
/// slack T, the cutoff index N, and which side(s) of the inequality.
struct KLQuery {
  Variant variant = Variant::M;
  double T = 1.0;
  long long N = 1;
  Side side = Side::upper;

  /// For the M' statistic the lower inequality binds only when
  /// T < kappa' - ln 2 (every omega has M_n' >= 2^n); queries on the lower
  /// side outside that range are trivially satisfied and get flagged.
  bool lower_side_trivial() const;
};

/// Per-index tail factor Xi(T) together with its exact exponent; downstream
/// code must compose powers from log_value, never from the rounded value.
struct Xi {
  double value;      // in (0,1) for T > 0
  double log_value;  // ln Xi = -T^2 / (2 (128 rbar^2 Lbar + (16 rbar Lbar)^{1/3} T)^{3/2})
};

struct BoundReport {
  double xi = 0.0;
  long long K = 0;          // ceil(sqrt(N))
  double log_num = 0.0;     // ln[(2K+1 + 4 Xi/(1-Xi)) Xi^K]
  double den = 0.0;         // 1 - Xi, evaluated as -expm1(ln Xi)
  double finite_sum = 0.0;  // sum_{n=N}^{K^2-1} Xi^{sqrt n}; zero when N = K^2
  double lower_bound = 0.0; // clamped to [0,1]
  bool vacuous = false;     // true when the pre-clamp bound was <= 0
  bool lower_trivial = false;
  KLQuery inputs;
};

/// Brute-force check of the Appendix sum lemma: explicit partial sum plus an
/// integral-comparison cap on everything beyond it.
struct SumOracle {
  double partial;   // sum_{n=N}^{N+terms-1} e^{-alpha sqrt n}
  double tail_cap;  // rigorous upper bound on sum_{n>=N+terms}
};

/// Xi(T) for the chosen variant. Throws std::domain_error for T <= 0.
Xi xi(double T, Variant v);

/// ln of the cumulant bound (k!/2)^2 (16 rbar Lbar)^{k-2} 128 rbar^2 Lbar n.
double cumulant_bound(int k, long long n, Variant v);

/// Tail bound exp(-x^2 / (2 (128 rbar^2 Lbar n + (16 rbar Lbar)^{1/3} x)^{3/2}))
/// on the measure of {+-(S_n - n kappa) >= x}. Throws for x <= 0.
double tail_bound(long long n, double x, Variant v);

/// Appendix lemma: with K = ceil(sqrt(N)),
///   sum_{n>=N} e^{-alpha sqrt n}
///     <= sum_{n=N}^{K^2-1} e^{-alpha sqrt n}
///        + e^{-alpha K}/(1-e^{-alpha}) (2K+1 + 4 e^{-alpha}/(1-e^{-alpha})).
double exp_sqrt_sum_bound(double alpha, long long N);

SumOracle exp_sqrt_sum_oracle(double alpha, long long N, long long terms);

/// The measure lower bound of the main theorems, composed in log domain.
BoundReport kl_measure_lower_bound(const KLQuery& q);

/// Minimal N = K^2 with kl_measure_lower_bound(...) >= est. The search is
/// restricted to K >= K* = ceil((3 Xi - 1)/(2 (1 - Xi))), above which the
/// bound is monotone in K; exponential bracketing then binary search.
long long min_n_for_estimate(double T, double est, Variant v, Side side);

/// Minimal T (to ~1e-7 relative) with the bound >= est at fixed N.
double min_t_for_estimate(double est, long long N, Variant v, Side side);

}  // namespace kl
