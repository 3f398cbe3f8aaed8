#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kl/constants.hpp"

namespace kl {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// ln of a positive big integer.
double log_big(const BigInt& x);

/// A continued-fraction expansion [a_1, a_2, ...] of a number in (0,1).
/// Quotients too large for exact storage (synthetic constructions) are kept
/// as placeholders with their exact natural log carried alongside.
struct ContinuedFraction {
  std::vector<BigInt> quotients;
  std::vector<double> log_values;   // ln a_j for every j
  std::vector<bool> is_symbolic;    // true: quotients[j] is a placeholder
  bool exact = false;               // rational input, expansion terminated
  bool certified = false;           // every emitted quotient certified
  std::string source;

  std::size_t size() const { return quotients.size(); }
};

/// Per-index digit statistics of an expansion.
struct CFStatistics {
  long long n_max = 0;
  std::vector<double> log_a;        // ln a_n (n = 1..n_max)
  std::vector<double> log_M;        // S_n = sum ln a
  std::vector<double> log_M_prime;  // S'_n = sum ln(1 + a)
  std::vector<BigInt> p, q;         // exact convergents while q fits bit_cap
  std::vector<double> log_q;        // ln q_n for every n
  std::vector<double> deviation;    // W_n = |S_n / n - kappa|
  long long bit_cap = 0;
  long long exact_count = 0;        // entries of p/q actually filled
};

struct DiophantineParams {
  double C;    // > 0
  double tau;  // >= 1
};

struct WitnessResult {
  bool holds;
  std::optional<long long> first_failure;  // least n with a_{n+1} > C^{-1} q_n^{tau-1}
};

struct MembershipResult {
  std::vector<bool> per_n;
  std::optional<long long> first_violation;  // 1-based index
};

/// Exact Euclidean expansion of p/q in (0,1); canonical form (final quotient
/// >= 2 whenever the length exceeds 1).
ContinuedFraction expand_rational(const BigInt& p, const BigInt& q,
                                  long long max_terms = -1);

/// Certified expansion of an open interval (lo, hi) in (0,1): a quotient is
/// emitted only while floor(1/x) is constant over the whole interval, with
/// exact rational endpoints maintained throughout. Stops at the first
/// ambiguous step or at max_terms.
ContinuedFraction expand_interval(const Rational& lo, const Rational& hi,
                                  long long max_terms);

/// Fills every CFStatistics sequence for n = 1..n_max. Convergents are exact
/// big integers until q exceeds bit_cap bits (or a symbolic quotient is hit),
/// then tracked in log domain only.
CFStatistics statistics(const ContinuedFraction& cf, long long n_max,
                        const ConstantsTable& table,
                        long long bit_cap = 1000000);

/// Khintchine-Levy membership per index: upper means S_n <= (kappa + T) n,
/// lower means S_n >= (kappa - T) n (primed statistic for variant Mprime).
MembershipResult kl_membership(const CFStatistics& stats, double T, Variant v,
                               bool upper);

/// Lemma-style witness: a_{n+1} <= C^{-1} q_n^{tau-1}, checked in log domain
/// for n = 1..min(n_max, stats.n_max - 1).
WitnessResult diophantine_witness(const CFStatistics& stats,
                                  const DiophantineParams& params,
                                  long long n_max);

/// The Diophantine constant C/(1 + 2C) guaranteed by the converse direction.
double diophantine_convert(double C);

/// tau = 1 + (kappa + T)/ln(golden ratio) for a one-sided (upper) KL rate.
double kl_to_diophantine_tau_upper(double T, double kappa);

/// tau = 1 + (T_plus + T_minus)/ln(golden ratio) for a two-sided rate.
double kl_to_diophantine_tau_two_sided(double T_minus, double T_plus);

/// 2 C zeta(tau): bound on the Lebesgue measure of non-(C,tau)-Diophantine
/// numbers in [0,1]. Requires tau > 1.
double excluded_measure(const DiophantineParams& params);

/// Synthetic non-KL Diophantine expansion: a_j = floor(e^{j^s}) when
/// j = floor((1+delta)^n) for exactly one n, else a_j = 1 (colliding indices
/// also get 1). Values beyond bit_cap bits become symbolic with
/// log_value = j^s (the floor correction is below e^{-j^s}).
ContinuedFraction synth_non_kl_diophantine(double s, double delta,
                                           long long n_max,
                                           long long bit_cap = 1000000);

}  // namespace kl
