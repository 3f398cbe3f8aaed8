#include "kl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kl/numeric.hpp"

namespace kl {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// The two composite constants every bound is built from.
double c_quad(Variant v) {  // 128 rbar^2 Lbar
  const ConstantsTable& c = constants();
  const double rb = c.r_bar_for(v);
  return 128.0 * rb * rb * c.lambda_bar;
}
double c_lin(Variant v) {  // 16 rbar Lbar
  const ConstantsTable& c = constants();
  return 16.0 * c.r_bar_for(v) * c.lambda_bar;
}

long long ceil_isqrt(long long n) {
  long long s = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (s > 0 && (s - 1) * (s - 1) >= n) --s;
  while (s * s < n) ++s;
  return s;
}

// The Appendix-A composition for e^{-alpha} given as ln Xi, split into the
// pieces BoundReport exposes.
struct SumParts {
  long long K;
  double finite_sum;
  double log_num;
  double den;
};

SumParts composed_sum(double log_xi, long long N) {
  SumParts p{};
  p.K = ceil_isqrt(N);
  p.den = -std::expm1(log_xi);
  Kahan fs;
  for (long long n = N; n < p.K * p.K; ++n)
    fs.add(std::exp(log_xi * std::sqrt(static_cast<double>(n))));
  p.finite_sum = fs.value();
  const double xi_v = std::exp(log_xi);
  p.log_num = std::log(2.0 * p.K + 1.0 + 4.0 * xi_v / p.den) +
              static_cast<double>(p.K) * log_xi;
  return p;
}

}  // namespace

bool KLQuery::lower_side_trivial() const {
  if (variant != Variant::Mprime || side == Side::upper) return false;
  return T >= constants().kappa_prime - kLn2;
}

Xi xi(double T, Variant v) {
  if (!(T > 0.0)) throw std::domain_error("xi requires T > 0");
  const double base = c_quad(v) + std::cbrt(c_lin(v)) * T;
  Xi x;
  x.log_value = -T * T / (2.0 * std::pow(base, 1.5));
  x.value = std::exp(x.log_value);
  return x;
}

double cumulant_bound(int k, long long n, Variant v) {
  if (k < 2 || n < 1)
    throw std::domain_error("cumulant_bound requires k >= 2, n >= 1");
  return 2.0 * (std::lgamma(k + 1.0) - kLn2) +
         (k - 2) * std::log(c_lin(v)) + std::log(c_quad(v)) +
         std::log(static_cast<double>(n));
}

double tail_bound(long long n, double x, Variant v) {
  if (!(x > 0.0)) throw std::domain_error("tail_bound requires x > 0");
  if (n < 1) throw std::domain_error("tail_bound requires n >= 1");
  const double base = c_quad(v) * static_cast<double>(n) + std::cbrt(c_lin(v)) * x;
  return std::exp(-x * x / (2.0 * std::pow(base, 1.5)));
}

double exp_sqrt_sum_bound(double alpha, long long N) {
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
  if (N < 2) throw std::domain_error("N must be >= 2");
  const SumParts p = composed_sum(-alpha, N);
  return p.finite_sum + std::exp(p.log_num) / p.den;
}

SumOracle exp_sqrt_sum_oracle(double alpha, long long N, long long terms) {
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
  if (N < 2) throw std::domain_error("N must be >= 2");
  if (terms < 1) throw std::domain_error("terms must be >= 1");
  Kahan acc;
  for (long long n = N; n < N + terms; ++n)
    acc.add(std::exp(-alpha * std::sqrt(static_cast<double>(n))));
  // tail cap by integral comparison:
  //   sum_{n>=M} e^{-a sqrt n} <= e^{-a sqrt M} + int_M^inf e^{-a sqrt x} dx
  // and the integral is 2 e^{-a sqrt M} (sqrt M / a + 1/a^2).
  const double sM = std::sqrt(static_cast<double>(N + terms));
  const double cap =
      std::exp(-alpha * sM) * (1.0 + 2.0 * sM / alpha + 2.0 / (alpha * alpha));
  return {acc.value(), cap};
}

BoundReport kl_measure_lower_bound(const KLQuery& q) {
  if (!(q.T > 0.0) || q.N < 1) throw std::domain_error("invalid KLQuery");
  BoundReport r;
  r.inputs = q;
  r.lower_trivial = q.lower_side_trivial();
  const Xi x = xi(q.T, q.variant);
  r.xi = x.value;
  const SumParts p = composed_sum(x.log_value, q.N);
  r.K = p.K;
  r.finite_sum = p.finite_sum;
  r.log_num = p.log_num;
  r.den = p.den;
  double complement = p.finite_sum + std::exp(p.log_num) / p.den;
  if (q.side == Side::both) complement *= 2.0;  // union over the two failures
  const double raw = 1.0 - complement;
  r.vacuous = !(raw > 0.0);
  r.lower_bound = std::clamp(raw, 0.0, 1.0);
  return r;
}

long long min_n_for_estimate(double T, double est, Variant v, Side side) {
  if (!(est > 0.0 && est < 1.0)) throw std::domain_error("est must be in (0,1)");
  const Xi x = xi(T, v);  // validates T
  auto bound_at = [&](long long K) {
    KLQuery q{v, T, K * K, side};
    return kl_measure_lower_bound(q).lower_bound;
  };
  // below K* the complement terms are not yet monotone in K
  long long k_star = 1;
  if (x.value > 1.0 / 3.0) {
    const double den = -std::expm1(x.log_value);
    k_star = static_cast<long long>(
        std::ceil((3.0 * x.value - 1.0) / (2.0 * den)));
    k_star = std::max(k_star, 1LL);
  }
  const long long k_cap = 3000000000LL;  // keeps N = K^2 < 2^63
  long long lo = k_star, hi = k_star;
  if (bound_at(hi) < est) {
    while (bound_at(hi) < est) {
      lo = hi;
      if (hi > k_cap / 2)
        throw std::runtime_error("estimate unreachable within N <= 9e18");
      hi *= 2;
    }
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (bound_at(mid) >= est ? hi : lo) = mid;
    }
  }
  // walk down in case the bracket start already met the estimate
  while (hi > 1 && bound_at(hi - 1) >= est) --hi;
  return hi * hi;
}

double min_t_for_estimate(double est, long long N, Variant v, Side side) {
  if (!(est > 0.0 && est < 1.0)) throw std::domain_error("est must be in (0,1)");
  auto bound_at = [&](double T) {
    KLQuery q{v, T, N, side};
    return kl_measure_lower_bound(q).lower_bound;
  };
  double lo = 0.0, hi = 1.0;
  while (bound_at(hi) < est) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("estimate unreachable in T");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bound_at(mid) >= est ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace kl
