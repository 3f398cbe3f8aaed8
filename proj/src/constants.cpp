#include "kl/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kl/numeric.hpp"

namespace kl {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Cohen-Rodriguez Villegas-Zagier acceleration for sum (-1)^{k} (k+1)^{-s}.
// Relative error ~ (3+sqrt(8))^{-n}, far below double rounding at n = 40.
double eta_accelerated(double s) {
  const int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(k + 1.0, -s);
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

// Euler-Maclaurin evaluation of zeta, valid for s > 1 (and in fact any
// s > 0, s != 1).  B_{2j} corrections through j = 7.
double zeta_euler_maclaurin(double s) {
  const int N = 64;
  Kahan acc;
  for (int n = 1; n < N; ++n) acc.add(std::pow(static_cast<double>(n), -s));
  acc.add(0.5 * std::pow(static_cast<double>(N), -s));
  acc.add(std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0));
  static const double bern[] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                5.0 / 66, -691.0 / 2730, 7.0 / 6};
  double rising = 1.0;            // s (s+1) ... (s+2j-2)
  double fact = 1.0;              // (2j)!
  for (int j = 1; j <= 7; ++j) {
    rising *= (j == 1) ? s : (s + 2 * j - 3) * (s + 2 * j - 2);
    fact *= (2 * j - 1) * (2 * j);
    acc.add(bern[j - 1] / fact * rising *
            std::pow(static_cast<double>(N), -s - 2 * j + 1));
  }
  return acc.value();
}

// --- moment-series tail machinery ------------------------------------------
//
// The digit law gives weight  w_r = log2(1 + 1/(r(r+2))) = -log2(1-(r+1)^-2),
// so the k-th moment is  (1/ln2) sum_r g(r)^k sum_m (r+1)^{-2m}/m  with
// g = ln r (variant M) or ln(r+1) (variant Mprime).  Terms peak near
// r = e^{k/2}, far beyond any feasible direct cutoff for large k, so the
// region r > R is handled analytically:  sums of (ln s)^k s^{-q} have an
// incomplete-gamma integral and Euler-Maclaurin corrections.  Everything is
// accumulated scaled by 1/k!  (the scaled moment is O(1) for every k), and
// k! is restored at the end, which is the overflow guard for large k.

// ln-scaled Poisson CDF:  Gamma(k+1, z) / k!  =  e^{-z} sum_{j<=k} z^j / j!
double regularized_upper_gamma(int k, double z) {
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    sum += std::exp(j * std::log(z) - std::lgamma(j + 1.0) - z);
  }
  return sum;
}

// sum_{s=a+1}^inf (ln s)^k s^{-q}, divided by k!.
double scaled_log_power_tail(int k, int q, long a) {
  const double A = static_cast<double>(a) + 1.0;
  const double u = std::log(A);
  const double lgk = std::lgamma(k + 1.0);
  // integral part: Gamma(k+1, (q-1) ln A) / ((q-1)^{k+1} k!)
  double total = regularized_upper_gamma(k, (q - 1) * u) *
                 std::exp(-(k + 1.0) * std::log(static_cast<double>(q - 1)));
  // Euler-Maclaurin corrections at A for f(x) = (ln x)^k x^{-q}.  A
  // derivative level is a polynomial in ln x times x^{-(q+d)}; coeff[i]
  // multiplies (ln x)^i.
  std::vector<double> coeff(k + 1, 0.0);
  coeff[k] = 1.0;
  auto eval_scaled = [&](int d) {
    double v = 0.0;
    for (int i = 0; i <= k; ++i) {
      if (coeff[i] == 0.0) continue;
      v += coeff[i] * std::exp(i * std::log(u) - lgk - (q + d) * u);
    }
    return v;
  };
  auto differentiate = [&](int d) {
    // from level d to d+1; current power is q+d
    std::vector<double> next(k + 1, 0.0);
    for (int i = 0; i <= k; ++i) {
      if (coeff[i] == 0.0) continue;
      if (i > 0) next[i - 1] += coeff[i] * i;
      next[i] -= coeff[i] * (q + d);
    }
    coeff = std::move(next);
  };
  static const double em_weights[] = {0.5, -1.0 / 12, 1.0 / 720, -1.0 / 30240};
  static const int em_levels[] = {0, 1, 3, 5};
  int level = 0;
  for (int t = 0; t < 4; ++t) {
    while (level < em_levels[t]) {
      differentiate(level);
      ++level;
    }
    total += em_weights[t] * eval_scaled(level);
  }
  return total;
}

double moment_series_impl(Variant v, int k) {
  const long R = 100000;
  const double lgk = std::lgamma(k + 1.0);
  Kahan acc;  // scaled by 1/k!
  for (long r = 1; r <= R; ++r) {
    const double g = (v == Variant::Mprime) ? std::log(r + 1.0)
                                            : std::log(static_cast<double>(r));
    if (g == 0.0) continue;  // ln 1 contributes nothing
    const double w =
        std::log1p(1.0 / (static_cast<double>(r) * (r + 2)));
    acc.add(std::exp(k * std::log(g) - lgk) * w);
  }
  // tail r > R through the m-expansion of -ln(1 - (r+1)^{-2})
  for (int m = 1; m <= 5; ++m) {
    double am;
    if (v == Variant::Mprime) {
      // g = ln(r+1): exact shift s = r+1
      am = scaled_log_power_tail(k, 2 * m, R + 1);
    } else {
      // g = ln r: expand (r+1)^{-2m} = r^{-2m} (1+1/r)^{-2m} binomially
      am = 0.0;
      double binom = 1.0;
      for (int j = 0; j <= 5; ++j) {
        if (j > 0) binom *= -(2.0 * m + j - 1) / j;
        am += binom * scaled_log_power_tail(k, 2 * m + j, R);
      }
    }
    acc.add(am / m);
  }
  return acc.value() * std::exp(lgk) / kLn2;
}

}  // namespace

double special_function(SpecialKind kind, double s) {
  if (kind == SpecialKind::eta) {
    if (!(s > 0.0)) throw std::domain_error("eta requires s > 0");
    return eta_accelerated(s);
  }
  if (!(s > 1.0)) throw std::domain_error("zeta requires s > 1");
  return zeta_euler_maclaurin(s);
}

double kappa(Variant v, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("kappa requires tol > 0");
  // Telescoped forms of the classical series (c_r = ln(1 + 1/r)):
  //   kappa  ln2 = sum_{r>=1} c_r c_{r+1}
  //   kappa' ln2 = sum_{r>=1} c_r^2
  // with tail  sum_{r>R} = 1/(R+1) - [1/(2(R+1)^2) for the M case] + O(R^-3),
  // so a cutoff R ~ tol^{-1/3} meets any requested tolerance.
  const long R = std::clamp(
      static_cast<long>(std::ceil(std::cbrt(10.0 / tol))), 1000L, 50000000L);
  Kahan acc;
  double cr = std::log1p(1.0);
  for (long r = 1; r <= R; ++r) {
    const double cn = std::log1p(1.0 / (r + 1.0));
    acc.add(v == Variant::Mprime ? cr * cr : cr * cn);
    cr = cn;
  }
  double tail = 1.0 / (R + 1.0);
  if (v == Variant::M) tail -= 0.5 / ((R + 1.0) * (R + 1.0));
  acc.add(tail);
  return acc.value() / kLn2;
}

double r_bar(Variant v) {
  if (v == Variant::M) return std::sqrt(3.0 / (2.0 * kLn2));
  return std::sqrt(special_function(SpecialKind::eta, 3.0) / kLn2);
}

double lambda_bar(double lambda0) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 1.0 + std::sqrt(kLn2 - 0.5) +
         std::sqrt(pi2 * kLn2 / 12.0 - 0.5) / (1.0 - std::sqrt(lambda0));
}

double psi_coefficient(int n) {
  if (n < 1) throw std::domain_error("psi_coefficient requires n >= 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  if (n == 1) return 2.0 * kLn2 - 1.0;
  const double psi2 = pi2 * kLn2 / 6.0 - 1.0;
  return psi2 * std::pow(kLambda0, n - 2);
}

double moment_series(Variant v, int k, double tol) {
  if (k < 2) throw std::domain_error("moment_series requires k >= 2");
  if (!(tol > 0.0)) throw std::domain_error("moment_series requires tol > 0");
  // The scheme is accurate to ~1e-14 relative for every k; tol is honored
  // for any request down to that level.
  return moment_series_impl(v, k);
}

const ConstantsTable& constants() {
  static const ConstantsTable table = [] {
    ConstantsTable c{};
    c.tol = 1e-12;
    c.kappa = kappa(Variant::M, c.tol);
    c.kappa_prime = kappa(Variant::Mprime, c.tol);
    c.r_bar = r_bar(Variant::M);
    c.r_bar_prime = r_bar(Variant::Mprime);
    c.lambda0 = kLambda0;
    c.lambda_bar = lambda_bar(c.lambda0);
    c.psi1 = psi_coefficient(1);
    c.psi2 = psi_coefficient(2);
    return c;
  }();
  return table;
}

}  // namespace kl
