#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kl/constants.hpp"

using namespace kl;

namespace {
constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("special functions: closed forms and regression") {
  CHECK(special_function(SpecialKind::eta, 2.0) ==
        doctest::Approx(kPi * kPi / 12.0).epsilon(1e-14));
  CHECK(special_function(SpecialKind::zeta, 2.0) ==
        doctest::Approx(kPi * kPi / 6.0).epsilon(1e-14));
  // independently frozen reference values
  CHECK(special_function(SpecialKind::eta, 3.0) ==
        doctest::Approx(0.901542677369695714).epsilon(1e-13));
  CHECK(special_function(SpecialKind::zeta, 3.0) ==
        doctest::Approx(1.2020569031595943).epsilon(1e-13));
}

TEST_CASE("eta/zeta cross-identity (independent evaluation routes)") {
  for (double s : {2.0, 3.0, 4.0}) {
    const double eta = special_function(SpecialKind::eta, s);
    const double zeta = special_function(SpecialKind::zeta, s);
    CHECK(std::abs(eta - (1.0 - std::pow(2.0, 1.0 - s)) * zeta) < 1e-12);
  }
}

TEST_CASE("special function domain errors") {
  CHECK_THROWS_AS(special_function(SpecialKind::eta, 0.0), std::domain_error);
  CHECK_THROWS_AS(special_function(SpecialKind::eta, -1.0), std::domain_error);
  CHECK_THROWS_AS(special_function(SpecialKind::zeta, 1.0), std::domain_error);
}

TEST_CASE("kappa values") {
  const double k = kappa(Variant::M, 1e-10);
  const double kp = kappa(Variant::Mprime, 1e-10);
  CHECK(k == doctest::Approx(0.98784905683381079).epsilon(1e-11));
  CHECK(kp == doctest::Approx(1.40978598871243118).epsilon(1e-11));
  CHECK(k < kp);
  // truncation-error contract
  CHECK(std::abs(kappa(Variant::M, 1e-2) - k) < 1e-2);
  CHECK_THROWS_AS(kappa(Variant::M, 0.0), std::domain_error);
}

TEST_CASE("r_bar") {
  CHECK(r_bar(Variant::M) ==
        doctest::Approx(std::sqrt(3.0) / std::sqrt(2.0 * std::numbers::ln2))
            .epsilon(1e-15));
  CHECK(r_bar(Variant::M) == doctest::Approx(1.471).epsilon(1e-3));
  CHECK(r_bar(Variant::Mprime) == doctest::Approx(1.140).epsilon(1e-3));
  CHECK(r_bar(Variant::Mprime) ==
        doctest::Approx(1.14046093742443397).epsilon(1e-13));
}

TEST_CASE("lambda_bar") {
  CHECK(lambda_bar() == doctest::Approx(2.029).epsilon(1e-3));
  CHECK(lambda_bar() == doctest::Approx(2.02919486457078176).epsilon(1e-12));
  // degenerate lambda0 = 0 audit
  CHECK(lambda_bar(0.0) == doctest::Approx(1.704231624).epsilon(1e-8));
  CHECK(lambda_bar(0.5) > 1.7042);
}

TEST_CASE("psi coefficients") {
  CHECK(psi_coefficient(1) == doctest::Approx(0.386).epsilon(3e-3));
  CHECK(psi_coefficient(1) ==
        doctest::Approx(2.0 * std::numbers::ln2 - 1.0).epsilon(1e-15));
  CHECK(psi_coefficient(2) == doctest::Approx(0.140).epsilon(3e-3));
  CHECK(psi_coefficient(4) == doctest::Approx(0.0129262988).epsilon(1e-6));
  for (int n = 2; n < 12; ++n)
    CHECK(psi_coefficient(n + 1) < psi_coefficient(n));
  CHECK_THROWS_AS(psi_coefficient(0), std::domain_error);
}

TEST_CASE("moment series regression against frozen references") {
  // frozen via an exact zeta-derivative identity for the full sums
  struct Ref { int k; double m; double mp; };
  const Ref refs[] = {
      {2, 2.38527685616437865, 2.9225700811703478},
      {3, 7.82594669228471248, 8.7134216145405016},
      {5, 168.365482848383817, 173.24777685986423},
      {10, 5230236.06954599956, 5235266.5773764765},
      {30, 3.82678985076268048e32, 3.8267898543266377e32},
  };
  for (const auto& r : refs) {
    CHECK(close_rel(moment_series(Variant::M, r.k, 1e-10), r.m, 1e-11));
    CHECK(close_rel(moment_series(Variant::Mprime, r.k, 1e-10), r.mp, 1e-11));
  }
}

TEST_CASE("moment series: structure") {
  // r = 1 contributes nothing for variant M
  CHECK(moment_series(Variant::M, 2, 1e-10) <
        moment_series(Variant::Mprime, 2, 1e-10));
  // large-k overflow guard: finite via log-domain/scaled path up to k = 170
  const double m100 = moment_series(Variant::M, 100, 1e-10);
  CHECK(std::isfinite(m100));
  CHECK(m100 > 0.0);
  CHECK_THROWS_AS(moment_series(Variant::M, 1, 1e-10), std::domain_error);
}

TEST_CASE("moment inequality, variant M (Lemma-style audit)") {
  const double rb2 = r_bar(Variant::M) * r_bar(Variant::M);
  double fact = 1.0;
  for (int k = 2; k <= 30; ++k) {
    fact = std::tgamma(k + 1.0);
    CHECK(moment_series(Variant::M, k, 1e-10) <= rb2 * fact);
  }
}

TEST_CASE("constants table invariants") {
  const ConstantsTable& c = constants();
  CHECK(c.kappa > 0.987); CHECK(c.kappa < 0.989);
  CHECK(c.kappa_prime > 1.40); CHECK(c.kappa_prime < 1.42);
  CHECK(c.r_bar > 1.470); CHECK(c.r_bar < 1.472);
  CHECK(c.r_bar_prime > 1.139); CHECK(c.r_bar_prime < 1.141);
  CHECK(c.lambda_bar > 2.028); CHECK(c.lambda_bar < 2.030);
  CHECK(c.lambda0 > 0.303); CHECK(c.lambda0 < 0.305);
  CHECK(c.psi1 == doctest::Approx(2.0 * std::numbers::ln2 - 1.0));
  CHECK(c.psi2 ==
        doctest::Approx(kPi * kPi * std::numbers::ln2 / 6.0 - 1.0));
  CHECK(c.kappa_for(Variant::M) == c.kappa);
  CHECK(c.kappa_for(Variant::Mprime) == c.kappa_prime);
  CHECK(c.r_bar_for(Variant::Mprime) == c.r_bar_prime);
}
