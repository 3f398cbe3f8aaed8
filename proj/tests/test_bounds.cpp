#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kl/bounds.hpp"

using namespace kl;

namespace {
bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("xi: reference values and domain") {
  CHECK(xi(2.0, Variant::M).value == doctest::Approx(0.9998528).epsilon(1e-6));
  // computed Xi'(2); deliberately compared against our frozen evaluation,
  // not the printed 0.9997597 (see README on the reporting of that value)
  CHECK(xi(2.0, Variant::Mprime).value ==
        doctest::Approx(0.99968725454508956).epsilon(1e-12));
  CHECK(xi(1e-5, Variant::M).value < 1.0);
  CHECK(xi(1e-5, Variant::M).value > 1.0 - 1e-12);
  CHECK_THROWS_AS(xi(0.0, Variant::M), std::domain_error);
  CHECK_THROWS_AS(xi(-1.0, Variant::Mprime), std::domain_error);
}

TEST_CASE("xi strictly decreasing in T, both variants") {
  for (Variant v : {Variant::M, Variant::Mprime}) {
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
      const double cur = xi(0.1 * i, v).value;
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("cumulant bound: reference values and monotonicity") {
  const double base = cumulant_bound(2, 1, Variant::M);
  CHECK(base == doctest::Approx(6.3316473885512076).epsilon(1e-12));
  CHECK(cumulant_bound(2, 10, Variant::M) ==
        doctest::Approx(base + std::log(10.0)).epsilon(1e-12));
  CHECK(cumulant_bound(3, 1, Variant::M) ==
        doctest::Approx(base + std::log(9.0) +
                        std::log(47.761354657206484)).epsilon(1e-12));
  for (int k = 2; k < 12; ++k)
    CHECK(cumulant_bound(k + 1, 7, Variant::M) > cumulant_bound(k, 7, Variant::M));
  for (long long n = 1; n < 12; ++n)
    CHECK(cumulant_bound(5, n + 1, Variant::Mprime) >
          cumulant_bound(5, n, Variant::Mprime));
}

TEST_CASE("tail bound reference and identity with xi") {
  CHECK(tail_bound(100, 100.0, Variant::M) ==
        doctest::Approx(0.99962846603484346).epsilon(1e-12));
  CHECK(tail_bound(1, 1e9, Variant::M) < 1e-300);
  CHECK_THROWS_AS(tail_bound(10, 0.0, Variant::M), std::domain_error);
  // tail_bound(n, nT, v) = xi(T, v)^sqrt(n) on a grid
  const long long ns[] = {1, 4, 9, 25, 100, 441, 10000, 123456, 999999, 4000000};
  const double Ts[] = {0.1, 0.5, 1.0, 2.0, 5.0};
  for (long long n : ns) {
    for (double T : Ts) {
      for (Variant v : {Variant::M, Variant::Mprime}) {
        const Xi x = xi(T, v);
        const double lhs = tail_bound(n, n * T, v);
        const double rhs =
            std::exp(std::sqrt(static_cast<double>(n)) * x.log_value);
        CHECK(close_rel(lhs, rhs, 1e-12));
      }
    }
  }
}

TEST_CASE("appendix sum bound: closed-form references") {
  // alpha = 1, N = 4 (K = 2, empty finite sum):
  //   e^{-2}/(1-e^{-1}) (5 + 4 e^{-1}/(1-e^{-1}))
  const double e1 = std::exp(-1.0);
  const double ref4 = std::exp(-2.0) / (1 - e1) * (5.0 + 4.0 * e1 / (1 - e1));
  CHECK(exp_sqrt_sum_bound(1.0, 4) == doctest::Approx(ref4).epsilon(1e-13));
  CHECK(ref4 == doctest::Approx(1.5688848150517477).epsilon(1e-12));
  // N = 5 switches to K = 3 with finite sum over n = 5..8
  double fs = 0.0;
  for (int n = 5; n <= 8; ++n) fs += std::exp(-std::sqrt(double(n)));
  const double ref5 =
      fs + std::exp(-3.0) / (1 - e1) * (7.0 + 4.0 * e1 / (1 - e1));
  CHECK(exp_sqrt_sum_bound(1.0, 5) == doctest::Approx(ref5).epsilon(1e-13));
  CHECK(ref5 == doctest::Approx(1.0579577624956910).epsilon(1e-12));
}

TEST_CASE("appendix sum oracle") {
  const SumOracle six = exp_sqrt_sum_oracle(1.0, 4, 6);
  CHECK(six.partial == doctest::Approx(0.50839568015402625).epsilon(1e-13));
  const SumOracle big = exp_sqrt_sum_oracle(10.0, 4, 100);
  CHECK(big.partial == doctest::Approx(std::exp(-20.0)).epsilon(1e-2));
  CHECK(big.tail_cap < 1e-30);
  CHECK_THROWS_AS(exp_sqrt_sum_oracle(1.0, 4, 0), std::domain_error);
}

TEST_CASE("sum bound dominates the oracle on the grid") {
  for (double alpha : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (long long N : {2LL, 4LL, 5LL, 9LL, 10LL, 100LL, 101LL}) {
      const double b = exp_sqrt_sum_bound(alpha, N);
      const SumOracle o = exp_sqrt_sum_oracle(alpha, N, 1000000);
      CHECK(b >= o.partial);
      CHECK(b - (o.partial + o.tail_cap) >= -1e-12);
    }
  }
}

TEST_CASE("measure lower bound: composition and clamping") {
  KLQuery vac{Variant::M, 2.0, 4, Side::upper};
  const BoundReport rv = kl_measure_lower_bound(vac);
  CHECK(rv.lower_bound == 0.0);
  CHECK(rv.vacuous);
  CHECK(rv.K == 2);
  CHECK(rv.finite_sum == 0.0);

  // 146200 is just above the K threshold for est = 1% at T = 2 (146090 with
  // full-precision constants; the threshold is sensitive in its last digits)
  KLQuery q{Variant::M, 2.0, 146200LL * 146200LL, Side::upper};
  const BoundReport r = kl_measure_lower_bound(q);
  CHECK(r.lower_bound >= 0.01);
  CHECK(r.lower_bound <= 1.0);
  CHECK(!r.vacuous);
  // report composition identity
  CHECK(r.lower_bound ==
        doctest::Approx(std::max(
            0.0, 1.0 - (r.finite_sum + std::exp(r.log_num) / r.den))));

  // side = both doubles the complement before clamping
  const long long n75 = min_n_for_estimate(2.0, 0.75, Variant::M, Side::upper);
  KLQuery qs{Variant::M, 2.0, n75, Side::upper};
  KLQuery qb{Variant::M, 2.0, n75, Side::both};
  const BoundReport rs = kl_measure_lower_bound(qs);
  const BoundReport rb = kl_measure_lower_bound(qb);
  CHECK(1.0 - rb.lower_bound ==
        doctest::Approx(2.0 * (1.0 - rs.lower_bound)).epsilon(1e-12));
}

TEST_CASE("lower-side triviality flag for Mprime") {
  KLQuery q{Variant::Mprime, 2.0, 100, Side::lower};
  CHECK(q.lower_side_trivial());
  q.T = 0.5;
  CHECK(!q.lower_side_trivial());
  q.side = Side::upper;
  q.T = 2.0;
  CHECK(!q.lower_side_trivial());
  KLQuery m{Variant::M, 2.0, 100, Side::lower};
  CHECK(!m.lower_side_trivial());
}

TEST_CASE("bound nondecreasing in K above K*") {
  const Xi x = xi(1.0, Variant::M);
  const double den = -std::expm1(x.log_value);
  const long long k_star = static_cast<long long>(
      std::ceil((3.0 * x.value - 1.0) / (2.0 * den)));
  double prev = -1.0;
  for (long long K = k_star; K < k_star + 2000; K += 97) {
    KLQuery q{Variant::M, 1.0, K * K, Side::upper};
    const double b = kl_measure_lower_bound(q).lower_bound;
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("min_n_for_estimate: table anchors and minimality") {
  struct Cell { double T; double est; Variant v; double ref; };
  const Cell cells[] = {
      {2.0, 0.01, Variant::M, 2.074e10},
      {2.0, 0.99, Variant::Mprime, 6.084e9},
      {0.1, 0.999, Variant::Mprime, 2.394e15},
  };
  for (const auto& c : cells) {
    const long long N = min_n_for_estimate(c.T, c.est, c.v, Side::upper);
    CHECK(close_rel(static_cast<double>(N), c.ref, 0.05));
    const long long K = std::llround(std::sqrt(static_cast<double>(N)));
    CHECK(K * K == N);
    KLQuery at{c.v, c.T, N, Side::upper};
    CHECK(kl_measure_lower_bound(at).lower_bound >= c.est);
    KLQuery below{c.v, c.T, (K - 1) * (K - 1), Side::upper};
    CHECK(kl_measure_lower_bound(below).lower_bound < c.est);
  }
  CHECK_THROWS_AS(min_n_for_estimate(1.0, 1.5, Variant::M, Side::upper),
                  std::domain_error);
}

TEST_CASE("min_t_for_estimate: pi-report anchor") {
  const double t = min_t_for_estimate(0.999, 438000001LL, Variant::M, Side::upper);
  CHECK(t == doctest::Approx(5.7263).epsilon(1e-3));
  // inverse consistency
  KLQuery q{Variant::M, t, 438000001LL, Side::upper};
  CHECK(kl_measure_lower_bound(q).lower_bound >= 0.999);
  q.T = t * 0.999;
  CHECK(kl_measure_lower_bound(q).lower_bound < 0.999);
}
