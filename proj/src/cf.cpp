#include "kl/cf.hpp"

#include <cmath>
#include <map>
#include <mpfr.h>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kl {
namespace {

constexpr double kLn2 = std::numbers::ln2;

BigInt floor_div(const BigInt& n, const BigInt& d) {
  BigInt q;
  mpz_fdiv_q(q.backend().data(), n.backend().data(), d.backend().data());
  return q;
}

long long bit_length(const BigInt& x) {
  return static_cast<long long>(mpz_sizeinbase(x.backend().data(), 2));
}

// floor(e^{j^s}) as an exact integer, by directed rounding at increasing
// precision until both roundings agree on the floor.
BigInt floor_exp_pow(long long j, double s, long long start_bits) {
  for (long long prec = start_bits;; prec *= 2) {
    mpfr_t e, sv, lo, hi;
    mpfr_init2(e, prec);
    mpfr_init2(sv, 64);
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_d(sv, s, MPFR_RNDN);
    mpfr_set_si(e, j, MPFR_RNDN);
    mpfr_pow(e, e, sv, MPFR_RNDD);
    mpfr_exp(lo, e, MPFR_RNDD);
    mpfr_set_si(e, j, MPFR_RNDN);
    mpfr_pow(e, e, sv, MPFR_RNDU);
    mpfr_exp(hi, e, MPFR_RNDU);
    mpfr_floor(lo, lo);
    mpfr_floor(hi, hi);
    BigInt a, b;
    mpfr_get_z(a.backend().data(), lo, MPFR_RNDN);
    mpfr_get_z(b.backend().data(), hi, MPFR_RNDN);
    mpfr_clears(e, sv, lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (a == b) return a;
    if (prec > (1LL << 28)) throw std::runtime_error("floor_exp_pow: no agreement");
  }
}

}  // namespace

double log_big(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log_big requires a positive integer");
  long exp2 = 0;
  const double d = mpz_get_d_2exp(&exp2, x.backend().data());
  return std::log(d) + static_cast<double>(exp2) * kLn2;
}

ContinuedFraction expand_rational(const BigInt& p, const BigInt& q,
                                  long long max_terms) {
  if (p <= 0 || q <= 0 || p >= q)
    throw std::domain_error("expand_rational requires 0 < p/q < 1");
  BigInt n = q, d = p;
  const BigInt g = gcd(n, d);
  n /= g;
  d /= g;
  ContinuedFraction cf;
  {
    std::ostringstream os;
    os << "rational " << (p / g) << "/" << (q / g);
    cf.source = os.str();
  }
  while (d != 0) {
    if (max_terms >= 0 &&
        static_cast<long long>(cf.quotients.size()) >= max_terms)
      break;
    const BigInt a = floor_div(n, d);
    const BigInt r = n - a * d;
    cf.quotients.push_back(a);
    cf.log_values.push_back(log_big(a));
    cf.is_symbolic.push_back(false);
    n = d;
    d = r;
  }
  cf.exact = (d == 0);
  cf.certified = true;
  return cf;
}

ContinuedFraction expand_interval(const Rational& lo_in, const Rational& hi_in,
                                  long long max_terms) {
  if (!(lo_in < hi_in) || lo_in <= 0 || hi_in >= 1)
    throw std::domain_error("expand_interval requires 0 < lo < hi < 1");
  if (max_terms < 1) throw std::domain_error("max_terms must be >= 1");
  ContinuedFraction cf;
  cf.source = "interval";
  cf.certified = true;
  // Lockstep Euclid on the open interval (an/ad, cn/cd): a quotient is
  // emitted while floor(1/x) agrees across the interval. Endpoints are kept
  // as raw numerator/denominator pairs (no reduction needed; the numerators
  // shrink like Euclidean remainders).
  BigInt an = numerator(lo_in), ad = denominator(lo_in);
  BigInt cn = numerator(hi_in), cd = denominator(hi_in);
  while (static_cast<long long>(cf.quotients.size()) < max_terms) {
    if (an == 0) break;  // floor(1/x) unbounded above: ambiguous
    // x in (lo, hi): floor(1/x) ranges over [floor(1/hi), f_max]
    const BigInt f_min = floor_div(cd, cn);
    BigInt f_max = floor_div(ad, an);
    if (an * f_max == ad) f_max -= 1;  // 1/lo integral: open endpoint
    if (f_min != f_max) break;  // ambiguous: interval spans a quotient change
    cf.quotients.push_back(f_min);
    cf.log_values.push_back(log_big(f_min));
    cf.is_symbolic.push_back(false);
    // new interval for 1/x - a: (cd/cn - a, ad/an - a), endpoints swapped
    BigInt new_an = cd - f_min * cn;
    BigInt new_cn = ad - f_min * an;
    BigInt new_ad = std::move(cn), new_cd = std::move(an);
    an = std::move(new_an);
    ad = std::move(new_ad);
    cn = std::move(new_cn);
    cd = std::move(new_cd);
  }
  if (cf.quotients.empty())
    throw std::runtime_error("interval too wide to certify the first quotient");
  return cf;
}

CFStatistics statistics(const ContinuedFraction& cf, long long n_max,
                        const ConstantsTable& table, long long bit_cap) {
  if (n_max < 1 || n_max > static_cast<long long>(cf.size()))
    throw std::invalid_argument("statistics: insufficient quotients");
  CFStatistics st;
  st.n_max = n_max;
  st.bit_cap = bit_cap;
  st.log_a.reserve(n_max);
  st.log_M.reserve(n_max);
  st.log_M_prime.reserve(n_max);
  st.log_q.reserve(n_max);
  st.deviation.reserve(n_max);
  double S = 0.0, Sp = 0.0;
  BigInt q_prev2 = 1, q_prev1 = 0;  // q_0 = 1 and the implicit q_{-1} = 0
  BigInt p_prev2 = 0, p_prev1 = 1;  // p_0 = 0, p_{-1} = 1
  bool exact_q = true;
  for (long long i = 0; i < n_max; ++i) {
    const double la = cf.log_values[i];
    st.log_a.push_back(la);
    S += la;
    st.log_M.push_back(S);
    if (cf.is_symbolic[i]) {
      Sp += la + std::log1p(std::exp(-la));
      exact_q = false;
    } else {
      Sp += log_big(cf.quotients[i] + 1);
    }
    st.log_M_prime.push_back(Sp);
    st.deviation.push_back(std::abs(S / (i + 1) - table.kappa));
    if (exact_q) {
      BigInt qn = cf.quotients[i] * q_prev2 + q_prev1;  // prev2 holds q_{n-1}
      BigInt pn = cf.quotients[i] * p_prev2 + p_prev1;
      if (bit_length(qn) <= bit_cap) {
        st.log_q.push_back(log_big(qn));
        q_prev1 = q_prev2; q_prev2 = qn;
        p_prev1 = p_prev2; p_prev2 = pn;
        st.q.push_back(std::move(qn));
        st.p.push_back(std::move(pn));
        continue;
      }
      exact_q = false;  // capped: fall through to log-domain tracking
    }
    // ln q_n = ln a_n + ln q_{n-1} + ln(1 + q_{n-2}/(a_n q_{n-1}))
    const double lq1 = (i >= 1) ? st.log_q[i - 1] : 0.0;
    const double lq2 = (i >= 2) ? st.log_q[i - 2] : (i == 1 ? 0.0 : -1e308);
    st.log_q.push_back(la + lq1 + std::log1p(std::exp(lq2 - la - lq1)));
  }
  st.exact_count = static_cast<long long>(st.q.size());
  return st;
}

MembershipResult kl_membership(const CFStatistics& stats, double T, Variant v,
                               bool upper) {
  if (!(T > 0.0)) throw std::domain_error("kl_membership requires T > 0");
  const double kap = constants().kappa_for(v);
  const auto& S = (v == Variant::M) ? stats.log_M : stats.log_M_prime;
  MembershipResult res;
  res.per_n.reserve(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const bool ok = upper ? (S[i] <= (kap + T) * n) : (S[i] >= (kap - T) * n);
    res.per_n.push_back(ok);
    if (!ok && !res.first_violation)
      res.first_violation = static_cast<long long>(i + 1);
  }
  return res;
}

WitnessResult diophantine_witness(const CFStatistics& stats,
                                  const DiophantineParams& params,
                                  long long n_max) {
  if (!(params.C > 0.0) || !(params.tau >= 1.0))
    throw std::domain_error("diophantine_witness: need C > 0, tau >= 1");
  const double log_c_inv = -std::log(params.C);
  WitnessResult res{true, std::nullopt};
  const long long top = std::min(n_max, stats.n_max - 1);
  for (long long n = 1; n <= top; ++n) {
    const double lhs = stats.log_a[n];  // ln a_{n+1}
    const double rhs = log_c_inv + (params.tau - 1.0) * stats.log_q[n - 1];
    if (lhs > rhs + 1e-12) {  // slack for boundary cases like 2 <= 2
      res.holds = false;
      res.first_failure = n;
      break;
    }
  }
  return res;
}

double diophantine_convert(double C) {
  if (!(C > 0.0)) throw std::domain_error("diophantine_convert requires C > 0");
  return C / (1.0 + 2.0 * C);
}

double kl_to_diophantine_tau_upper(double T, double kappa) {
  if (T < 0.0) throw std::domain_error("rate must be nonnegative");
  const double log_phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  return 1.0 + (kappa + T) / log_phi;
}

double kl_to_diophantine_tau_two_sided(double T_minus, double T_plus) {
  if (T_minus < 0.0 || T_plus < 0.0)
    throw std::domain_error("rates must be nonnegative");
  const double log_phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  return 1.0 + (T_plus + T_minus) / log_phi;
}

double excluded_measure(const DiophantineParams& params) {
  if (!(params.tau > 1.0))
    throw std::domain_error("excluded_measure requires tau > 1");
  if (!(params.C > 0.0)) throw std::domain_error("excluded_measure: C > 0");
  return 2.0 * params.C * special_function(SpecialKind::zeta, params.tau);
}

ContinuedFraction synth_non_kl_diophantine(double s, double delta,
                                           long long n_max,
                                           long long bit_cap) {
  if (!(s > 1.0) || !(delta > 0.0) || n_max < 1)
    throw std::domain_error("synth: need s > 1, delta > 0, n_max >= 1");
  std::map<long long, int> d_count;
  for (long long n = 0;; ++n) {
    const double d = std::floor(std::pow(1.0 + delta, static_cast<double>(n)));
    if (d > static_cast<double>(n_max)) break;
    d_count[static_cast<long long>(d)] += 1;
  }
  ContinuedFraction cf;
  {
    std::ostringstream os;
    os << "synth(s=" << s << ",delta=" << delta << ")";
    cf.source = os.str();
  }
  for (long long j = 1; j <= n_max; ++j) {
    const auto it = d_count.find(j);
    if (it == d_count.end() || it->second > 1) {
      // not a d_n index, or a collision: a_j = 1
      cf.quotients.push_back(1);
      cf.log_values.push_back(0.0);
      cf.is_symbolic.push_back(false);
      continue;
    }
    const double js = std::pow(static_cast<double>(j), s);
    const long long bits = static_cast<long long>(js / kLn2) + 64;
    if (bits <= bit_cap) {
      BigInt a = floor_exp_pow(j, s, bits);
      cf.log_values.push_back(log_big(a));
      cf.quotients.push_back(std::move(a));
      cf.is_symbolic.push_back(false);
    } else {
      // ln floor(e^{j^s}) = j^s up to a correction below e^{-j^s + 1}
      cf.quotients.push_back(1);
      cf.log_values.push_back(js);
      cf.is_symbolic.push_back(true);
    }
  }
  return cf;
}

}  // namespace kl
