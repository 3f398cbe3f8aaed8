#include "kl/sampler.hpp"

#include <cmath>
#include <mpfr.h>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kl/bounds.hpp"

namespace kl {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Counter-based substream: SplitMix64 seeded from (seed, trial, nonce).
// Trial results depend only on these inputs, never on thread scheduling.
struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
};

SplitMix substream(std::uint64_t seed, long long trial, std::uint64_t nonce) {
  std::uint64_t s = seed;
  s ^= 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
  s ^= 0xD1B54A32D192ED03ULL * (nonce + 1);
  return SplitMix{s};
}

Rational rational_from(mpfr_srcptr x) {
  BigInt m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.backend().data(), x);
  if (e >= 0) {
    BigInt v = m;
    v <<= static_cast<unsigned>(e);
    return Rational(v);
  }
  BigInt d = 1;
  d <<= static_cast<unsigned>(-e);
  return Rational(m, d);
}

// generic threaded trial loop; results land in trial order
template <typename F>
std::vector<std::optional<double>> run_trials(const SampleConfig& cfg, F&& f) {
  std::vector<std::optional<double>> out(cfg.trials);
  const int nt = std::max(1, cfg.threads);
  auto worker = [&](long long begin, long long end) {
    for (long long t = begin; t < end; ++t) out[t] = f(t);
  };
  if (nt == 1) {
    worker(0, cfg.trials);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (cfg.trials + nt - 1) / nt;
    for (int i = 0; i < nt; ++i) {
      const long long b = i * chunk;
      const long long e = std::min<long long>(cfg.trials, b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

SimulationResult reduce(const SampleConfig& cfg,
                        const std::vector<std::optional<double>>& vals,
                        std::optional<double> bound, bool bernoulli) {
  SimulationResult r;
  r.seed = cfg.seed;
  r.bound = bound;
  double sum = 0.0;
  long long m = 0;
  for (const auto& v : vals) {
    if (!v) continue;
    sum += *v;
    ++m;
  }
  r.trials_used = m;
  r.trials_short = cfg.trials - m;
  if (m * 2 < cfg.trials)
    throw std::runtime_error("sampler: more than half the trials were short");
  if (m == 0) return r;
  r.estimate = sum / m;
  if (bernoulli) {
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / m);
  } else if (m > 1) {
    double ss = 0.0;
    for (const auto& v : vals) {
      if (!v) continue;
      const double d = *v - r.estimate;
      ss += d * d;
    }
    r.std_error = std::sqrt(ss / (static_cast<double>(m) * (m - 1)));
  }
  r.ci95 = {r.estimate - 1.96 * r.std_error, r.estimate + 1.96 * r.std_error};
  return r;
}

double trial_statistic(const SampleConfig& cfg, long long trial, Variant v,
                       bool& ok) {
  const ContinuedFraction cf = sample_quotients(cfg, trial);
  if (static_cast<long long>(cf.size()) < cfg.n) {
    ok = false;
    return 0.0;
  }
  ok = true;
  double S = 0.0;
  for (long long i = 0; i < cfg.n; ++i) {
    S += (v == Variant::M) ? cf.log_values[i] : log_big(cf.quotients[i] + 1);
  }
  return S;
}

}  // namespace

long long default_bits(long long n) {
  // Certifying a_n needs the interval narrower than ~1/q_n^2 = e^{-2 l n}
  // with the Levy constant l = pi^2/(12 ln 2); safety factor 1.2.
  const double levy = 1.1865691104;
  return static_cast<long long>(std::ceil(1.2 * 2.0 * n * levy / kLn2)) + 64;
}

std::pair<Rational, Rational> sample_gauss(std::uint64_t seed, long long trial,
                                           long long bits) {
  if (bits < 8) throw std::domain_error("sample_gauss requires bits >= 8");
  for (std::uint64_t nonce = 0;; ++nonce) {
    SplitMix rng = substream(seed, trial, nonce);
    const long long words = (bits + 63) / 64;
    BigInt U = 0;
    for (long long w = 0; w < words; ++w) {
      U <<= 64;
      U += rng.next();
    }
    U >>= (words * 64 - bits);  // keep exactly `bits` random bits
    if (U == 0) continue;       // u = 0 boundary: resample
    const long long prec = bits + 4;
    mpfr_t u, xl, xh;
    mpfr_init2(u, prec);
    mpfr_init2(xl, prec);
    mpfr_init2(xh, prec);
    mpfr_set_z(u, U.backend().data(), MPFR_RNDN);       // exact
    mpfr_mul_2si(u, u, -bits, MPFR_RNDN);               // exact: u in (0,1)
    mpfr_exp2(xl, u, MPFR_RNDD);
    mpfr_sub_ui(xl, xl, 1, MPFR_RNDD);
    mpfr_exp2(xh, u, MPFR_RNDU);
    mpfr_sub_ui(xh, xh, 1, MPFR_RNDU);
    Rational lo = rational_from(xl);
    Rational hi = rational_from(xh);
    mpfr_clears(u, xl, xh, static_cast<mpfr_ptr>(nullptr));
    if (lo <= 0 || hi >= 1) continue;  // endpoint grazed a boundary
    if (lo == hi) {
      // widen a degenerate interval by one ulp on each side
      const Rational ulp(BigInt(1), BigInt(1) << static_cast<unsigned>(prec));
      lo -= ulp;
      hi += ulp;
      if (lo <= 0) continue;
    }
    return {std::move(lo), std::move(hi)};
  }
}

ContinuedFraction sample_quotients(const SampleConfig& cfg, long long trial) {
  const long long bits = cfg.bits > 0 ? cfg.bits : default_bits(cfg.n);
  const auto [lo, hi] = sample_gauss(cfg.seed, trial, bits);
  try {
    return expand_interval(lo, hi, cfg.n);
  } catch (const std::runtime_error&) {
    return ContinuedFraction{};  // ambiguous at the first step: short sample
  }
}

SimulationResult estimate_kappa(const SampleConfig& cfg, Variant v) {
  if (cfg.trials < 1 || cfg.n < 1) throw std::domain_error("invalid config");
  const auto vals = run_trials(cfg, [&](long long t) -> std::optional<double> {
    bool ok = false;
    const double S = trial_statistic(cfg, t, v, ok);
    if (!ok) return std::nullopt;
    return S / static_cast<double>(cfg.n);
  });
  return reduce(cfg, vals, constants().kappa_for(v), /*bernoulli=*/false);
}

SimulationResult estimate_tail(const SampleConfig& cfg, double T, Variant v,
                               bool upper) {
  if (cfg.trials < 1 || cfg.n < 1) throw std::domain_error("invalid config");
  const double kap = constants().kappa_for(v);
  const auto vals = run_trials(cfg, [&](long long t) -> std::optional<double> {
    bool ok = false;
    const double S = trial_statistic(cfg, t, v, ok);
    if (!ok) return std::nullopt;
    const double dev = S - kap * static_cast<double>(cfg.n);
    const bool event = upper ? (dev >= cfg.n * T) : (-dev >= cfg.n * T);
    return event ? 1.0 : 0.0;
  });
  const double b =
      std::exp(std::sqrt(static_cast<double>(cfg.n)) * xi(T, v).log_value);
  return reduce(cfg, vals, b, /*bernoulli=*/true);
}

}  // namespace kl
