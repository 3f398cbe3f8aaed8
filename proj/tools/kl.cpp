// kl: command-line surface for the Khintchine-Levy bounds toolkit.
// Exit codes: 0 success, 2 validation error, 3 assertion failure in an
// audited run.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "kl/bounds.hpp"
#include "kl/cf.hpp"
#include "kl/constants.hpp"
#include "kl/pi_digits.hpp"
#include "kl/reference_tables.hpp"
#include "kl/sampler.hpp"

using nlohmann::json;
using namespace kl;

namespace {

constexpr const char* kToolkitVersion = "1.0.0";

struct AuditFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string timestamp_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string constants_fingerprint() {
  const ConstantsTable& c = constants();
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double d) {
    std::uint64_t b;
    std::memcpy(&b, &d, sizeof b);
    h = (h ^ b) * 1099511628211ULL;
  };
  mix(c.kappa); mix(c.kappa_prime); mix(c.r_bar); mix(c.r_bar_prime);
  mix(c.lambda_bar); mix(c.psi1); mix(c.psi2); mix(c.lambda0);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json report(const std::string& cmd, json inputs, json outputs) {
  return json{{"command", cmd},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)},
              {"versions",
               {{"toolkit", kToolkitVersion},
                {"constants", constants_fingerprint()}}},
              {"timestamp", timestamp_utc()}};
}

void emit(const json& r) { std::cout << r.dump(2) << std::endl; }

Variant parse_variant(const std::string& s) {
  if (s == "M") return Variant::M;
  if (s == "Mprime") return Variant::Mprime;
  throw CLI::ValidationError("--variant must be M or Mprime");
}

Side parse_side(const std::string& s) {
  if (s == "upper") return Side::upper;
  if (s == "lower") return Side::lower;
  if (s == "both") return Side::both;
  throw CLI::ValidationError("--side must be upper, lower or both");
}

// "p/q" -> (p, q)
std::pair<BigInt, BigInt> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos)
    throw std::domain_error("expected p/q, got: " + s);
  return {BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1))};
}

// decimal string like "0.1415" -> exact rational
Rational parse_decimal(const std::string& s) {
  const auto dot = s.find('.');
  std::string digits = s;
  int frac_len = 0;
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    frac_len = static_cast<int>(s.size() - dot - 1);
  }
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::domain_error("malformed decimal: " + s);
  // strip leading zeros (a bare "0" prefix would read as octal)
  const auto nz = digits.find_first_not_of('0');
  digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
  BigInt den = 1;
  for (int i = 0; i < frac_len; ++i) den *= 10;
  return Rational(BigInt(digits), den);
}

json xi_json(const Xi& x) {
  return json{{"value", x.value}, {"log_value", x.log_value}};
}

json bound_json(const BoundReport& r) {
  return json{{"xi", r.xi},
              {"K", r.K},
              {"log_num", r.log_num},
              {"den", r.den},
              {"finite_sum", r.finite_sum},
              {"lower_bound", r.lower_bound},
              {"vacuous", r.vacuous},
              {"lower_trivial", r.lower_trivial}};
}

json sim_json(const SimulationResult& r) {
  json j{{"estimate", r.estimate},
         {"std_error", r.std_error},
         {"ci95", {r.ci95.first, r.ci95.second}},
         {"trials_used", r.trials_used},
         {"trials_short", r.trials_short},
         {"seed", r.seed}};
  if (r.bound) j["bound"] = *r.bound;
  return j;
}

// shared expansion-source flags for expand / kl-check / diophantine
struct SourceFlags {
  std::string rational;
  std::string lo, hi;
  std::string digits_file;
  long long max_terms = 1000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rational", rational, "expand p/q, e.g. 16/113");
    cmd->add_option("--lo", lo, "interval lower endpoint (decimal in (0,1))");
    cmd->add_option("--hi", hi, "interval upper endpoint (decimal in (0,1))");
    cmd->add_option("--digits-file", digits_file,
                    "expand pi - 3 from a digits file");
    cmd->add_option("--max-terms", max_terms, "expansion length cap");
  }

  ContinuedFraction expand() const {
    if (!rational.empty()) {
      const auto [p, q] = parse_fraction(rational);
      return expand_rational(p, q, max_terms);
    }
    if (!lo.empty() || !hi.empty()) {
      if (lo.empty() || hi.empty())
        throw std::domain_error("--lo and --hi must be given together");
      return expand_interval(parse_decimal(lo), parse_decimal(hi), max_terms);
    }
    if (!digits_file.empty()) {
      const int want = static_cast<int>(max_terms * 1.05) + 60;
      const std::string d = pi_digits_from_file(digits_file, want);
      BigInt frac = 0, scale = 1;
      for (std::size_t i = 1; i < d.size(); ++i) {
        frac = frac * 10 + (d[i] - '0');
        scale *= 10;
      }
      return expand_interval(Rational(frac, scale),
                             Rational(frac + 1, scale), max_terms);
    }
    throw std::domain_error("no input: use --rational, --lo/--hi or --digits-file");
  }
};

json cf_json(const ContinuedFraction& cf, std::size_t cap = 1000) {
  json arr = json::array();
  for (std::size_t i = 0; i < cf.size() && i < cap; ++i) {
    if (cf.is_symbolic[i]) {
      arr.push_back(json{{"log_value", cf.log_values[i]}});
    } else if (cf.quotients[i] < BigInt(1) << 62) {
      arr.push_back(cf.quotients[i].convert_to<long long>());
    } else {
      arr.push_back(cf.quotients[i].str());
    }
  }
  return json{{"quotients", arr},
              {"length", cf.size()},
              {"exact", cf.exact},
              {"certified", cf.certified},
              {"source", cf.source}};
}

// --- command bodies ---------------------------------------------------------

int cmd_constants() {
  const ConstantsTable& c = constants();
  json audit = json::array();
  bool all_ok = true;
  for (Variant v : {Variant::M, Variant::Mprime}) {
    const double rb2 = c.r_bar_for(v) * c.r_bar_for(v);
    double fact = 1.0;
    for (int k = 2; k <= 30; ++k) {
      fact = std::tgamma(k + 1.0);
      const double m = moment_series(v, k, 1e-10);
      const double cap = rb2 * fact;
      const bool ok = m <= cap;
      all_ok = all_ok && ok;
      audit.push_back(json{{"k", k},
                           {"variant", v == Variant::M ? "M" : "Mprime"},
                           {"moment", m},
                           {"bound", cap},
                           {"ok", ok}});
    }
  }
  emit(report("constants", json::object(),
              json{{"table",
                    {{"kappa", c.kappa},
                     {"kappa_prime", c.kappa_prime},
                     {"r_bar", c.r_bar},
                     {"r_bar_prime", c.r_bar_prime},
                     {"lambda_bar", c.lambda_bar},
                     {"psi1", c.psi1},
                     {"psi2", c.psi2},
                     {"lambda0", c.lambda0},
                     {"tol", c.tol}}},
                   {"moment_audit", audit},
                   {"moment_audit_ok", all_ok}}));
  if (!all_ok)
    throw AuditFailure("moment-inequality audit failed for some (variant, k)");
  return 0;
}

int cmd_table(int which, bool tolerance_report, const std::string& out) {
  const Variant v = (which == 1) ? Variant::Mprime : Variant::M;
  const auto& printed = (which == 1) ? kTable1 : kTable2;
  long long cells[5][4];
  std::vector<std::future<long long>> futs;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j)
      futs.push_back(std::async(std::launch::async, [=] {
        return min_n_for_estimate(kTableT[j], kTableEst[i], v, Side::upper);
      }));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) cells[i][j] = futs[i * 4 + j].get();

  if (out == "csv") {
    std::printf("est,T=2,T=1,T=0.5,T=0.1\n");
    for (int i = 0; i < 5; ++i) {
      std::printf("%g%%", kTableEst[i] * 100.0);
      for (int j = 0; j < 4; ++j)
        std::printf(",%.3e", static_cast<double>(cells[i][j]));
      std::printf("\n");
    }
  }
  json rows = json::array();
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      json cell{{"est", kTableEst[i]},
                {"T", kTableT[j]},
                {"N", cells[i][j]}};
      if (tolerance_report) {
        const double dev =
            std::abs(static_cast<double>(cells[i][j]) - printed[i][j]) /
            printed[i][j];
        cell["printed"] = printed[i][j];
        cell["relative_deviation"] = dev;
        worst = std::max(worst, dev);
      }
      rows.push_back(std::move(cell));
    }
  }
  json outputs{{"cells", rows}};
  if (tolerance_report) outputs["worst_relative_deviation"] = worst;
  if (which == 1) {
    // the printed Xi'(2) is reported next to the computed value, no pass/fail
    const Xi x = xi(2.0, Variant::Mprime);
    outputs["xi_prime_2_computed"] = x.value;
    outputs["xi_prime_2_printed"] = kPrintedXiPrime2;
    outputs["xi_prime_2_difference"] = x.value - kPrintedXiPrime2;
  }
  if (out != "csv")
    emit(report("table",
                json{{"which", which}, {"tolerance_report", tolerance_report}},
                outputs));
  if (tolerance_report && worst > 0.05)
    throw AuditFailure("table deviates from the printed values by > 5%");
  return 0;
}

int cmd_pi_report(long long n_max, const std::string& digits_file) {
  const long long want = static_cast<long long>(n_max * 1.05) + 60;
  std::string digits;
  if (!digits_file.empty()) {
    digits = pi_digits_from_file(digits_file, static_cast<int>(want));
  } else if (want <= kPiBuiltinLimit) {
    digits = pi_digits_builtin(static_cast<int>(want));
  } else {
    throw std::domain_error(
        "insufficient digits: builtin covers ~11000 quotients; pass "
        "--digits-file for more");
  }
  BigInt frac = 0, scale = 1;
  for (std::size_t i = 1; i < digits.size(); ++i) {
    frac = frac * 10 + (digits[i] - '0');
    scale *= 10;
  }
  const ContinuedFraction cf =
      expand_interval(Rational(frac, scale), Rational(frac + 1, scale), n_max);
  if (static_cast<long long>(cf.size()) < n_max)
    throw std::domain_error("insufficient digits to certify n_max quotients");
  const ConstantsTable& tab = constants();
  const CFStatistics st = statistics(cf, n_max, tab);

  json prefix = json::array();
  for (std::size_t i = 0; i < 10 && i < cf.size(); ++i)
    prefix.push_back(cf.quotients[i].convert_to<long long>());

  double w4 = (n_max >= 4) ? st.deviation[3] : -1.0;
  double w_max = 0.0;
  long long w_argmax = 0;
  for (long long n = 15; n <= n_max; ++n) {
    if (st.deviation[n - 1] > w_max) {
      w_max = st.deviation[n - 1];
      w_argmax = n;
    }
  }
  bool m_below_14n = true;
  long long m_first_fail = 0;
  const double ln14 = std::log(14.0);
  for (long long n = 1; n <= n_max; ++n) {
    if (!(st.log_M[n - 1] < n * ln14)) {
      m_below_14n = false;
      m_first_fail = n;
      break;
    }
  }
  const double base = std::exp(tab.kappa + 5.62);
  const double min_t = min_t_for_estimate(0.999, 438000001LL, Variant::M,
                                          Side::upper);
  const double t_dev = std::abs(min_t - 5.62) / 5.62;

  emit(report(
      "pi-report",
      json{{"n_max", n_max},
           {"digits_source", digits_file.empty() ? "builtin" : digits_file}},
      json{{"quotients_prefix", prefix},
           {"W4", w4},
           {"W_max_from_15", w_max},
           {"W_argmax", w_argmax},
           {"W_max_below_0.1", w_max < 0.1},
           {"M_n_below_14_pow_n", m_below_14n},
           {"M_n_first_failure", m_first_fail},
           {"exp_kappa_plus_5.62", base},
           {"exp_kappa_plus_5.62_below_743", base < 743.0},
           {"min_T_for_99.9_at_438000001", min_t},
           {"min_T_relative_deviation_from_5.62", t_dev}}));
  if (!m_below_14n) throw AuditFailure("M_n < 14^n failed");
  if (!(base < 743.0)) throw AuditFailure("e^{kappa+5.62} < 743 failed");
  if (t_dev > 0.05) throw AuditFailure("min T deviates from 5.62 by > 5%");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khintchine-Levy measure bounds toolkit"};
  app.require_subcommand(1);

  // constants
  auto* c_constants = app.add_subcommand(
      "constants", "dump the constants table and the moment audit");

  // xi
  auto* c_xi = app.add_subcommand("xi", "per-index tail factor Xi(T)");
  double xi_T = 1.0;
  std::string xi_variant = "M";
  c_xi->add_option("--T", xi_T)->required();
  c_xi->add_option("--variant", xi_variant);

  // bound
  auto* c_bound = app.add_subcommand("bound", "measure lower bound report");
  double b_T = 1.0;
  long long b_N = 1;
  std::string b_variant = "M", b_side = "upper";
  c_bound->add_option("--T", b_T)->required();
  c_bound->add_option("--N", b_N)->required();
  c_bound->add_option("--variant", b_variant);
  c_bound->add_option("--side", b_side);

  // min-n
  auto* c_minn = app.add_subcommand("min-n", "minimal N = K^2 for an estimate");
  double m_T = 1.0, m_est = 0.5;
  std::string m_variant = "M", m_side = "upper";
  c_minn->add_option("--T", m_T)->required();
  c_minn->add_option("--est", m_est)->required();
  c_minn->add_option("--variant", m_variant);
  c_minn->add_option("--side", m_side);

  // table
  auto* c_table = app.add_subcommand("table", "reproduce a minimal-N table");
  int t_which = 2;
  bool t_tol = false;
  std::string t_out = "json";
  c_table->add_option("--which", t_which)->check(CLI::IsMember({1, 2}));
  c_table->add_flag("--tolerance-report", t_tol);
  c_table->add_option("--out", t_out)->check(CLI::IsMember({"json", "csv"}));

  // expand
  auto* c_expand = app.add_subcommand("expand", "continued-fraction expansion");
  SourceFlags e_src;
  e_src.attach(c_expand);

  // kl-check
  auto* c_check = app.add_subcommand("kl-check", "KL membership per index");
  SourceFlags k_src;
  k_src.attach(c_check);
  double k_T = 1.0;
  std::string k_variant = "M", k_side = "upper";
  long long k_nmax = 0;
  c_check->add_option("--T", k_T)->required();
  c_check->add_option("--variant", k_variant);
  c_check->add_option("--side", k_side);
  c_check->add_option("--n-max", k_nmax);

  // diophantine
  auto* c_dio = app.add_subcommand("diophantine", "Diophantine witness check");
  SourceFlags d_src;
  d_src.attach(c_dio);
  double d_C = 1.0, d_tau = 1.0;
  long long d_nmax = 0;
  c_dio->add_option("--C", d_C)->required();
  c_dio->add_option("--tau", d_tau)->required();
  c_dio->add_option("--n-max", d_nmax);

  // synth
  auto* c_synth =
      app.add_subcommand("synth", "synthetic non-KL Diophantine expansion");
  double s_s = 1.5, s_delta = 1.0, s_T = 2.0;
  long long s_nmax = 64, s_cap = 1000000;
  c_synth->add_option("--s", s_s);
  c_synth->add_option("--delta", s_delta);
  c_synth->add_option("--n-max", s_nmax);
  c_synth->add_option("--bit-cap", s_cap);
  c_synth->add_option("--T", s_T);

  // sum-lemma
  auto* c_sum = app.add_subcommand("sum-lemma", "Appendix sum bound vs oracle");
  double a_alpha = 1.0;
  long long a_N = 4, a_terms = 1000000;
  c_sum->add_option("--alpha", a_alpha)->required();
  c_sum->add_option("--N", a_N)->required();
  c_sum->add_option("--terms", a_terms);

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo validation");
  std::string sim_mode = "kappa", sim_variant = "M", sim_side = "upper";
  SampleConfig sim_cfg;
  double sim_T = 1.0;
  c_sim->add_option("--mode", sim_mode)->check(CLI::IsMember({"kappa", "tail"}));
  c_sim->add_option("--variant", sim_variant);
  c_sim->add_option("--side", sim_side);
  c_sim->add_option("--T", sim_T);
  c_sim->add_option("--trials", sim_cfg.trials);
  c_sim->add_option("--n", sim_cfg.n);
  c_sim->add_option("--seed", sim_cfg.seed);
  c_sim->add_option("--bits", sim_cfg.bits);
  c_sim->add_option("--threads", sim_cfg.threads);

  // pi-report
  auto* c_pi = app.add_subcommand("pi-report", "pi - 3 digit analysis");
  long long p_nmax = 10000;
  std::string p_file;
  c_pi->add_option("--n-max", p_nmax);
  c_pi->add_option("--digits-file", p_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_constants) return cmd_constants();
    if (*c_xi) {
      const Xi x = xi(xi_T, parse_variant(xi_variant));
      emit(report("xi", json{{"T", xi_T}, {"variant", xi_variant}},
                  xi_json(x)));
      return 0;
    }
    if (*c_bound) {
      KLQuery q{parse_variant(b_variant), b_T, b_N, parse_side(b_side)};
      emit(report("bound",
                  json{{"T", b_T},
                       {"N", b_N},
                       {"variant", b_variant},
                       {"side", b_side}},
                  bound_json(kl_measure_lower_bound(q))));
      return 0;
    }
    if (*c_minn) {
      const Variant v = parse_variant(m_variant);
      const Side side = parse_side(m_side);
      const long long N = min_n_for_estimate(m_T, m_est, v, side);
      KLQuery q{v, m_T, N, side};
      emit(report("min-n",
                  json{{"T", m_T},
                       {"est", m_est},
                       {"variant", m_variant},
                       {"side", m_side}},
                  json{{"N", N},
                       {"K", static_cast<long long>(std::llround(
                                 std::sqrt(static_cast<double>(N))))},
                       {"bound_at_N", kl_measure_lower_bound(q).lower_bound}}));
      return 0;
    }
    if (*c_table) return cmd_table(t_which, t_tol, t_out);
    if (*c_expand) {
      emit(report("expand", json{{"max_terms", e_src.max_terms}},
                  cf_json(e_src.expand())));
      return 0;
    }
    if (*c_check) {
      const ContinuedFraction cf = k_src.expand();
      const long long n = k_nmax > 0
                              ? std::min<long long>(k_nmax, cf.size())
                              : static_cast<long long>(cf.size());
      const CFStatistics st = statistics(cf, n, constants());
      const Side side = parse_side(k_side);
      json out;
      for (bool upper : {true, false}) {
        if ((upper && side == Side::lower) || (!upper && side == Side::upper))
          continue;
        const MembershipResult r =
            kl_membership(st, k_T, parse_variant(k_variant), upper);
        json jr{{"all_hold", !r.first_violation.has_value()}};
        if (r.first_violation) jr["first_violation"] = *r.first_violation;
        out[upper ? "upper" : "lower"] = std::move(jr);
      }
      emit(report("kl-check",
                  json{{"T", k_T},
                       {"variant", k_variant},
                       {"side", k_side},
                       {"n_max", n}},
                  out));
      return 0;
    }
    if (*c_dio) {
      const ContinuedFraction cf = d_src.expand();
      const long long n = d_nmax > 0
                              ? std::min<long long>(d_nmax, cf.size())
                              : static_cast<long long>(cf.size());
      const CFStatistics st = statistics(cf, n, constants());
      const DiophantineParams params{d_C, d_tau};
      const WitnessResult w = diophantine_witness(st, params, n);
      json out{{"holds", w.holds},
               {"converse_constant", diophantine_convert(d_C)}};
      if (w.first_failure) out["first_failure"] = *w.first_failure;
      if (d_tau > 1.0) out["excluded_measure"] = excluded_measure(params);
      emit(report("diophantine",
                  json{{"C", d_C}, {"tau", d_tau}, {"n_max", n}}, out));
      return 0;
    }
    if (*c_synth) {
      const ContinuedFraction cf =
          synth_non_kl_diophantine(s_s, s_delta, s_nmax, s_cap);
      const CFStatistics st = statistics(cf, s_nmax, constants());
      const MembershipResult m = kl_membership(st, s_T, Variant::M, true);
      json out = cf_json(cf, 50);
      out["upper_kl_holds"] = !m.first_violation.has_value();
      if (m.first_violation) out["upper_kl_first_violation"] = *m.first_violation;
      emit(report("synth",
                  json{{"s", s_s},
                       {"delta", s_delta},
                       {"n_max", s_nmax},
                       {"bit_cap", s_cap},
                       {"T", s_T}},
                  out));
      return 0;
    }
    if (*c_sum) {
      const double bound = exp_sqrt_sum_bound(a_alpha, a_N);
      const SumOracle o = exp_sqrt_sum_oracle(a_alpha, a_N, a_terms);
      const bool dominated = bound >= o.partial &&
                             bound - (o.partial + o.tail_cap) >= -1e-12;
      emit(report("sum-lemma",
                  json{{"alpha", a_alpha}, {"N", a_N}, {"terms", a_terms}},
                  json{{"bound", bound},
                       {"oracle_partial", o.partial},
                       {"oracle_tail_cap", o.tail_cap},
                       {"dominates", dominated}}));
      if (!dominated) throw AuditFailure("sum bound fails to dominate oracle");
      return 0;
    }
    if (*c_sim) {
      const Variant v = parse_variant(sim_variant);
      json inputs{{"mode", sim_mode},    {"variant", sim_variant},
                  {"trials", sim_cfg.trials}, {"n", sim_cfg.n},
                  {"seed", sim_cfg.seed},     {"threads", sim_cfg.threads}};
      if (sim_mode == "kappa") {
        emit(report("simulate", inputs, sim_json(estimate_kappa(sim_cfg, v))));
        return 0;
      }
      inputs["T"] = sim_T;
      inputs["side"] = sim_side;
      const bool upper = parse_side(sim_side) != Side::lower;
      const SimulationResult r = estimate_tail(sim_cfg, sim_T, v, upper);
      json out = sim_json(r);
      const bool within = r.estimate <= *r.bound + 3.0 * r.std_error;
      out["within_bound"] = within;
      emit(report("simulate", inputs, out));
      if (!within)
        throw AuditFailure("empirical tail exceeds the bound by > 3 sigma");
      return 0;
    }
    if (*c_pi) return cmd_pi_report(p_nmax, p_file);
  } catch (const AuditFailure& e) {
    std::cerr << "audit failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
