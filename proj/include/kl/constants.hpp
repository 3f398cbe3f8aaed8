#pragma once

namespace kl {

// The two digit statistics the bounds are stated for: products of partial
// quotients (M) and products of incremented partial quotients (Mprime).
enum class Variant { M, Mprime };

enum class SpecialKind { eta, zeta };

// Gauss-Kuzmin-Wirsing subdominant eigenvalue. Literature value
// (Briggs 2003); more digits than any printed approximation, since
// lambda_bar loses a digit to the 1/(1 - sqrt(lambda0)) factor.
inline constexpr double kLambda0 = 0.3036630028987327;

/// Universal constants consumed by every bound formula. Built once,
/// immutable, shared read-only.
struct ConstantsTable {
  double kappa;         // E ln a_1 under the Gauss measure (nats)
  double kappa_prime;   // E ln(1 + a_1)
  double r_bar;         // sqrt(3 / (2 ln 2))
  double r_bar_prime;   // sqrt(eta(3) / ln 2)
  double lambda_bar;    // mixing-sum constant
  double psi1;          // 2 ln 2 - 1
  double psi2;          // pi^2 ln 2 / 6 - 1
  double lambda0;       // Gauss-Kuzmin-Wirsing constant
  double tol;           // truncation tolerance used for the series

  double kappa_for(Variant v) const {
    return v == Variant::M ? kappa : kappa_prime;
  }
  double r_bar_for(Variant v) const {
    return v == Variant::M ? r_bar : r_bar_prime;
  }
};

/// Dirichlet eta (s > 0) or Riemann zeta (s > 1), absolute error < 1e-14.
/// The two are computed by independent routes (alternating-series
/// acceleration vs Euler-Maclaurin) so eta(s) = (1 - 2^{1-s}) zeta(s) is a
/// meaningful cross-check, not an identity of the implementation.
double special_function(SpecialKind kind, double s);

/// kappa (variant M) or kappa' (variant Mprime) with truncation error < tol.
double kappa(Variant v, double tol);

double r_bar(Variant v);

/// 1 + sqrt(ln2 - 1/2) + sqrt(pi^2 ln2/12 - 1/2) / (1 - sqrt(lambda0)).
double lambda_bar(double lambda0 = kLambda0);

/// Upper bound on the n-th psi-mixing coefficient of the digit sequence.
double psi_coefficient(int n);

/// E |X_1|^k for variant M (X = ln a) or Mprime (X = ln(1+a)).
/// Truncation error well below tol for every tol >= 1e-13 relative.
double moment_series(Variant v, int k, double tol);

/// The cached table (kappa et al. at tol = 1e-12). Thread-safe.
const ConstantsTable& constants();

}  // namespace kl
