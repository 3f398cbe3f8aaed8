#include "kl/pi_digits.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

#include "kl/cf.hpp"

namespace kl {
namespace {

// atan(1/x) * scale, truncated toward zero term by term. Each truncated
// division loses < 1, and the term count bounds the total error.
BigInt atan_inv_scaled(long long x, const BigInt& scale) {
  BigInt sum = 0;
  BigInt term = scale / x;
  const long long x2 = x * x;
  long long n = 1;
  bool neg = false;
  while (term != 0) {
    const BigInt t = term / n;
    if (neg) sum -= t; else sum += t;
    term /= x2;
    n += 2;
    neg = !neg;
  }
  return sum;
}

std::string digits_from(const BigInt& scaled_pi, int count) {
  const std::string s = scaled_pi.str();
  if (static_cast<int>(s.size()) < count)
    throw std::runtime_error("pi digits: internal shortfall");
  return s.substr(0, count);
}

}  // namespace

std::string pi_digits_builtin(int count) {
  if (count < 1) throw std::domain_error("count must be >= 1");
  if (count > kPiBuiltinLimit)
    throw std::domain_error("count exceeds the builtin limit (12000)");
  const int guard = 25;
  BigInt scale = 1;
  for (int i = 0; i < count - 1 + guard; ++i) scale *= 10;
  const BigInt machin =
      16 * atan_inv_scaled(5, scale) - 4 * atan_inv_scaled(239, scale);
  const BigInt euler =
      4 * atan_inv_scaled(2, scale) + 4 * atan_inv_scaled(3, scale);
  const std::string a = digits_from(machin, count);
  const std::string b = digits_from(euler, count);
  if (a != b)
    throw std::runtime_error("pi digits: independent formulas disagree");
  return a;
}

std::string pi_digits_from_file(const std::string& path, int count) {
  if (count < 1) throw std::domain_error("count must be >= 1");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("pi digits: cannot open " + path);
  std::string out;
  out.reserve(count);
  char c;
  bool first = true;
  while (static_cast<int>(out.size()) < count && in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '.' && out.size() == 1 && first) {
      first = false;
      continue;  // the "3." prefix
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::runtime_error("pi digits: unexpected character in file");
    out.push_back(c);
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("pi digits: file has too few digits");
  return out;
}

}  // namespace kl
