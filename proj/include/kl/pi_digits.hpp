#pragma once

#include <string>

namespace kl {

/// Largest digit count served by the builtin Machin-series generator.
inline constexpr int kPiBuiltinLimit = 12000;

/// First `count` decimal digits of pi ("3141592653..."), computed by the
/// Machin formula 16 atan(1/5) - 4 atan(1/239) with big-integer arithmetic
/// and a guard band, then certified against the independent identity
/// pi = 4 atan(1/2) + 4 atan(1/3). Throws if count exceeds the builtin limit.
std::string pi_digits_builtin(int count);

/// First `count` digits parsed from an ASCII file: optional "3." prefix,
/// whitespace ignored. Throws on parse failure or insufficient digits.
std::string pi_digits_from_file(const std::string& path, int count);

}  // namespace kl
