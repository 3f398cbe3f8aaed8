#pragma once

namespace kl {

// Published minimal-N reference tables (4 significant digits): rows are the
// target estimates, columns the rate slacks T. Table 1 is the incremented
// statistic (Mprime), Table 2 the plain one (M).
inline constexpr double kTableT[4] = {2.0, 1.0, 0.5, 0.1};
inline constexpr double kTableEst[5] = {0.01, 0.5, 0.9, 0.99, 0.999};

inline constexpr double kTable1[5][4] = {
    {3.969e9, 8.122e10, 1.633e12, 1.610e15},
    {4.225e9, 8.585e10, 1.724e12, 1.681e15},
    {4.900e9, 9.860e10, 1.949e12, 1.854e15},
    {6.084e9, 1.183e11, 2.292e12, 2.116e15},
    {7.225e9, 1.399e11, 2.663e12, 2.394e15},
};

inline constexpr double kTable2[5][4] = {
    {2.074e10, 4.238e11, 8.456e12, 8.154e15},
    {2.220e10, 4.489e11, 8.898e12, 8.496e15},
    {2.560e10, 5.112e11, 9.992e12, 9.328e15},
    {3.098e10, 6.068e11, 1.166e13, 1.058e16},
    {3.686e10, 7.090e11, 1.345e13, 1.192e16},
};

// The published evaluation of Xi'(2), reported against (never adopted as)
// our computed value; see README.
inline constexpr double kPrintedXiPrime2 = 0.9997597;

}  // namespace kl
