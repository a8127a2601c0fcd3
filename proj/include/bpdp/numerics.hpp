#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace bpdp {

// Probabilities are carried as natural logarithms; -inf is an exact zero.
using LogProb = double;

inline constexpr LogProb log_zero = -std::numeric_limits<double>::infinity();

inline LogProb log_add(LogProb a, LogProb b) {
  if (a == log_zero) return b;
  if (b == log_zero) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

inline LogProb log_mul(LogProb a, LogProb b) {
  if (a == log_zero || b == log_zero) return log_zero;
  return a + b;
}

// Left-to-right fold; the order is part of the result.
inline LogProb log_sum(std::span<const LogProb> values) {
  LogProb acc = log_zero;
  for (LogProb v : values) acc = log_add(acc, v);
  return acc;
}

}  // namespace bpdp
