#pragma once

#include <cstdint>
#include <optional>

#include "gemlab/rational.hpp"

namespace gemlab {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Exact two-sided Clopper-Pearson interval for `successes` out of `n`.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t n, double confidence = 0.99);

/// Largest distance from the point estimate to either end of the interval.
double clopper_pearson_halfwidth(std::uint64_t successes, std::uint64_t n,
                                 double confidence = 0.99);

/// Measured distinguishing advantage |p_real - p_ideal| with a confidence
/// halfwidth (99% Clopper-Pearson per world, summed) and an exact bound.
struct AdvantageEstimate {
  double measured = 0.0;
  std::uint64_t samples = 0;
  double ci_halfwidth = 0.0;
  std::optional<Rational> bound;
  double real_rate = 0.0;
  double ideal_rate = 0.0;
};

AdvantageEstimate make_advantage(std::uint64_t real_ones, std::uint64_t ideal_ones,
                                 std::uint64_t samples);

}  // namespace gemlab
