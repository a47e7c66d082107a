#include "gemlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "gemlab/errors.hpp"

namespace gemlab {

Interval clopper_pearson(std::uint64_t successes, std::uint64_t n, double confidence) {
  if (n == 0) throw ConfigError("a confidence interval needs at least one sample");
  if (successes > n) throw ConfigError("more successes than samples");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must be in (0, 1)");
  const double alpha = 1.0 - confidence;
  const auto k = static_cast<double>(successes);
  const auto m = static_cast<double>(n);
  Interval iv;
  iv.lower = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, m - k + 1, alpha / 2);
  iv.upper = successes == n ? 1.0 : boost::math::ibeta_inv(k + 1, m - k, 1 - alpha / 2);
  return iv;
}

double clopper_pearson_halfwidth(std::uint64_t successes, std::uint64_t n, double confidence) {
  const Interval iv = clopper_pearson(successes, n, confidence);
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  return std::max(p - iv.lower, iv.upper - p);
}

AdvantageEstimate make_advantage(std::uint64_t real_ones, std::uint64_t ideal_ones,
                                 std::uint64_t samples) {
  AdvantageEstimate a;
  a.samples = samples;
  a.real_rate = static_cast<double>(real_ones) / static_cast<double>(samples);
  a.ideal_rate = static_cast<double>(ideal_ones) / static_cast<double>(samples);
  a.measured = std::fabs(a.real_rate - a.ideal_rate);
  a.ci_halfwidth =
      clopper_pearson_halfwidth(real_ones, samples) + clopper_pearson_halfwidth(ideal_ones, samples);
  return a;
}

}  // namespace gemlab
