#include "gemlab/bounds.hpp"

#include "gemlab/errors.hpp"

namespace gemlab {

namespace {

Rational q(std::uint64_t v) { return Rational(v); }

void require_order(std::uint64_t order) {
  if (order < 2) throw ConfigError("group order must be at least 2");
}

}  // namespace

Rational choose2(std::uint64_t n) { return n < 2 ? Rational(0) : q(n) * q(n - 1) / 2; }

Rational psi_bound(std::uint64_t qc, std::uint64_t qf, std::uint64_t qg, std::uint64_t order) {
  require_order(order);
  const Rational c = q(qc);
  const Rational g = q(order);
  const Rational linear = 2 * c * c + 4 * q(qf) * c + 4 * q(qg) * c + 2 * c * c - 2 * c;
  return linear / g + 2 * choose2(qc) * (Rational(2) / g + Rational(1) / (g * g));
}

Rational psi_bound_total_q(std::uint64_t total, std::uint64_t order) {
  require_order(order);
  const Rational t = q(total);
  const Rational g = q(order);
  return 2 * (3 * t * t - 2 * t) / g + (t * t - t) / (g * g);
}

Rational em_bad_key_bound(std::uint64_t s, std::uint64_t t, std::uint64_t order) {
  require_order(order);
  Rational b = 2 * q(s) * q(t) / q(order);
  return b > 1 ? Rational(1) : b;
}

Rational badg_bound(std::uint64_t qc, std::uint64_t qg, std::uint64_t order) {
  require_order(order);
  return 2 * q(qg) * q(qc) / q(order);
}

Rational bad_bound(std::uint64_t qc, std::uint64_t qf, std::uint64_t order) {
  require_order(order);
  return (q(qc) * q(qc) + 2 * q(qf) * q(qc) + 2 * choose2(qc)) / q(order);
}

Rational inconsistency_bound(std::uint64_t qc, std::uint64_t order) {
  require_order(order);
  return choose2(qc) / (q(order) * q(order));
}

}  // namespace gemlab
