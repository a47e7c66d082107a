#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gemlab {

/// Exact rational used for every closed-form bound and enumerated probability.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(std::uint64_t num, std::uint64_t den) {
  return Rational(boost::multiprecision::cpp_int(num), boost::multiprecision::cpp_int(den));
}

/// "p/q" (or "p" when the denominator is 1).
inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses the output of to_string.
inline Rational rational_from_string(const std::string& text) { return Rational(text); }

}  // namespace gemlab
