#pragma once

#include <complex>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyrec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// e(x) = exp(2 pi i x)
inline Complex unit_phase(double x) {
  const double a = kTwoPi * x;
  return {std::cos(a), std::sin(a)};
}

// Distance from x to the nearest integer.
inline double nearest_int_distance(double x) {
  return std::abs(x - std::nearbyint(x));
}

// Doubles are dyadic rationals, so this conversion is exact.
inline Rational exact_rational(double x) { return Rational(x); }

}  // namespace polyrec
