#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace homgibbs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact power with a non-negative exponent.
Rational pow(const Rational& x, unsigned e);

/// Scales a positive rational vector to the unique coprime integer vector
/// proportional to it.
std::vector<BigInt> to_coprime_integers(std::span<const Rational> xs);

std::vector<double> to_doubles(std::span<const Rational> xs);

/// Exact rational from a double (every finite double is a dyadic rational).
Rational exact_rational(double x);

}  // namespace homgibbs
