#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hds {

using Vec = std::vector<double>;
using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;
using BinVec = std::vector<std::uint8_t>;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Point lies outside [0,1]^n or another argument is out of its stated range.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A module postcondition or revealed-constant assumption was violated.
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted before reaching the requested tolerance.
struct ConvergenceError : std::runtime_error {
  Vec best;
  double best_value;
  ConvergenceError(const std::string& what, Vec b, double v)
      : std::runtime_error(what), best(std::move(b)), best_value(v) {}
};

/// Watchdog tripped (state count, enumeration cap, ...).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed instance file or CLI argument.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt ceil_rational(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) < numerator(r)) ++q;
  return q;
}

inline Rational pow_rational(const Rational& base, unsigned e) {
  Rational acc = 1;
  for (unsigned i = 0; i < e; ++i) acc *= base;
  return acc;
}

inline double linf_norm(const Vec& v) {
  double r = 0;
  for (double x : v) r = std::max(r, std::fabs(x));
  return r;
}

inline long long linf_norm(const IntMat& h) {
  long long r = 0;
  for (const auto& row : h)
    for (long long x : row) r = std::max(r, std::llabs(x));
  return r;
}

inline double l1_dist(const Vec& a, const BinVec& z) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::fabs(a[j] - double(z[j]));
  return s;
}

}  // namespace hds
