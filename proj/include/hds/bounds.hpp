#pragma once

#include "hds/common.hpp"

namespace hds {

/// Holder error bound parameters: mu (g(u) - g(v*))^theta >= ||u - v*||_1.
struct SharpParams {
  Rational mu;
  Rational theta;  // in [0,1]; 0, 1/2 and 1 are evaluated exactly
};

struct BoundSet {
  Rational delta;
  Rational h_inf_cap;   // 2 delta L
  BigInt ip_count_cap;  // ceil( m (4 delta^2 L + 1)^m )
};

/// Proximity radius for separable convex g: 2m (2m delta_inf + 1)^m.
Rational delta_separable(int m, long long delta_inf);

/// Proximity radius for sharp g:
/// ( mu (m^4 (L/4) delta_inf^2)^theta + m + 2 ) (2m delta_inf + 1)^m.
/// Irrational theta-powers are rounded up so the radius stays a valid
/// over-estimate.
Rational delta_sharp(int m, long long delta_inf, const Rational& L,
                     const SharpParams& sharp);

BigInt ip_count_cap(int m, const Rational& delta, const Rational& L);

Rational h_inf_cap(const Rational& delta, const Rational& L);

/// Adapted Hochbaum-Shanthikumar proximity, (2m delta_inf + 1)^(3m), for
/// side-by-side reporting.
BigInt hs_comparison_bound(int m, long long delta_inf);

/// Rational upper bound on sqrt(x), within relative slack 1e-12; exact when
/// x is a perfect square of a rational.
Rational sqrt_rational_upper(const Rational& x);

}  // namespace hds
