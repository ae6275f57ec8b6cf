#include "hds/bounds.hpp"

#include <cmath>

namespace hds {
namespace {

// Floor of the integer square root.
BigInt isqrt(const BigInt& v) {
  if (v < 0) throw DomainError("isqrt of negative value");
  if (v == 0) return 0;
  BigInt x = BigInt(1) << (unsigned)((msb(v) / 2) + 1);
  for (;;) {
    BigInt y = (x + v / x) / 2;
    if (y >= x) return x;
    x = y;
  }
}

}  // namespace

Rational sqrt_rational_upper(const Rational& x) {
  if (x < 0) throw DomainError("sqrt of negative value");
  if (x == 0) return 0;
  BigInt num = numerator(x), den = denominator(x);
  BigInt sn = isqrt(num), sd = isqrt(den);
  if (sn * sn == num && sd * sd == den) return Rational(sn, sd);
  // Scale so the relative error of the integer sqrt is below 1e-12.
  const BigInt scale = BigInt(1) << 44;
  BigInt r = isqrt(num * den * scale * scale) + 1;  // round up
  return Rational(r, den * scale);
}

Rational delta_separable(int m, long long delta_inf) {
  if (m < 1 || delta_inf < 1) throw DomainError("need m >= 1, delta_inf >= 1");
  Rational base = 2 * Rational(m) * delta_inf + 1;
  return 2 * Rational(m) * pow_rational(base, (unsigned)m);
}

Rational delta_sharp(int m, long long delta_inf, const Rational& L,
                     const SharpParams& sharp) {
  if (m < 1 || delta_inf < 1 || L <= 0) throw DomainError("bad delta_sharp inputs");
  if (sharp.mu <= 0 || sharp.theta < 0 || sharp.theta > 1)
    throw DomainError("sharpness parameters out of range");
  Rational arg = pow_rational(Rational(m), 4) * (L / 4) *
                 Rational(delta_inf) * Rational(delta_inf);
  Rational powed;
  if (sharp.theta == 0) {
    powed = 1;
  } else if (sharp.theta == 1) {
    powed = arg;
  } else if (sharp.theta == Rational(1, 2)) {
    powed = sqrt_rational_upper(arg);
  } else {
    // Guarded floating power, rounded up at 1e-12 relative slack.
    double p = std::pow(to_double(arg), to_double(sharp.theta));
    powed = Rational(p * (1 + 1e-12) + 1e-300);
  }
  Rational base = 2 * Rational(m) * delta_inf + 1;
  return (sharp.mu * powed + m + 2) * pow_rational(base, (unsigned)m);
}

BigInt ip_count_cap(int m, const Rational& delta, const Rational& L) {
  if (m < 1 || delta < 0 || L <= 0) throw DomainError("bad ip_count_cap inputs");
  Rational inner = 4 * delta * delta * L + 1;
  return ceil_rational(Rational(m) * pow_rational(inner, (unsigned)m));
}

Rational h_inf_cap(const Rational& delta, const Rational& L) {
  if (delta < 0) throw DomainError("delta must be nonnegative");
  return 2 * delta * L;
}

BigInt hs_comparison_bound(int m, long long delta_inf) {
  if (m < 1 || delta_inf < 1) throw DomainError("bad hs_comparison_bound inputs");
  BigInt base = 2 * BigInt(m) * delta_inf + 1;
  BigInt acc = 1;
  for (int i = 0; i < 3 * m; ++i) acc *= base;
  return acc;
}

}  // namespace hds
