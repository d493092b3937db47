#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace gig {

// Exact arbitrary-precision rational. Doubles convert losslessly
// (every finite double is m * 2^e), so corner sums of signed terms
// cancel exactly instead of accumulating float error.
using Rational = mpq_class;

inline Rational rat_from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  return Rational(v);
}

inline double rat_to_double(const Rational& r) { return r.get_d(); }

inline Rational rat_factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

inline Rational rat_binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

}  // namespace gig
