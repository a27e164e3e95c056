#include "quantk/params.hpp"

#include <stdexcept>

namespace quantk {

void ParameterTuple::validate(bool require_L, bool require_N7) const {
  if (!(epsilon > 0 && epsilon < Rational(1, 20)))
    throw std::invalid_argument("epsilon must lie in (0, 1/20), got " + rat_str(epsilon));
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  Rational nmin = require_N7 ? Rational(7) : Rational(1);
  if (N < nmin)
    throw std::invalid_argument("N must be >= " + rat_str(nmin) + ", got " + rat_str(N));
  if (require_L && !(L > 0)) throw std::invalid_argument("L must be positive");
}

DerivedParams derived_params(const ParameterTuple& p) {
  DerivedParams d;
  d.epsilon_prime = rat_pow2(70) * p.r * rat_pow(p.N, 18) * p.L +
                    rat_pow2(64) * rat_pow(p.N, 16) * p.epsilon;
  d.r_prime = 9 * p.r;
  d.N_prime = rat_pow2(32) * rat_pow(p.N, 9);
  return d;
}

Rational pairable_lhs(const ParameterTuple& p) {
  return rat_pow2(6) * p.r * rat_pow(p.N, 2) * p.L + p.epsilon;
}

Rational pairable_rhs(const ParameterTuple& p) { return rat_pow2(-68) * rat_pow(p.N, -16); }

bool is_pairable(const ParameterTuple& p) { return pairable_lhs(p) < pairable_rhs(p); }

Triple difference_transform(const Triple& t) {
  return Triple{rat_pow2(8) * rat_pow(t.N, 4) * t.epsilon, 3 * t.r, 16 * rat_pow(t.N, 3)};
}

Triple basic_product_transform(const Triple& t, const Rational& L) {
  return Triple{8 * t.r * rat_pow(t.N, 2) * L + t.epsilon, t.r, t.N};
}

}  // namespace quantk
