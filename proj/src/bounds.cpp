#include "quantk/bounds.hpp"

#include <cmath>
#include <mpfr.h>
#include <stdexcept>

namespace quantk {

void BoundConstants::validate() const {
  if (!(C > 0 && C_prime > 0 && omega_0 > 0))
    throw std::invalid_argument("bound constants must be strictly positive");
  if (N < 7) throw std::invalid_argument("N must be >= 7");
}

void BoundQuery::validate() const {
  if (!(R > 0)) throw std::invalid_argument("R must be positive");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (l && *l < 1) throw std::invalid_argument("l must be >= 1");
  if (lambda && *lambda < 0) throw std::invalid_argument("lambda must be >= 0");
}

LkValue lipschitz_constant_Lk(long k, const BoundConstants& c) {
  if (k < 0) throw std::invalid_argument("L_k needs k >= 0");
  if (k == 0 || k == 1) return {c.C, true};  // k^0 = 1 convention; 1^x = 1
  Rational expo = c.C_prime * k;
  if (expo.get_den() == 1 && expo.get_num().fits_slong_p()) {
    return {c.C * rat_pow(Rational(k), expo.get_num().get_si()), true};
  }
  // non-integral exponent: k^(p/q) with 256-bit directed (upward) rounding,
  // conservative for every bound these feed into
  mpfr_t base, e, out;
  mpfr_inits2(256, base, e, out, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(base, k, MPFR_RNDU);
  mpfr_set_q(e, expo.get_mpq_t(), MPFR_RNDU);
  mpfr_pow(out, base, e, MPFR_RNDU);
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, out);
  Rational pw(q);
  mpq_clear(q);
  mpfr_clears(base, e, out, static_cast<mpfr_ptr>(nullptr));
  return {c.C * pw, false};
}

MainBound k_bound_main(const BoundQuery& q, const BoundConstants& c) {
  q.validate();
  c.validate();
  LkValue lk = lipschitz_constant_Lk(q.m - 1, c);
  Rational c0 = rat_pow2(150) * rat_pow(c.N, 36) * rat_pow(c.omega_0, 2);
  Rational base = Rational(q.m) / q.R * lk.value;
  MainBound out;
  out.k_value = c0 * base * base;
  out.exact = lk.exact;
  out.L_m_minus_1 = lk;
  out.r_scale = rat_to_double(c.omega_0) / std::sqrt(rat_to_double(out.k_value));
  return out;
}

ClosedBound k_bound_closed(const BoundQuery& q, const BoundConstants& c) {
  q.validate();
  c.validate();
  if (!q.l) throw std::invalid_argument("k_bound_closed needs l");
  LkValue lk = lipschitz_constant_Lk(q.m - 1, c);
  Rational base = Rational(q.m) / q.R * lk.value;
  return ClosedBound{8 * Rational(*q.l) * Rational(*q.l) * base * base, lk.exact, lk};
}

CurvatureBound curvature_bound(const BoundQuery& q, const BoundConstants& c) {
  q.validate();
  c.validate();
  Rational lam = q.lambda ? *q.lambda : Rational(0);
  LkValue lk = lipschitz_constant_Lk(q.m - 1, c);
  Rational inner = 2 * Rational(q.m) / q.R * lk.value + lam;
  return CurvatureBound{inner * inner, lk.exact, lam == 0};
}

}  // namespace quantk
