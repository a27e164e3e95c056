#include "quantk/rational.hpp"

#include <cctype>
#include <cmath>

namespace quantk {

Rational rat_pow2(long e) {
  mpz_class num = 1, den = 1;
  if (e >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e));
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-e));
  return Rational(num, den);
}

Rational rat_pow(const Rational& x, long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -e : e);
  if (inv && x == 0) throw std::domain_error("rat_pow: 0 to negative power");
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), k);
  Rational r(num, den);
  r.canonicalize();
  if (inv) r = 1 / r;
  return r;
}

Rational rat_parse(const std::string& s0) {
  std::string s;
  for (char c : s0)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class p, q;
    if (p.set_str(s.substr(0, slash), 10) != 0 || q.set_str(s.substr(slash + 1), 10) != 0)
      throw ParseError("bad rational literal: " + s0);
    if (q == 0) throw ParseError("zero denominator: " + s0);
    Rational r(p, q);
    r.canonicalize();
    return r;
  }

  // decimal, optionally with exponent
  long expo = 0;
  auto epos = s.find_first_of("eE");
  std::string mant = s;
  if (epos != std::string::npos) {
    try {
      expo = std::stol(s.substr(epos + 1));
    } catch (...) {
      throw ParseError("bad exponent: " + s0);
    }
    mant = s.substr(0, epos);
  }
  auto dot = mant.find('.');
  std::string digits = mant;
  long frac = 0;
  if (dot != std::string::npos) {
    frac = static_cast<long>(mant.size() - dot - 1);
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
  }
  if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad literal: " + s0);
  mpz_class p;
  if (p.set_str(digits, 10) != 0) throw ParseError("bad digits: " + s0);
  Rational r(p);
  long net = expo - frac;
  mpz_class ten = 10, scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net >= 0 ? net : -net));
  if (net >= 0)
    r *= Rational(scale);
  else
    r /= Rational(scale);
  return r;
}

std::string rat_str(const Rational& x) {
  Rational c(x);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rat_of_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rat_of_double: non-finite");
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

Rational rat_from_double_up(double x, int slack_bits) {
  Rational r = rat_of_double(x);
  Rational slack = rat_pow2(-slack_bits);
  if (x >= 0) return r * (1 + slack);
  return r * (1 - slack);
}

double rat_to_double(const Rational& x) { return x.get_d(); }

}  // namespace quantk
