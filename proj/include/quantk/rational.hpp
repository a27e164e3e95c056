#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace quantk {

// All parameter arithmetic is exact: the derived constants reach sizes like
// 2^150 * 7^36, far outside double range, so everything is mpq-backed.
using Rational = mpq_class;

// 2^e for any integer e (negative allowed).
Rational rat_pow2(long e);

// x^e with integer e (negative allowed; x != 0 for e < 0).
Rational rat_pow(const Rational& x, long e);

// Accepts "p/q", integer strings, and decimal strings with optional
// exponent ("0.01", "-3.5e-4", "2.5E3").  Exact in all cases.
Rational rat_parse(const std::string& s);

// Canonical text form: "p" or "p/q" in lowest terms.
std::string rat_str(const Rational& x);

// Exact conversion of an IEEE double (doubles are dyadic rationals).
Rational rat_of_double(const Rational&) = delete;
Rational rat_of_double(double x);

// Measured float compared against an exact threshold: round the measured
// value up by a relative 2^-40 so the comparison never flatters the data.
Rational rat_from_double_up(double x, int slack_bits = 40);

double rat_to_double(const Rational& x);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quantk
