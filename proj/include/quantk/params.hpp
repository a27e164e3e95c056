#pragma once

#include "quantk/rational.hpp"

namespace quantk {

// (epsilon, r, N, L), all exact rationals.  epsilon in (0, 1/20), N >= 1,
// r > 0; L > 0 where present (L <= 0 means "not supplied").
struct ParameterTuple {
  Rational epsilon;
  Rational r;
  Rational N;
  Rational L;

  void validate(bool require_L = false, bool require_N7 = false) const;
};

struct DerivedParams {
  Rational epsilon_prime;  // 2^70 r N^18 L + 2^64 N^16 eps
  Rational r_prime;        // 9 r
  Rational N_prime;        // 2^32 N^9
};

DerivedParams derived_params(const ParameterTuple& p);

// Pairability: 2^6 r N^2 L + eps < 2^-68 N^-16 (exact, strict).
bool is_pairable(const ParameterTuple& p);
Rational pairable_lhs(const ParameterTuple& p);
Rational pairable_rhs(const ParameterTuple& p);

// One application of the difference construction:
// (eps, r, N) -> (2^8 N^4 eps, 3r, 16 N^3).
struct Triple {
  Rational epsilon, r, N;
};
Triple difference_transform(const Triple& t);

// Basic product: (eps, r, N) with an L-Lipschitz projection ->
// (8 r N^2 L + eps, r, N).
Triple basic_product_transform(const Triple& t, const Rational& L);

}  // namespace quantk
