#pragma once

#include "quantk/rational.hpp"

#include <optional>

namespace quantk {

// C and C' parameterize the Lipschitz-representative constant
// L_k = C k^(C' k); omega_0 is the universal propagation constant.  None of
// them come with canonical values: they are configuration, echoed in every
// report, never defaults masquerading as ground truth.
struct BoundConstants {
  Rational C;
  Rational C_prime;
  Rational omega_0;
  Rational N = 7;

  void validate() const;
};

struct BoundQuery {
  Rational R;                    // Lebesgue number
  long m = 1;                    // multiplicity
  std::optional<long> l;         // dimension (closed-manifold variant)
  std::optional<Rational> lambda;

  void validate() const;
};

struct LkValue {
  Rational value;
  bool exact;  // false when C' k is non-integral (directed upward rounding)
};

// L_k = C k^(C' k); k = 0 and k = 1 give C (k^0 = 1 convention).
LkValue lipschitz_constant_Lk(long k, const BoundConstants& c);

struct MainBound {
  Rational k_value;        // C0 (m R^-1 L_{m-1})^2, C0 = 2^150 N^36 omega_0^2
  bool exact;
  double r_scale;          // omega_0 k^{-1/2}, the propagation scale
  LkValue L_m_minus_1;
};

MainBound k_bound_main(const BoundQuery& q, const BoundConstants& c);

// k(R, m, l) = 8 l^2 (m R^-1 L_{m-1})^2; any l >= 1 accepted (the even
// reduction is a note, not a precondition here).
struct ClosedBound {
  Rational k_value;
  bool exact;
  LkValue L_m_minus_1;
};
ClosedBound k_bound_closed(const BoundQuery& q, const BoundConstants& c);

// (2 m R^-1 L_{m-1} + lambda)^2; lambda = 0 evaluates the infimum.
struct CurvatureBound {
  Rational value;
  bool exact;
  bool is_limit;  // lambda == 0
};
CurvatureBound curvature_bound(const BoundQuery& q, const BoundConstants& c);

}  // namespace quantk
