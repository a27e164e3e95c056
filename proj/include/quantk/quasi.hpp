#pragma once

#include "quantk/operators.hpp"
#include "quantk/params.hpp"

namespace quantk {

// Measured data of a candidate (eps, r, N)-quasiidempotent.  `valid` means
// ||e^2-e|| < eps, prop(e) <= r and max(||e||, ||1-e||) <= N, with the
// float measurements rounded up before the exact comparison.
struct Certificate {
  double norm_e2_minus_e = 0;
  double propagation = 0;
  double norm_e = 0;
  double norm_1_minus_e = 0;
  bool propagation_is_bound = false;  // true when prop is a filtration bound
  bool valid = false;
};

struct QuasiIdempotent {
  UnitizedOperator element;
  ParameterTuple params;
  Certificate certificate;
};

Certificate measure_certificate(const UnitizedOperator& e, const ParameterTuple& p);
QuasiIdempotent validate_quasiidempotent(UnitizedOperator e, ParameterTuple p);

// Formal difference [plus] - [minus].
struct KClassQuantitative {
  QuasiIdempotent plus;
  QuasiIdempotent minus;
};

struct KappaReport {
  CMat idempotent;
  double defect;            // ||k^2 - k||
  double commutator_with_e; // ||[k, e]||
  int iterations;
};

// Comparison map: cubic iteration (primary) with the contour quadrature as
// the cross-check oracle.  Requires measured ||e^2-e|| < 1/4.
KappaReport kappa(const CMat& e);
KappaReport kappa(const QuasiIdempotent& e);

struct ClassRankReport {
  long rank;
  double trace_gap;  // distance of the raw trace difference from the integer
};

// trace(kappa(plus)) - trace(kappa(minus)), gated on a clean integer.
ClassRankReport class_rank(const KClassQuantitative& c, double int_tol = 1e-6);

struct SmoothingReport {
  LipschitzElement output;
  double delta_eps;        // sqrt of the measured defect of the symmetrized input
  double input_defect;     // ||f^2 - f||
  double output_defect;    // max_x ||q(x)^2 - q(x)||
  double output_lipschitz; // exhaustive
  double bound_sharp;      // 2 L (1 - 2 delta)^ -2
  double distance_to_input;// max_x ||q(x) - p(x)||
  bool pass;
};

// Projection smoothing: symmetrize, check the defect budget
// eps(3+eps) <= 1/16, apply the spectral cut pointwise, certify the output
// (2L + lambda)-Lipschitz and within norm 1 of the input.
SmoothingReport smooth_lipschitz_projection(const LipschitzElement& p, double lambda);

}  // namespace quantk
