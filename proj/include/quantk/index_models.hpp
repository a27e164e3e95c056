#pragma once

#include "quantk/pairing.hpp"

#include <cstdint>

namespace quantk {

// Odd self-adjoint operator with a coordinate grading: D maps the +1
// coordinates to the -1 coordinates and back, nothing within a sector.
struct GradedOperator {
  FilteredOperator op;
  std::vector<int8_t> grading;  // one sign per (point, internal) coordinate

  void validate(double sa_tol = 1e-12) const;
  std::vector<int> plus_coords() const;
  std::vector<int> minus_coords() const;
  CMat plus_to_minus() const;  // D^+ block (rows: minus coords, cols: plus)
};

// Desk-scale "wilson-torus": nearest-neighbor hopping on an N x N torus
// with the checkerboard grading.  The hopping carries a dimerized east
// amplitude and a pi-flux north phase, which gaps the flux-free operator
// (the mass/Wilson-type term); each flux quantum is realized by deleting a
// lattice site of one sublattice, which shifts the graded dimensions and
// pins dim ker D+ - dim ker D- = flux structurally, with the gap isolating
// the kernel.  The companion Bott-type element is a rank-1 projection
// winding once around a basepoint on the opposite side of the torus.
struct WilsonTorus {
  GradedOperator D;
  LipschitzElement bott;     // p1; its scalar_part doubles as p2
  SpacePtr space;
  int size;
  int flux;
  int bott_center;           // point index
  int infinity_point;        // designated basepoint for the C0 ideal
  std::vector<int> cores;    // deleted-site neighbors (bookkeeping)
  double spectral_gap;       // smallest nonzero singular value of D^+
};

WilsonTorus build_wilson_torus(int size, int flux, int bott_winding = 1);

// Lipschitz class of the model: [bott] - [constant scalar part].
LipschitzClass bott_class(const WilsonTorus& model);

struct NormalizingApproximant {
  std::vector<double> coeffs;  // Chebyshev coefficients, even ones zero
  int degree;
  double scale;                // polynomial evaluated in t/scale
  double sup_bound;            // certified sup norm on [-scale, scale], <= 1
  CMat chi_d;                  // chi(D)
  double flatness;             // ||chi(D)^2 - 1||
  double propagation;          // measured prop of chi(D)
  double prop_bound;           // degree * prop(D)
};

// Odd Chebyshev approximation of a sign-like function, rescaled to sup <= 1.
// Requires degree_budget * prop(D) <= r.  Throws when the budget cannot
// support any odd polynomial (reports the achievable flatness estimate).
NormalizingApproximant normalizing_approximant(const GradedOperator& d, const Rational& r,
                                               int degree_budget);

struct QuantitativeIndex {
  KClassQuantitative cls;      // [P_chi(D)] - [e_{1,1}]
  double closed_form_vs_w;     // || W e11 W^-1 - closed form || on the padded square
  double measured_epsilon;     // defect of P_chi (near machine zero)
};

QuantitativeIndex quantitative_index(const GradedOperator& d, const ParameterTuple& params,
                                     const NormalizingApproximant& chi);

struct OracleResult {
  long index;
  bool gap_ok;
  double zero_max, nonzero_min, smax;
};

// dim ker D+ - dim ker D- by singular-value counting.
OracleResult analytic_index_oracle(const GradedOperator& d, double rtol = 1e-8,
                                   double gap_factor = 100.0);

// Same count for the compression p (D ⊗ I_n) p onto the pointwise range
// of a projection-valued p.
OracleResult analytic_index_oracle_twisted(const GradedOperator& d, const LipschitzElement& p,
                                           double rtol = 1e-8, double gap_factor = 100.0);

// <[D], [p1]-[p2]>_0 at desk scale: difference of the two compressions.
OracleResult analytic_index_oracle_twisted(const GradedOperator& d, const LipschitzClass& lc,
                                           double rtol = 1e-8, double gap_factor = 100.0);

struct VanishingTrial {
  long pairing;
  long oracle;
  int winding;
  bool pass;  // both zero and equal
};

struct VanishingReport {
  double gap_required;
  double gap_measured;
  std::vector<VanishingTrial> trials;
  bool all_zero;
};

// Consistency experiment: a gapped D pairs to zero against every tested
// Lipschitz class, and the pairing agrees with the (zero) oracle.
VanishingReport vanishing_consistency(const WilsonTorus& model, double gap,
                                      const ParameterTuple& params, int trials,
                                      std::uint64_t seed);

}  // namespace quantk
