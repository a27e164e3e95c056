#pragma once

#include "quantk/quasi.hpp"

#include <optional>

namespace quantk {

// 4x4 block matrices of the difference construction, realized over the
// operand's space.  Transposition is at the block level (entries are
// operators and stay untransposed).
UnitizedOperator z_matrix(const UnitizedOperator& beta);
UnitizedOperator y_matrix(const UnitizedOperator& alpha, const UnitizedOperator& beta);

// d(alpha, beta) = Z_beta^T Y_{alpha,beta} Z_beta, expanded:
//   d11 = b a b + (1-b)^3        d13 = b a (1-b)     d14 = (1-b)^2 b
//   d31 = (1-b) a b              d33 = (1-b) a (1-b)
//   d41 = b (1-b)^2              d44 = b (1-b) b      (row/col 2 vanish)
// For exact idempotents this collapses to the familiar block form; the
// expansion is frozen here and the product is asserted against it.
UnitizedOperator closed_form_difference(const UnitizedOperator& alpha,
                                        const UnitizedOperator& beta);

struct DifferenceReport {
  QuasiIdempotent result;            // certified at (2^8 N^4 eps, 3r, 16 N^3)
  double closed_form_agreement;      // ||Z^T Y Z - closed form||
  double ztz_minus_identity;         // ||Z^T Z - 1||, must be < 8 eps
};

// Requires alpha - beta to have zero scalar part (the finite-model ideal
// membership).  Throws on violation.
DifferenceReport difference_construction(const QuasiIdempotent& alpha,
                                         const QuasiIdempotent& beta);

// (P ⊗ I_n)(I_m ⊗ p), certified at (8 r N^2 L + eps, r, N).
QuasiIdempotent basic_product(const QuasiIdempotent& P, const LipschitzElement& p);

// Lipschitz class [p1] - [p2]; p1 - p2 must have zero scalar part and
// vanish at the designated basepoint (the finite stand-in for infinity).
struct LipschitzClass {
  LipschitzElement p1;
  LipschitzElement p2;
  int basepoint = 0;
  Rational L;  // certified constant for the class (max of the two)
};

struct StageCertificate {
  std::string stage;
  Certificate cert;
  ParameterTuple budget;
};

struct PairingOutcome {
  // [d(P1', P2')] - [reference pattern]; the outer element is materialized
  // on request (small inputs / cross-validation), otherwise its certificate
  // is measured on the factored form and only the spectral counts are kept.
  std::optional<KClassQuantitative> cls;
  std::vector<StageCertificate> stages;
  long count1_plus;         // eigenvalues of d(P1',P2') in the 1-cluster
  long trace_reference;     // rank of the reference pattern
  bool reduced_path;        // true when the exact similarity shortcut applied
};

PairingOutcome pair_classes(const KClassQuantitative& qc, const LipschitzClass& lc,
                            bool materialize = true);

struct PairingReport {
  long value;
  bool pairable;            // exact Def-style inequality on the declared tuple
  std::string pairable_lhs;
  std::string pairable_rhs;
  bool override_used;
  DerivedParams derived;
  std::vector<StageCertificate> stages;
};

// kappa of the pairing class; requires is_pairable(params), or
// allow_override (documented in the report; the measured defects still
// gate the functional calculus at 1/4).
PairingReport pair_to_integer(const KClassQuantitative& qc, const LipschitzClass& lc,
                              const ParameterTuple& params, bool allow_override = false);

// Nonzero spectrum of d(alpha, beta) equals the nonzero spectrum of the
// half-size core [[a(1+2u), -a u], [-(1-b)u, (1-b)(1+2u)]], u = b^2 - b.
CMat difference_spectral_core(const CMat& alpha, const CMat& beta);

struct NonPairableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quantk
