#pragma once

#include "quantk/linalg.hpp"
#include "quantk/metric.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace quantk {

// Relative propagation threshold: entries of modulus <= factor * ||T|| are
// treated as zero when measuring supports.  QUANTK_PROP_TOLERANCE overrides.
double default_prop_rel_tolerance();

// Dense matrix over (points x internal) with a computed propagation.
// Index layout is point-major: row = point * internal_dim + a.
class FilteredOperator {
 public:
  FilteredOperator(SpacePtr space, int internal_dim, CMat matrix,
                   std::optional<double> abs_tolerance = std::nullopt);

  const SpacePtr& space() const { return space_; }
  int internal_dim() const { return k_; }
  int points() const { return space_->size(); }
  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& matrix() const { return mat_; }
  double prop_tolerance() const { return tol_; }

  double propagation() const { return propagation_; }
  double norm() const { return norm_; }

  Eigen::Block<const CMat> block(int x, int y) const {
    return mat_.block(x * k_, y * k_, k_, k_);
  }

  FilteredOperator with_matrix(CMat m) const {
    return FilteredOperator(space_, k_, std::move(m));
  }

 private:
  SpacePtr space_;
  int k_;
  CMat mat_;
  double tol_;
  double norm_;
  double propagation_;
};

FilteredOperator zero_operator(SpacePtr space, int internal_dim);

// T ⊗ I_n: internal dimension multiplies; propagation unchanged.
FilteredOperator amplify(const FilteredOperator& t, int n);

// Matrix-valued function on points with a certified Lipschitz constant,
// ||f(x)-f(y)|| <= L d(x,y).  `scalar_part` is the constant-at-infinity
// value used by the unitized/ideal bookkeeping.
struct LipschitzElement {
  SpacePtr space;
  int n = 1;
  std::vector<CMat> values;  // one n x n matrix per point
  double lipschitz_L = 0;
  CMat scalar_part;          // n x n

  // exhaustive max of ||f(x)-f(y)|| / d(x,y)
  double measure_lipschitz() const;
  // recompute and store the exact constant
  void certify();
  bool is_projection_valued(double tol = 1e-10) const;
  CMat value_minus_scalar(int x) const { return values[x] - scalar_part; }
};

// I_m ⊗ f as a block-diagonal FilteredOperator (propagation 0).
FilteredOperator embed(const LipschitzElement& f, int m);

// Guard for Kronecker blow-ups.
inline constexpr long kDimCap = 1 << 24;

// ||[T ⊗ I_n, I_m ⊗ f]|| <= 8 L prop(T) ||T||, assembled blockwise:
// the (x,y) block of the commutator is T_xy ⊗ (f(y) - f(x)).
struct CommutatorReport {
  double commutator_norm;
  double bound;        // 8 L prop ||T||
  double lipschitz_L;
  double propagation;
  double operator_norm;
  bool pass;           // with slack 1e-12 ||T||
};
CommutatorReport commutator_certificate(const FilteredOperator& t, const LipschitzElement& f);

CMat commutator_amplified(const FilteredOperator& t, const LipschitzElement& f);

// Borel staircase g_ij(x) = floor(f_ij(x) n / delta) delta / n; requires f
// real entrywise.  Claims checked by callers: ||I⊗(f-g)|| <= delta and
// ||[T⊗I_n, I_m⊗g]|| <= 2 delta ||T|| when delta = L prop(T).
LipschitzElement staircase_discretization(const LipschitzElement& f, double delta, int n);

// scalar·1 + operator with the scalar part tracked formally.  On graded
// spaces the scalar may differ between the two sectors (that is how the
// e_{1,1}-patterns of the index construction stay zero-propagation data).
struct UnitizedOperator {
  FilteredOperator op;
  CMat scalar_plus;              // k x k, k = op.internal_dim()
  CMat scalar_minus;             // equal to scalar_plus on ungraded spaces
  std::vector<int8_t> sector;    // +1/-1 per point; empty means all +1

  static UnitizedOperator from_operator(FilteredOperator t);
  static UnitizedOperator scalar_only(SpacePtr space, int internal_dim, CMat scalar_plus,
                                      CMat scalar_minus, std::vector<int8_t> sector = {});

  int dim() const { return op.dim(); }
  int internal_dim() const { return op.internal_dim(); }
  int8_t sector_of(int point) const {
    return sector.empty() ? int8_t{1} : sector[point];
  }
  const CMat& scalar_at(int point) const {
    return sector_of(point) > 0 ? scalar_plus : scalar_minus;
  }

  CMat dense() const;            // realized matrix
  double norm() const { return op_norm(dense()); }
  double propagation() const { return op.propagation(); }

  UnitizedOperator one_minus() const;
  bool scalar_part_is_zero(double tol = 0.0) const;
  bool same_scalar_part(const UnitizedOperator& other, double tol = 0.0) const;
};

UnitizedOperator add(const UnitizedOperator& a, const UnitizedOperator& b);
UnitizedOperator sub(const UnitizedOperator& a, const UnitizedOperator& b);
UnitizedOperator mul(const UnitizedOperator& a, const UnitizedOperator& b);
UnitizedOperator amplify(const UnitizedOperator& a, int n);

}  // namespace quantk
