#include "quantk/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace quantk {

double default_prop_rel_tolerance() {
  if (const char* env = std::getenv("QUANTK_PROP_TOLERANCE")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v >= 0) return v;
  }
  return 1e-12;
}

FilteredOperator::FilteredOperator(SpacePtr space, int internal_dim, CMat matrix,
                                   std::optional<double> abs_tolerance)
    : space_(std::move(space)), k_(internal_dim), mat_(std::move(matrix)) {
  if (k_ < 1) throw std::invalid_argument("internal_dim must be >= 1");
  const long n = static_cast<long>(space_->size()) * k_;
  if (mat_.rows() != n || mat_.cols() != n)
    throw std::invalid_argument("operator matrix must be " + std::to_string(n) + " square");
  norm_ = op_norm(mat_);
  tol_ = abs_tolerance ? *abs_tolerance : default_prop_rel_tolerance() * norm_;
  propagation_ = 0;
  const int pts = space_->size();
  for (int x = 0; x < pts; ++x)
    for (int y = 0; y < pts; ++y) {
      if (space_->d(x, y) <= propagation_) continue;
      if (block(x, y).cwiseAbs().maxCoeff() > tol_) propagation_ = space_->d(x, y);
    }
}

FilteredOperator zero_operator(SpacePtr space, int internal_dim) {
  long n = static_cast<long>(space->size()) * internal_dim;
  return FilteredOperator(std::move(space), internal_dim, CMat::Zero(n, n));
}

FilteredOperator amplify(const FilteredOperator& t, int n) {
  if (n < 1) throw std::invalid_argument("amplify: n >= 1");
  if (static_cast<long>(t.dim()) * n > kDimCap)
    throw std::invalid_argument("amplify: dimension cap exceeded");
  const int d = t.dim();
  CMat out = CMat::Zero(static_cast<long>(d) * n, static_cast<long>(d) * n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Cplx v = t.matrix()(i, j);
      if (v == Cplx(0, 0)) continue;
      for (int c = 0; c < n; ++c) out(i * n + c, j * n + c) = v;
    }
  return FilteredOperator(t.space(), t.internal_dim() * n, std::move(out));
}

double LipschitzElement::measure_lipschitz() const {
  double best = 0;
  const int pts = space->size();
  for (int x = 0; x < pts; ++x)
    for (int y = x + 1; y < pts; ++y)
      best = std::max(best, op_norm(values[x] - values[y]) / space->d(x, y));
  return best;
}

void LipschitzElement::certify() { lipschitz_L = measure_lipschitz(); }

bool LipschitzElement::is_projection_valued(double tol) const {
  for (const auto& v : values) {
    if (op_norm(v * v - v) > tol) return false;
    if (op_norm(v - v.adjoint()) > tol) return false;
  }
  return true;
}

FilteredOperator embed(const LipschitzElement& f, int m) {
  if (m < 1) throw std::invalid_argument("embed: m >= 1");
  const int pts = f.space->size();
  const int k = m * f.n;
  if (static_cast<long>(pts) * k > kDimCap) throw std::invalid_argument("embed: dimension cap");
  CMat out = CMat::Zero(static_cast<long>(pts) * k, static_cast<long>(pts) * k);
  for (int x = 0; x < pts; ++x)
    for (int b = 0; b < m; ++b)
      out.block(x * k + b * f.n, x * k + b * f.n, f.n, f.n) = f.values[x];
  return FilteredOperator(f.space, k, std::move(out));
}

CMat commutator_amplified(const FilteredOperator& t, const LipschitzElement& f) {
  if (t.space().get() != f.space.get())
    throw std::invalid_argument("commutator: operands live on different spaces");
  const int pts = t.points(), m = t.internal_dim(), n = f.n;
  const int k = m * n;
  CMat out = CMat::Zero(static_cast<long>(pts) * k, static_cast<long>(pts) * k);
  for (int x = 0; x < pts; ++x)
    for (int y = 0; y < pts; ++y) {
      auto txy = t.block(x, y);
      if (txy.cwiseAbs().maxCoeff() == 0) continue;
      CMat df = f.values[y] - f.values[x];  // [T⊗I, I⊗f] block = T_xy ⊗ (f(y)-f(x))
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          if (txy(a, b) == Cplx(0, 0)) continue;
          out.block(x * k + a * n, y * k + b * n, n, n) += txy(a, b) * df;
        }
    }
  return out;
}

CommutatorReport commutator_certificate(const FilteredOperator& t, const LipschitzElement& f) {
  CommutatorReport rep;
  rep.lipschitz_L = f.lipschitz_L;
  rep.propagation = t.propagation();
  rep.operator_norm = t.norm();
  rep.commutator_norm = op_norm(commutator_amplified(t, f));
  rep.bound = 8.0 * rep.lipschitz_L * rep.propagation * rep.operator_norm;
  rep.pass = rep.commutator_norm <= rep.bound + 1e-12 * rep.operator_norm;
  return rep;
}

LipschitzElement staircase_discretization(const LipschitzElement& f, double delta, int n) {
  if (!(delta > 0)) throw std::invalid_argument("staircase: delta must be > 0");
  if (n < 1) throw std::invalid_argument("staircase: n must be >= 1");
  const double bin = delta / n;
  LipschitzElement g = f;
  for (auto& v : g.values) {
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j) {
        Cplx z = v(i, j);
        if (std::abs(z.imag()) > 1e-14 * std::max(1.0, std::abs(z)))
          throw std::invalid_argument("staircase: entrywise real f required");
        v(i, j) = std::floor(z.real() / bin) * bin;  // bins [k δ/n, (k+1) δ/n)
      }
  }
  for (int i = 0; i < g.scalar_part.rows(); ++i)
    for (int j = 0; j < g.scalar_part.cols(); ++j)
      g.scalar_part(i, j) = std::floor(g.scalar_part(i, j).real() / bin) * bin;
  g.certify();
  return g;
}

UnitizedOperator UnitizedOperator::from_operator(FilteredOperator t) {
  int k = t.internal_dim();
  UnitizedOperator u{std::move(t), CMat::Zero(k, k), CMat::Zero(k, k), {}};
  return u;
}

UnitizedOperator UnitizedOperator::scalar_only(SpacePtr space, int internal_dim, CMat sp, CMat sm,
                                               std::vector<int8_t> sector) {
  UnitizedOperator u{zero_operator(std::move(space), internal_dim), std::move(sp), std::move(sm),
                     std::move(sector)};
  return u;
}

CMat UnitizedOperator::dense() const {
  CMat out = op.matrix();
  const int k = internal_dim();
  for (int x = 0; x < op.points(); ++x) out.block(x * k, x * k, k, k) += scalar_at(x);
  return out;
}

UnitizedOperator UnitizedOperator::one_minus() const {
  const int k = internal_dim();
  UnitizedOperator u{op.with_matrix(-op.matrix()), CMat::Identity(k, k) - scalar_plus,
                     CMat::Identity(k, k) - scalar_minus, sector};
  return u;
}

bool UnitizedOperator::scalar_part_is_zero(double tol) const {
  auto z = [&](const CMat& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() <= tol; };
  return z(scalar_plus) && z(scalar_minus);
}

bool UnitizedOperator::same_scalar_part(const UnitizedOperator& other, double tol) const {
  auto eq = [&](const CMat& a, const CMat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.size() == 0 || (a - b).cwiseAbs().maxCoeff() <= tol);
  };
  return eq(scalar_plus, other.scalar_plus) && eq(scalar_minus, other.scalar_minus);
}

namespace {
void check_compatible(const UnitizedOperator& a, const UnitizedOperator& b) {
  if (a.op.space().get() != b.op.space().get() || a.internal_dim() != b.internal_dim())
    throw std::invalid_argument("unitized operands incompatible");
  if (a.sector != b.sector) throw std::invalid_argument("unitized operands: sector mismatch");
}

UnitizedOperator from_parts(const UnitizedOperator& like, CMat dense, CMat sp, CMat sm) {
  const int k = like.internal_dim();
  CMat opmat = std::move(dense);
  for (int x = 0; x < like.op.points(); ++x)
    opmat.block(x * k, x * k, k, k) -= (like.sector_of(x) > 0 ? sp : sm);
  UnitizedOperator u{FilteredOperator(like.op.space(), k, std::move(opmat)), std::move(sp),
                     std::move(sm), like.sector};
  return u;
}
}  // namespace

UnitizedOperator add(const UnitizedOperator& a, const UnitizedOperator& b) {
  check_compatible(a, b);
  return from_parts(a, a.dense() + b.dense(), a.scalar_plus + b.scalar_plus,
                    a.scalar_minus + b.scalar_minus);
}

UnitizedOperator sub(const UnitizedOperator& a, const UnitizedOperator& b) {
  check_compatible(a, b);
  return from_parts(a, a.dense() - b.dense(), a.scalar_plus - b.scalar_plus,
                    a.scalar_minus - b.scalar_minus);
}

UnitizedOperator mul(const UnitizedOperator& a, const UnitizedOperator& b) {
  check_compatible(a, b);
  return from_parts(a, a.dense() * b.dense(), a.scalar_plus * b.scalar_plus,
                    a.scalar_minus * b.scalar_minus);
}

UnitizedOperator amplify(const UnitizedOperator& a, int n) {
  FilteredOperator opn = amplify(a.op, n);
  auto kron_id = [n](const CMat& s) {
    CMat out = CMat::Zero(s.rows() * n, s.cols() * n);
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j)
        for (int c = 0; c < n; ++c) out(i * n + c, j * n + c) = s(i, j);
    return out;
  };
  UnitizedOperator u{std::move(opn), kron_id(a.scalar_plus), kron_id(a.scalar_minus), a.sector};
  return u;
}

}  // namespace quantk
