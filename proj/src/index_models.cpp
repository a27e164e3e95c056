#include "quantk/index_models.hpp"

#include "quantk/rng.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace quantk {

void GradedOperator::validate(double sa_tol) const {
  if (static_cast<int>(grading.size()) != op.dim())
    throw std::invalid_argument("grading vector length mismatch");
  const CMat& m = op.matrix();
  double scale = std::max(1.0, op.norm());
  if (op_norm((m - m.adjoint()).eval()) > sa_tol * scale)
    throw std::invalid_argument("graded operator is not self-adjoint");
  double odd_violation = 0;
  for (int i = 0; i < op.dim(); ++i)
    for (int j = 0; j < op.dim(); ++j)
      if (grading[i] == grading[j] && i != j)
        odd_violation = std::max(odd_violation, std::abs(m(i, j)));
  for (int i = 0; i < op.dim(); ++i) odd_violation = std::max(odd_violation, std::abs(m(i, i)));
  if (odd_violation > op.prop_tolerance())
    throw std::invalid_argument("graded operator has even blocks (not odd)");
}

std::vector<int> GradedOperator::plus_coords() const {
  std::vector<int> v;
  for (int i = 0; i < op.dim(); ++i)
    if (grading[i] > 0) v.push_back(i);
  return v;
}

std::vector<int> GradedOperator::minus_coords() const {
  std::vector<int> v;
  for (int i = 0; i < op.dim(); ++i)
    if (grading[i] < 0) v.push_back(i);
  return v;
}

CMat GradedOperator::plus_to_minus() const {
  auto ap = plus_coords();
  auto bm = minus_coords();
  CMat h(bm.size(), ap.size());
  for (std::size_t r = 0; r < bm.size(); ++r)
    for (std::size_t c = 0; c < ap.size(); ++c) h(r, c) = op.matrix()(bm[r], ap[c]);
  return h;
}

namespace {

int wrap_dist(int a, int n) {
  int m = ((a % n) + n) % n;
  return std::min(m, n - m);
}

}  // namespace

WilsonTorus build_wilson_torus(int size, int flux, int bott_winding) {
  if (size < 4) throw std::invalid_argument("wilson-torus: size must be >= 4");
  const int N = size;
  // cores: |flux| sites of the B (A) sublattice for flux > 0 (< 0),
  // clustered around (3N/4, 3N/4)
  const int cx = (3 * N) / 4, cy = (3 * N) / 4;
  const int want_parity = flux > 0 ? 1 : 0;
  std::vector<std::pair<int, int>> all;
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) all.emplace_back(x, y);
  std::stable_sort(all.begin(), all.end(), [&](auto s, auto t) {
    auto key = [&](std::pair<int, int> p) {
      return std::max(wrap_dist(p.first - cx, N), wrap_dist(p.second - cy, N));
    };
    return key(s) < key(t);
  });
  std::vector<int> skip;
  if (flux != 0) {
    for (auto [x, y] : all) {
      if ((x + y) % 2 == want_parity) skip.push_back(x * N + y);
      if (static_cast<int>(skip.size()) == std::abs(flux)) break;
    }
  }
  SpacePtr space = make_torus(N, skip);
  const int pts = space->size();

  std::map<std::pair<int, int>, int> idx;
  std::vector<std::pair<int, int>> kept(pts);
  for (int i = 0; i < pts; ++i) {
    const std::string& id = space->id(i);
    auto comma = id.find(',');
    int x = std::stoi(id.substr(0, comma)), y = std::stoi(id.substr(comma + 1));
    idx[{x, y}] = i;
    kept[i] = {x, y};
  }

  // east amplitude dimerized in x, north amplitude i(-1)^x: this is the
  // gap-opening term (spectrum of the flux-free operator stays away from 0)
  CMat D = CMat::Zero(pts, pts);
  auto east_amp = [](int x, int) { return x % 2 == 0 ? 1.5 : 0.5; };
  auto north_amp = [](int x, int) { return Cplx(0, 1) * Cplx(x % 2 == 0 ? 1.0 : -1.0, 0); };
  for (int i = 0; i < pts; ++i) {
    auto [x, y] = kept[i];
    auto hop = [&](int tx, int ty, Cplx amp) {
      auto it = idx.find({(tx % N + N) % N, (ty % N + N) % N});
      if (it == idx.end()) return;
      D(it->second, i) += amp;
      D(i, it->second) += std::conj(amp);
    };
    hop(x + 1, y, Cplx(east_amp(x, y), 0));
    hop(x, y + 1, north_amp(x, y));
  }

  WilsonTorus model;
  model.space = space;
  model.size = N;
  model.flux = flux;
  model.cores = skip;
  model.D.op = FilteredOperator(space, 1, std::move(D));
  model.D.grading.resize(pts);
  for (int i = 0; i < pts; ++i)
    model.D.grading[i] = static_cast<int8_t>((kept[i].first + kept[i].second) % 2 == 0 ? 1 : -1);
  model.D.validate();

  // Bott projection around (N/4, N/4), radius N/4, constant diag(0,1)
  // outside; "infinity" sits a quarter turn away from both the Bott disk
  // and the cores
  const int bx = N / 4, by = N / 4;
  const double rho = std::max(N / 4.0, 2.0);
  model.bott_center = idx.count({bx, by}) ? idx[{bx, by}] : 0;
  int ix = (3 * N) / 4, iy = N / 4;
  model.infinity_point = idx.count({ix, iy}) ? idx[{ix, iy}] : 0;

  LipschitzElement p;
  p.space = space;
  p.n = 2;
  p.scalar_part = CMat::Zero(2, 2);
  p.scalar_part(1, 1) = 1.0;
  p.values.resize(pts);
  for (int i = 0; i < pts; ++i) {
    auto [x, y] = kept[i];
    int dx = ((x - bx + N / 2) % N + N) % N - N / 2;
    int dy = ((y - by + N / 2) % N + N) % N - N / 2;
    double rr = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
    double t = std::min(rr / rho, 1.0);
    double f = std::pow(std::cos(M_PI * t / 2.0), 2);
    double g = std::sqrt(std::max(f * (1.0 - f), 0.0));
    double th = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
    Cplx ph = std::polar(1.0, bott_winding * th);
    CMat v(2, 2);
    v << f, g * std::conj(ph), g * ph, 1.0 - f;
    p.values[i] = v;
  }
  p.certify();
  model.bott = std::move(p);

  auto kc = kernel_count(model.D.plus_to_minus());
  model.spectral_gap = kc.nonzero_min;
  return model;
}

LipschitzClass bott_class(const WilsonTorus& model) {
  LipschitzClass lc;
  lc.p1 = model.bott;
  lc.p2 = model.bott;
  for (auto& v : lc.p2.values) v = model.bott.scalar_part;
  lc.p2.lipschitz_L = 0;
  lc.basepoint = model.infinity_point;
  lc.L = rat_from_double_up(std::max(lc.p1.lipschitz_L, lc.p2.lipschitz_L));
  return lc;
}

namespace {

// odd Chebyshev interpolation coefficients of fun on [-a, a]
std::vector<double> cheb_odd_coeffs(const std::function<double(double)>& fun, double a,
                                    int degree, int quad_nodes = 1024) {
  std::vector<double> c(degree + 1, 0.0);
  for (int j = 0; j <= degree; ++j) {
    double acc = 0;
    for (int k = 0; k < quad_nodes; ++k) {
      double th = M_PI * (k + 0.5) / quad_nodes;
      acc += fun(a * std::cos(th)) * std::cos(j * th);
    }
    c[j] = 2.0 * acc / quad_nodes;
  }
  c[0] *= 0.5;
  for (int j = 0; j <= degree; j += 2) c[j] = 0.0;  // enforce oddness
  return c;
}

double cheb_eval(const std::vector<double>& c, double t) {
  // Clenshaw on T_j(t), |t| <= 1
  double b1 = 0, b2 = 0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) {
    double b0 = 2.0 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace

NormalizingApproximant normalizing_approximant(const GradedOperator& d, const Rational& r,
                                               int degree_budget) {
  double propD = d.op.propagation();
  if (rat_from_double_up(degree_budget * propD) > r)
    throw std::invalid_argument("normalizing_approximant: degree_budget * prop(D) exceeds r");
  int degree = degree_budget;
  if (degree % 2 == 0) degree -= 1;
  if (degree < 1) {
    throw std::invalid_argument(
        "normalizing_approximant: budget admits no odd polynomial; flatness 1 is the floor");
  }

  // spectral data: gap above the kernel sets the smoothing scale
  Eigen::SelfAdjointEigenSolver<CMat> es(d.op.matrix(), Eigen::EigenvaluesOnly);
  double a = 1.02 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
  double gap = a;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double v = std::abs(es.eigenvalues()(i));
    if (v > 1e-10 * a) gap = std::min(gap, v);
  }
  double gamma = std::max(gap / 2.0, a * 1e-4);

  auto fun = [gamma](double t) { return t / std::sqrt(t * t + gamma * gamma); };
  auto c = cheb_odd_coeffs(fun, a, degree);

  // rescale so the certified sup on [-a, a] is <= 1
  double sup = 0;
  const int grid = 4001;
  for (int i = 0; i < grid; ++i) {
    double t = -1.0 + 2.0 * i / (grid - 1);
    sup = std::max(sup, std::abs(cheb_eval(c, t)));
  }
  sup *= (1.0 + 1e-10);
  for (auto& v : c) v /= sup;

  NormalizingApproximant na;
  na.coeffs = c;
  na.degree = degree;
  na.scale = a;
  na.sup_bound = 1.0;

  // chi(D) by the three-term recurrence on D/a
  const int n = d.op.dim();
  CMat Ds = d.op.matrix() / a;
  CMat t0 = CMat::Identity(n, n), t1 = Ds;
  CMat acc = c[0] * t0;
  if (degree >= 1) acc += c[1] * t1;
  for (int j = 2; j <= degree; ++j) {
    CMat t2 = 2.0 * (Ds * t1) - t0;
    acc += c[j] * t2;
    t0.swap(t1);
    t1.swap(t2);
  }
  na.chi_d = std::move(acc);
  na.flatness = op_norm((na.chi_d * na.chi_d - CMat::Identity(n, n)).eval());
  FilteredOperator chi_op(d.op.space(), d.op.internal_dim(), na.chi_d);
  na.propagation = chi_op.propagation();
  na.prop_bound = degree * propD;
  return na;
}

QuantitativeIndex quantitative_index(const GradedOperator& d, const ParameterTuple& params,
                                     const NormalizingApproximant& chi) {
  params.validate(/*require_L=*/false, /*require_N7=*/true);
  auto ap = d.plus_coords();
  auto bm = d.minus_coords();
  const int na = static_cast<int>(ap.size()), nb = static_cast<int>(bm.size());
  const int n = d.op.dim();

  CMat U(nb, na), V(na, nb);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < na; ++c) U(r, c) = chi.chi_d(bm[r], ap[c]);
  for (int r = 0; r < na; ++r)
    for (int c = 0; c < nb; ++c) V(r, c) = chi.chi_d(ap[r], bm[c]);

  CMat VU = V * U, UV = U * V;
  CMat Ia = CMat::Identity(na, na), Ib = CMat::Identity(nb, nb);
  // P_chi = W e11 W^-1 expanded; well-formed for rectangular U, V
  CMat P11 = (2.0 * Ia - VU) * VU;
  CMat P12 = (2.0 * Ia - VU) * V * (Ib - UV);
  CMat P21 = (Ib - UV) * U;
  CMat P22 = (Ib - UV) * (Ib - UV);

  CMat pfull = CMat::Zero(n, n);
  for (int r = 0; r < na; ++r)
    for (int c = 0; c < na; ++c) pfull(ap[r], ap[c]) = P11(r, c);
  for (int r = 0; r < na; ++r)
    for (int c = 0; c < nb; ++c) pfull(ap[r], bm[c]) = P12(r, c);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < na; ++c) pfull(bm[r], ap[c]) = P21(r, c);
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < nb; ++c) pfull(bm[r], bm[c]) = P22(r, c);

  // the W-route needs square blocks; check it on the zero-padded embedding
  const int m = std::max(na, nb);
  CMat Up = CMat::Zero(m, m), Vp = CMat::Zero(m, m);
  Up.topLeftCorner(nb, na) = U;
  Vp.topLeftCorner(na, nb) = V;
  CMat Im = CMat::Identity(m, m), Zm = CMat::Zero(m, m);
  auto two_by_two = [&](const CMat& a11, const CMat& a12, const CMat& a21, const CMat& a22) {
    CMat w(2 * m, 2 * m);
    w << a11, a12, a21, a22;
    return w;
  };
  CMat E1 = two_by_two(Im, Vp, Zm, Im);
  CMat E2 = two_by_two(Im, Zm, -Up, Im);
  CMat J = two_by_two(Zm, -Im, Im, Zm);
  CMat W = E1 * E2 * E1 * J;
  CMat E1i = two_by_two(Im, -Vp, Zm, Im);
  CMat E2i = two_by_two(Im, Zm, Up, Im);
  CMat Ji = two_by_two(Zm, Im, -Im, Zm);
  CMat Winv = Ji * E1i * E2i * E1i;
  CMat e11p = CMat::Zero(2 * m, 2 * m);
  e11p.topLeftCorner(m, m) = Im;
  CMat VUp = Vp * Up, UVp = Up * Vp;
  CMat closed_pad = CMat::Zero(2 * m, 2 * m);
  closed_pad.topLeftCorner(m, m) = (2.0 * Im - VUp) * VUp;
  closed_pad.topRightCorner(m, m) = (2.0 * Im - VUp) * Vp * (Im - UVp);
  closed_pad.bottomLeftCorner(m, m) = (Im - UVp) * Up;
  closed_pad.bottomRightCorner(m, m) = (Im - UVp) * (Im - UVp);

  QuantitativeIndex qi;
  qi.closed_form_vs_w = op_norm((W * e11p * Winv - closed_pad).eval());
  if (qi.closed_form_vs_w > 1e-10)
    throw std::runtime_error("quantitative_index: W e11 W^-1 disagrees with the closed form");

  std::vector<int8_t> sector(d.grading.begin(), d.grading.end());
  CMat s_one = CMat::Identity(1, 1), s_zero = CMat::Zero(1, 1);
  CMat opmat = pfull;
  for (int i = 0; i < n; ++i)
    if (d.grading[i] > 0) opmat(i, i) -= 1.0;
  UnitizedOperator pchi{FilteredOperator(d.op.space(), 1, std::move(opmat)), s_one, s_zero,
                        sector};
  UnitizedOperator e11 = UnitizedOperator::scalar_only(d.op.space(), 1, s_one, s_zero, sector);

  QuasiIdempotent plus{pchi, params, measure_certificate(pchi, params)};
  QuasiIdempotent minus{e11, params, measure_certificate(e11, params)};
  qi.measured_epsilon = plus.certificate.norm_e2_minus_e;
  qi.cls = KClassQuantitative{std::move(plus), std::move(minus)};
  return qi;
}

namespace {

OracleResult from_kernel_counts(const CMat& h, double rtol, double gap_factor) {
  auto kc = kernel_count(h, rtol, gap_factor);
  OracleResult r;
  long rank = std::min(h.rows(), h.cols()) - kc.dim_ker;
  r.index = (h.cols() - rank) - (h.rows() - rank);
  r.gap_ok = kc.gap_ok;
  r.zero_max = kc.zero_max;
  r.nonzero_min = kc.nonzero_min;
  r.smax = kc.smax;
  if (!r.gap_ok)
    throw std::runtime_error(
        "analytic_index_oracle: ill-separated singular values near the threshold (zero_max=" +
        std::to_string(kc.zero_max) + ", nonzero_min=" + std::to_string(kc.nonzero_min) + ")");
  return r;
}

}  // namespace

OracleResult analytic_index_oracle(const GradedOperator& d, double rtol, double gap_factor) {
  return from_kernel_counts(d.plus_to_minus(), rtol, gap_factor);
}

OracleResult analytic_index_oracle_twisted(const GradedOperator& d, const LipschitzElement& p,
                                           double rtol, double gap_factor) {
  const int pts = d.op.points();
  if (d.op.internal_dim() != 1)
    throw std::invalid_argument("twisted oracle: internal_dim 1 expected for graded models");
  // isometry onto the pointwise ranges of p
  std::vector<Eigen::VectorXcd> cols;
  std::vector<int8_t> col_grading;
  for (int x = 0; x < pts; ++x) {
    Eigen::SelfAdjointEigenSolver<CMat> es(p.values[x]);
    for (int j = 0; j < es.eigenvalues().size(); ++j) {
      double ev = es.eigenvalues()(j);
      if (ev > 0.5) {
        if (std::abs(ev - 1.0) > 1e-9)
          throw std::invalid_argument("twisted oracle: p is not projection-valued");
        Eigen::VectorXcd col = Eigen::VectorXcd::Zero(static_cast<long>(pts) * p.n);
        col.segment(static_cast<long>(x) * p.n, p.n) = es.eigenvectors().col(j);
        cols.push_back(std::move(col));
        col_grading.push_back(d.grading[x]);
      }
    }
  }
  const long rk = static_cast<long>(cols.size());
  CMat Vi(static_cast<long>(pts) * p.n, rk);
  for (long j = 0; j < rk; ++j) Vi.col(j) = cols[j];
  CMat DI = CMat::Zero(static_cast<long>(pts) * p.n, static_cast<long>(pts) * p.n);
  for (int x = 0; x < pts; ++x)
    for (int y = 0; y < pts; ++y) {
      Cplx v = d.op.matrix()(x, y);
      if (v == Cplx(0, 0)) continue;
      for (int c = 0; c < p.n; ++c) DI(x * p.n + c, y * p.n + c) = v;
    }
  CMat Tc = Vi.adjoint() * DI * Vi;
  std::vector<int> apc, bmc;
  for (long j = 0; j < rk; ++j) (col_grading[j] > 0 ? apc : bmc).push_back(static_cast<int>(j));
  CMat h(bmc.size(), apc.size());
  for (std::size_t r = 0; r < bmc.size(); ++r)
    for (std::size_t c = 0; c < apc.size(); ++c) h(r, c) = Tc(bmc[r], apc[c]);
  return from_kernel_counts(h, rtol, gap_factor);
}

OracleResult analytic_index_oracle_twisted(const GradedOperator& d, const LipschitzClass& lc,
                                           double rtol, double gap_factor) {
  OracleResult a = analytic_index_oracle_twisted(d, lc.p1, rtol, gap_factor);
  OracleResult b = analytic_index_oracle_twisted(d, lc.p2, rtol, gap_factor);
  OracleResult r = a;
  r.index = a.index - b.index;
  r.gap_ok = a.gap_ok && b.gap_ok;
  r.zero_max = std::max(a.zero_max, b.zero_max);
  r.nonzero_min = std::min(a.nonzero_min, b.nonzero_min);
  return r;
}

VanishingReport vanishing_consistency(const WilsonTorus& model, double gap,
                                      const ParameterTuple& params, int trials,
                                      std::uint64_t seed) {
  VanishingReport rep;
  rep.gap_required = gap;
  rep.gap_measured = model.spectral_gap;
  auto oracle = analytic_index_oracle(model.D);
  if (oracle.index != 0 || rep.gap_measured < gap)
    throw std::invalid_argument("vanishing_consistency: operator is not gapped at " +
                                std::to_string(gap) + " (measured " +
                                std::to_string(rep.gap_measured) + ")");

  Rational rr = rat_from_double_up(std::max(12 * model.D.op.propagation(), 1.0));
  auto chi = normalizing_approximant(model.D, rr, 11);
  auto qi = quantitative_index(model.D, params, chi);

  const int N = model.size;
  rep.all_zero = true;
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "vanishing", static_cast<std::uint64_t>(t));
    int w = rng.uniform_int(-1, 1);
    int bx = rng.uniform_int(0, N - 1), by = rng.uniform_int(0, N - 1);
    double rho = rng.uniform(std::max(2.0, N / 5.0), N / 3.0);
    // random constant unitary conjugation keeps the class honest but varied
    double thc = rng.uniform(0, 2 * M_PI);
    CMat Uc(2, 2);
    Uc << std::cos(thc), -std::sin(thc), std::sin(thc), std::cos(thc);

    LipschitzClass lc;
    lc.p1.space = model.space;
    lc.p1.n = 2;
    lc.p1.values.resize(model.space->size());
    const int pts = model.space->size();
    for (int i = 0; i < pts; ++i) {
      const std::string& id = model.space->id(i);
      auto comma = id.find(',');
      int x = std::stoi(id.substr(0, comma)), y = std::stoi(id.substr(comma + 1));
      int dx = ((x - bx + N / 2) % N + N) % N - N / 2;
      int dy = ((y - by + N / 2) % N + N) % N - N / 2;
      double rdist = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
      double tt = std::min(rdist / rho, 1.0);
      double f = std::pow(std::cos(M_PI * tt / 2.0), 2);
      double g = std::sqrt(std::max(f * (1.0 - f), 0.0));
      double th = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
      Cplx ph = std::polar(1.0, w * th);
      CMat v(2, 2);
      v << f, g * std::conj(ph), g * ph, 1.0 - f;
      lc.p1.values[i] = Uc * v * Uc.adjoint();
    }
    lc.p1.scalar_part = Uc * (CMat(2, 2) << 0, 0, 0, 1).finished() * Uc.adjoint();
    lc.p1.certify();
    lc.p2 = lc.p1;
    for (auto& v : lc.p2.values) v = lc.p1.scalar_part;
    lc.p2.lipschitz_L = 0;
    // basepoint: farthest point from the bump center
    int far = 0;
    double best = -1;
    for (int i = 0; i < pts; ++i) {
      const std::string& id = model.space->id(i);
      auto comma = id.find(',');
      int x = std::stoi(id.substr(0, comma)), y = std::stoi(id.substr(comma + 1));
      double dd = wrap_dist(x - bx, N) + wrap_dist(y - by, N);
      if (dd > best) {
        best = dd;
        far = i;
      }
    }
    lc.basepoint = far;
    lc.L = rat_from_double_up(lc.p1.lipschitz_L);

    auto pr = pair_to_integer(qi.cls, lc, params, /*allow_override=*/true);
    auto tw = analytic_index_oracle_twisted(model.D, lc);
    VanishingTrial vt{pr.value, tw.index, w, pr.value == 0 && tw.index == 0};
    rep.all_zero = rep.all_zero && vt.pass;
    rep.trials.push_back(vt);
  }
  return rep;
}

}  // namespace quantk
