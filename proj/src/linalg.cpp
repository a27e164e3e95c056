#include "quantk/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <string>

namespace quantk {

double op_norm(const CMat& a, int dense_cutoff) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= dense_cutoff) {
    Eigen::JacobiSVD<CMat> svd(a);
    return svd.singularValues()(0);
  }
  auto apply = [&](const Eigen::VectorXcd& v) { return (a * v).eval(); };
  auto apply_adj = [&](const Eigen::VectorXcd& v) { return (a.adjoint() * v).eval(); };
  return op_norm_matvec(apply, apply_adj, static_cast<int>(a.cols()));
}

double op_norm_matvec(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                      const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adj,
                      int dim, int iters, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Cplx(g(eng), g(eng));
  v.normalize();
  double sigma = 0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = apply_adj(apply(v));
    double nw = w.norm();
    if (nw == 0) return 0;
    double next = std::sqrt(nw);
    v = w / nw;
    if (it > 8 && std::abs(next - sigma) <= 1e-12 * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

KernelCount kernel_count(const CMat& a, double rtol, double gap_factor) {
  Eigen::JacobiSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  KernelCount kc{0, true, 0.0, std::numeric_limits<double>::infinity(), 0.0};
  if (s.size() == 0) return kc;
  kc.smax = s(0);
  double thr = rtol * std::max(kc.smax, 1e-300);
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) <= thr) {
      kc.dim_ker++;
      kc.zero_max = std::max(kc.zero_max, s(i));
    } else {
      kc.nonzero_min = std::min(kc.nonzero_min, s(i));
    }
  }
  if (kc.dim_ker > 0 && kc.nonzero_min < gap_factor * std::max(kc.zero_max, 1e-300))
    kc.gap_ok = false;
  return kc;
}

IterationResult idempotent_iterate(const CMat& e, double tol, int maxit) {
  IterationResult r;
  r.projector = e;
  r.iterations = 0;
  r.converged = false;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < maxit; ++it) {
    CMat e2 = r.projector * r.projector;
    double defect = op_norm(e2 - r.projector, 512);
    r.final_defect = defect;
    r.iterations = it;
    if (defect <= tol) {
      r.converged = true;
      return r;
    }
    if (defect > 10 * last && defect > 1) break;  // diverged
    last = defect;
    r.projector = 3.0 * e2 - 2.0 * (e2 * r.projector);
  }
  // one more defect measurement
  CMat e2 = r.projector * r.projector;
  r.final_defect = op_norm(e2 - r.projector, 512);
  r.converged = r.final_defect <= tol;
  return r;
}

CMat riesz_contour(const CMat& e, int nodes, double radius) {
  const int n = static_cast<int>(e.rows());
  CMat acc = CMat::Zero(n, n);
  CMat id = CMat::Identity(n, n);
  for (int j = 0; j < nodes; ++j) {
    double th = 2.0 * M_PI * j / nodes;
    Cplx w = std::polar(1.0, th);
    Cplx z = Cplx(1.0, 0.0) + radius * w;
    // (1/2πi) ∮ (z-e)^{-1} dz, trapezoid on the circle
    acc += w * (z * id - e).partialPivLu().solve(id);
  }
  return (radius / nodes) * acc;
}

SpectralCount count_near_one(const CMat& e, double defect_gate, double int_tol) {
  SpectralCount sc{};
  CMat e2 = e * e;
  sc.defect_in = op_norm(e2 - e, 768);
  if (sc.defect_in >= defect_gate) {
    sc.ok = false;
    sc.note = "defect " + std::to_string(sc.defect_in) + " >= gate " +
              std::to_string(defect_gate);
    return sc;
  }
  auto it = idempotent_iterate(e);
  if (!it.converged) {
    sc.ok = false;
    sc.note = "iteration did not converge (defect " + std::to_string(it.final_defect) + ")";
    return sc;
  }
  Cplx tr = it.projector.trace();
  sc.trace_real = tr.real();
  sc.count = std::lround(tr.real());
  sc.trace_drift = std::abs(tr.real() - static_cast<double>(sc.count)) + std::abs(tr.imag());
  sc.ok = sc.trace_drift <= int_tol;
  if (!sc.ok) sc.note = "trace not near an integer: " + std::to_string(sc.trace_real);
  return sc;
}

}  // namespace quantk
