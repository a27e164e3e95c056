#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace quantk {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Largest singular value.  Dense SVD below `dense_cutoff`, otherwise power
// iteration on A*A with a certified relative residual.
double op_norm(const CMat& a, int dense_cutoff = 256);

// Power-iteration norm of an operator given only as a matvec (for elements
// held in factored form).
double op_norm_matvec(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                      const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adj,
                      int dim, int iters = 60, unsigned seed = 12345);

struct KernelCount {
  int dim_ker;        // singular values below rtol * smax
  bool gap_ok;        // zero/nonzero separated by >= gap_factor
  double zero_max;    // largest "zero" singular value
  double nonzero_min; // smallest "nonzero" singular value
  double smax;
};

// Kernel dimension by singular-value counting; refuses (gap_ok = false) when
// zero and nonzero candidates are not separated by `gap_factor`.
KernelCount kernel_count(const CMat& a, double rtol = 1e-8, double gap_factor = 100.0);

// Cubic iteration e -> 3e^2 - 2e^3; converges quadratically to the Riesz
// projector of the 1-cluster whenever ||e^2-e|| < 1/4.
struct IterationResult {
  CMat projector;
  double final_defect;
  int iterations;
  bool converged;
};
IterationResult idempotent_iterate(const CMat& e, double tol = 1e-13, int maxit = 80);

// Riesz projector via trapezoid quadrature of (1/2πi)∮ (z-e)^{-1} dz on
// |z-1| = radius.  The cross-check oracle for the cubic iteration.
CMat riesz_contour(const CMat& e, int nodes = 256, double radius = 0.5);

// Number of eigenvalues in the 1-cluster = trace of the converged Riesz
// projector, gated on an honest integer (|trace - round| <= int_tol).
struct SpectralCount {
  long count;
  double trace_real;
  double trace_drift;  // |trace - count| + |imag|
  double defect_in;    // measured ||e^2-e|| of the input
  bool ok;
  std::string note;
};
SpectralCount count_near_one(const CMat& e, double defect_gate = 0.25,
                             double int_tol = 1e-6);

}  // namespace quantk
