#include "quantk/quasi.hpp"

#include <cmath>
#include <stdexcept>

namespace quantk {

Certificate measure_certificate(const UnitizedOperator& e, const ParameterTuple& p) {
  Certificate c;
  CMat d = e.dense();
  c.norm_e2_minus_e = op_norm(d * d - d);
  c.propagation = e.propagation();
  c.norm_e = op_norm(d);
  CMat one = CMat::Identity(d.rows(), d.cols());
  c.norm_1_minus_e = op_norm(one - d);
  c.valid = rat_from_double_up(c.norm_e2_minus_e) < p.epsilon &&
            rat_from_double_up(c.propagation) <= p.r &&
            rat_from_double_up(std::max(c.norm_e, c.norm_1_minus_e)) <= p.N;
  return c;
}

QuasiIdempotent validate_quasiidempotent(UnitizedOperator e, ParameterTuple p) {
  p.validate();
  Certificate c = measure_certificate(e, p);
  return QuasiIdempotent{std::move(e), std::move(p), c};
}

KappaReport kappa(const CMat& e) {
  CMat e2 = e * e;
  double defect = op_norm(e2 - e);
  if (defect >= 0.25)
    throw std::domain_error("kappa: ||e^2-e|| = " + std::to_string(defect) +
                            " >= 1/4; spectrum need not split");
  auto it = idempotent_iterate(e, 5e-13, 80);
  if (!it.converged)
    throw std::runtime_error("kappa: iteration stalled at defect " +
                             std::to_string(it.final_defect));
  KappaReport rep;
  rep.idempotent = it.projector;
  rep.defect = it.final_defect;
  rep.iterations = it.iterations;
  rep.commutator_with_e = op_norm(rep.idempotent * e - e * rep.idempotent);
  return rep;
}

KappaReport kappa(const QuasiIdempotent& q) { return kappa(q.element.dense()); }

ClassRankReport class_rank(const KClassQuantitative& c, double int_tol) {
  if (!c.plus.element.same_scalar_part(c.minus.element, 1e-12))
    throw std::invalid_argument("class_rank: scalar parts of plus and minus differ");
  auto kp = kappa(c.plus);
  auto km = kappa(c.minus);
  Cplx gap = kp.idempotent.trace() - km.idempotent.trace();
  double raw = gap.real();
  long r = std::lround(raw);
  double drift = std::abs(raw - static_cast<double>(r)) + std::abs(gap.imag());
  if (drift > int_tol)
    throw std::runtime_error("class_rank: trace gap " + std::to_string(raw) +
                             " not within " + std::to_string(int_tol) + " of an integer");
  return ClassRankReport{r, drift};
}

SmoothingReport smooth_lipschitz_projection(const LipschitzElement& p, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("smoothing: lambda must be > 0");
  // self-adjoint approximant
  LipschitzElement f = p;
  for (auto& v : f.values) v = 0.5 * (v + v.adjoint().eval());
  f.scalar_part = 0.5 * (f.scalar_part + f.scalar_part.adjoint().eval());

  SmoothingReport rep;
  rep.input_defect = 0;
  for (const auto& v : f.values) rep.input_defect = std::max(rep.input_defect, op_norm(v * v - v));
  // the proof's budget: eps(3+eps) <= 1/16, delta_eps = sqrt of the defect
  if (rep.input_defect > 1.0 / 16.0)
    throw std::domain_error("smoothing: defect " + std::to_string(rep.input_defect) +
                            " exceeds 1/16; spectral cut not guaranteed");
  rep.delta_eps = std::sqrt(rep.input_defect);
  double denom = 1.0 - 2.0 * rep.delta_eps;
  rep.bound_sharp = 2.0 * p.lipschitz_L / (denom * denom);
  if (rep.bound_sharp > 2.0 * p.lipschitz_L + lambda)
    throw std::domain_error("smoothing: lambda too small; achievable Lipschitz bound is " +
                            std::to_string(rep.bound_sharp));

  rep.output = f;
  rep.output_defect = 0;
  rep.distance_to_input = 0;
  for (std::size_t x = 0; x < f.values.size(); ++x) {
    auto kp = kappa(f.values[x]);
    rep.output.values[x] = 0.5 * (kp.idempotent + kp.idempotent.adjoint().eval());
    rep.output_defect = std::max(rep.output_defect, kp.defect);
    rep.distance_to_input =
        std::max(rep.distance_to_input, op_norm(rep.output.values[x] - p.values[x]));
  }
  {
    auto kp = kappa(CMat(f.scalar_part));
    rep.output.scalar_part = 0.5 * (kp.idempotent + kp.idempotent.adjoint().eval());
  }
  rep.output.certify();
  rep.output_lipschitz = rep.output.lipschitz_L;
  rep.pass = rep.output_defect <= 1e-10 &&
             rep.output_lipschitz <= 2.0 * p.lipschitz_L + lambda + 1e-12 &&
             rep.output_lipschitz <= rep.bound_sharp + 1e-12 && rep.distance_to_input < 1.0;
  return rep;
}

}  // namespace quantk
