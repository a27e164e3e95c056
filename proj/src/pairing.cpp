#include "quantk/pairing.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace quantk {

namespace {

// assemble a 4x4 block matrix of dense operators into the point-major
// layout of a FilteredOperator with internal dimension 4k
CMat assemble4(const std::array<std::array<const CMat*, 4>, 4>& blocks, int pts, int k) {
  const int K = 4 * k;
  CMat out = CMat::Zero(static_cast<long>(pts) * K, static_cast<long>(pts) * K);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CMat* b = blocks[i][j];
      if (!b) continue;
      for (int x = 0; x < pts; ++x)
        for (int y = 0; y < pts; ++y)
          out.block(x * K + i * k, y * K + j * k, k, k) = b->block(x * k, y * k, k, k);
    }
  return out;
}

CMat scalar4(const std::array<std::array<const CMat*, 4>, 4>& blocks, int k) {
  CMat out = CMat::Zero(4 * k, 4 * k);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (blocks[i][j]) out.block(i * k, j * k, k, k) = *blocks[i][j];
  return out;
}

UnitizedOperator make_unitized(const UnitizedOperator& like, CMat dense, CMat sp, CMat sm) {
  const int K = static_cast<int>(sp.rows());
  CMat opmat = std::move(dense);
  for (int x = 0; x < like.op.points(); ++x)
    opmat.block(x * K, x * K, K, K) -= (like.sector_of(x) > 0 ? sp : sm);
  UnitizedOperator u{FilteredOperator(like.op.space(), K, std::move(opmat)), std::move(sp),
                     std::move(sm), like.sector};
  return u;
}

}  // namespace

UnitizedOperator z_matrix(const UnitizedOperator& beta) {
  const int pts = beta.op.points(), k = beta.internal_dim();
  CMat b = beta.dense();
  CMat one = CMat::Identity(b.rows(), b.cols());
  CMat omb = one - b;
  CMat zero;  // absent block
  std::array<std::array<const CMat*, 4>, 4> blk = {{{&b, nullptr, &omb, nullptr},
                                                    {&omb, nullptr, nullptr, &b},
                                                    {nullptr, nullptr, &b, &omb},
                                                    {nullptr, &one, nullptr, nullptr}}};
  CMat dense = assemble4(blk, pts, k);
  CMat sp = CMat::Identity(k, k), idk = CMat::Identity(k, k);
  CMat bp = beta.scalar_plus, bm = beta.scalar_minus;
  CMat ombp = idk - bp, ombm = idk - bm;
  std::array<std::array<const CMat*, 4>, 4> sblkp = {{{&bp, nullptr, &ombp, nullptr},
                                                      {&ombp, nullptr, nullptr, &bp},
                                                      {nullptr, nullptr, &bp, &ombp},
                                                      {nullptr, &idk, nullptr, nullptr}}};
  std::array<std::array<const CMat*, 4>, 4> sblkm = {{{&bm, nullptr, &ombm, nullptr},
                                                      {&ombm, nullptr, nullptr, &bm},
                                                      {nullptr, nullptr, &bm, &ombm},
                                                      {nullptr, &idk, nullptr, nullptr}}};
  UnitizedOperator like{zero_operator(beta.op.space(), 4 * k), CMat::Zero(4 * k, 4 * k),
                        CMat::Zero(4 * k, 4 * k), beta.sector};
  return make_unitized(like, std::move(dense), scalar4(sblkp, k), scalar4(sblkm, k));
}

UnitizedOperator y_matrix(const UnitizedOperator& alpha, const UnitizedOperator& beta) {
  const int pts = beta.op.points(), k = beta.internal_dim();
  CMat a = alpha.dense();
  CMat omb = CMat::Identity(a.rows(), a.cols()) - beta.dense();
  std::array<std::array<const CMat*, 4>, 4> blk{};
  blk[0][0] = &a;
  blk[1][1] = &omb;
  CMat dense = assemble4(blk, pts, k);
  CMat idk = CMat::Identity(k, k);
  CMat ap = alpha.scalar_plus, am = alpha.scalar_minus;
  CMat ombp = idk - beta.scalar_plus, ombm = idk - beta.scalar_minus;
  std::array<std::array<const CMat*, 4>, 4> sp{}, sm{};
  sp[0][0] = &ap;
  sp[1][1] = &ombp;
  sm[0][0] = &am;
  sm[1][1] = &ombm;
  UnitizedOperator like{zero_operator(beta.op.space(), 4 * k), CMat::Zero(4 * k, 4 * k),
                        CMat::Zero(4 * k, 4 * k), beta.sector};
  return make_unitized(like, std::move(dense), scalar4(sp, k), scalar4(sm, k));
}

namespace {

// the ten nonzero entries of Z^T Y Z as words in a, b
struct DiffBlocks {
  CMat d11, d13, d14, d31, d33, d41, d44;
};

DiffBlocks diff_blocks(const CMat& a, const CMat& b) {
  CMat one = CMat::Identity(a.rows(), a.cols());
  CMat omb = one - b;
  CMat omb2 = omb * omb;
  DiffBlocks d;
  d.d11 = b * a * b + omb2 * omb;
  d.d13 = b * a * omb;
  d.d14 = omb2 * b;
  d.d31 = omb * a * b;
  d.d33 = omb * a * omb;
  d.d41 = b * omb2;
  d.d44 = b * omb * b;
  return d;
}

}  // namespace

UnitizedOperator closed_form_difference(const UnitizedOperator& alpha,
                                        const UnitizedOperator& beta) {
  const int pts = beta.op.points(), k = beta.internal_dim();
  DiffBlocks db = diff_blocks(alpha.dense(), beta.dense());
  std::array<std::array<const CMat*, 4>, 4> blk{};
  blk[0][0] = &db.d11;
  blk[0][2] = &db.d13;
  blk[0][3] = &db.d14;
  blk[2][0] = &db.d31;
  blk[2][2] = &db.d33;
  blk[3][0] = &db.d41;
  blk[3][3] = &db.d44;
  CMat dense = assemble4(blk, pts, k);

  auto scal = [&](const CMat& sa, const CMat& sb) {
    CMat one = CMat::Identity(k, k);
    CMat omb = one - sb;
    CMat omb2 = omb * omb;
    CMat s11 = sb * sa * sb + omb2 * omb;
    CMat s13 = sb * sa * omb;
    CMat s14 = omb2 * sb;
    CMat s31 = omb * sa * sb;
    CMat s33 = omb * sa * omb;
    CMat s41 = sb * omb2;
    CMat s44 = sb * omb * sb;
    std::array<std::array<const CMat*, 4>, 4> sblk{};
    sblk[0][0] = &s11;
    sblk[0][2] = &s13;
    sblk[0][3] = &s14;
    sblk[2][0] = &s31;
    sblk[2][2] = &s33;
    sblk[3][0] = &s41;
    sblk[3][3] = &s44;
    return scalar4(sblk, k);
  };
  UnitizedOperator like{zero_operator(beta.op.space(), 4 * k), CMat::Zero(4 * k, 4 * k),
                        CMat::Zero(4 * k, 4 * k), beta.sector};
  return make_unitized(like, std::move(dense), scal(alpha.scalar_plus, beta.scalar_plus),
                       scal(alpha.scalar_minus, beta.scalar_minus));
}

DifferenceReport difference_construction(const QuasiIdempotent& alpha,
                                         const QuasiIdempotent& beta) {
  UnitizedOperator diff = sub(alpha.element, beta.element);
  if (!diff.scalar_part_is_zero(1e-12))
    throw std::invalid_argument("difference_construction: alpha - beta has nonzero scalar part");

  UnitizedOperator Z = z_matrix(beta.element);
  UnitizedOperator Y = y_matrix(alpha.element, beta.element);
  // block transpose of Z: entries stay untransposed
  const int pts = beta.element.op.points(), k = beta.element.internal_dim();
  CMat zd = Z.dense();
  CMat ztd = CMat::Zero(zd.rows(), zd.cols());
  const int K = 4 * k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int x = 0; x < pts; ++x)
        for (int y = 0; y < pts; ++y)
          ztd.block(x * K + i * k, y * K + j * k, k, k) =
              zd.block(x * K + j * k, y * K + i * k, k, k);

  CMat product = ztd * Y.dense() * zd;
  UnitizedOperator closed = closed_form_difference(alpha.element, beta.element);

  DifferenceReport rep;
  rep.closed_form_agreement = op_norm(product - closed.dense());
  rep.ztz_minus_identity = op_norm(ztd * zd - CMat::Identity(zd.rows(), zd.cols()));

  Triple in{alpha.params.epsilon, alpha.params.r, alpha.params.N};
  Triple out = difference_transform(in);
  ParameterTuple budget{out.epsilon, out.r, out.N, alpha.params.L};
  rep.result = QuasiIdempotent{closed, budget, measure_certificate(closed, budget)};
  return rep;
}

QuasiIdempotent basic_product(const QuasiIdempotent& P, const LipschitzElement& p) {
  const int m = P.element.internal_dim();
  const int n = p.n;
  UnitizedOperator amplified = amplify(P.element, n);

  // I_m ⊗ p with the constant-at-infinity part as scalar
  LipschitzElement p0 = p;
  for (auto& v : p0.values) v -= p.scalar_part;
  FilteredOperator embedded = embed(p0, m);
  auto kron_id_left = [&](const CMat& s) {
    CMat out = CMat::Zero(static_cast<long>(m) * s.rows(), static_cast<long>(m) * s.cols());
    for (int b = 0; b < m; ++b) out.block(b * s.rows(), b * s.cols(), s.rows(), s.cols()) = s;
    return out;
  };
  UnitizedOperator up{std::move(embedded), kron_id_left(p.scalar_part),
                      kron_id_left(p.scalar_part), amplified.sector};
  UnitizedOperator prod = mul(amplified, up);

  Rational L = rat_from_double_up(p.lipschitz_L);
  Triple budget = basic_product_transform(Triple{P.params.epsilon, P.params.r, P.params.N}, L);
  ParameterTuple bp{budget.epsilon, budget.r, budget.N, L};
  return QuasiIdempotent{prod, bp, measure_certificate(prod, bp)};
}

CMat difference_spectral_core(const CMat& alpha, const CMat& beta) {
  const long s = alpha.rows();
  CMat one = CMat::Identity(s, s);
  CMat u = beta * beta - beta;
  CMat core(2 * s, 2 * s);
  core.topLeftCorner(s, s) = alpha * (one + 2.0 * u);
  core.topRightCorner(s, s) = -(alpha * u);
  core.bottomLeftCorner(s, s) = -((one - beta) * u);
  core.bottomRightCorner(s, s) = (one - beta) * (one + 2.0 * u);
  return core;
}

namespace {

struct OuterFactored {
  // d(P1', P2') = Z^T Y Z held through its factors
  const CMat& a;  // P1' dense
  const CMat& b;  // P2' dense
  CMat omb;       // 1 - b
  long s;

  explicit OuterFactored(const CMat& p1, const CMat& p2) : a(p1), b(p2), s(p1.rows()) {
    omb = CMat::Identity(s, s) - b;
  }
  using Vec = Eigen::VectorXcd;

  Vec apply(const Vec& v) const {
    // chunks v = (v1,v2,v3,v4)
    auto c = [&](int i) { return v.segment(i * s, s); };
    // w = Z v
    Vec w(4 * s);
    w.segment(0, s) = b * c(0) + omb * c(2);
    w.segment(s, s) = omb * c(0) + b * c(3);
    w.segment(2 * s, s) = b * c(2) + omb * c(3);
    w.segment(3 * s, s) = c(1);
    // y = Y w
    Vec y = Vec::Zero(4 * s);
    y.segment(0, s) = a * w.segment(0, s);
    y.segment(s, s) = omb * w.segment(s, s);
    // out = Z^T y  (block transpose, entries unchanged)
    Vec out(4 * s);
    out.segment(0, s) = b * y.segment(0, s) + omb * y.segment(s, s);
    out.segment(s, s) = y.segment(3 * s, s);
    out.segment(2 * s, s) = omb * y.segment(0, s) + b * y.segment(2 * s, s);
    out.segment(3 * s, s) = b * y.segment(s, s) + omb * y.segment(2 * s, s);
    return out;
  }
  Vec apply_adj(const Vec& v) const {
    // adjoint of apply: conjugate-transpose of the realized matrix
    auto c = [&](int i) { return v.segment(i * s, s); };
    CMat bh = b.adjoint(), ombh = omb.adjoint(), ah = a.adjoint();
    // (Z^T)^H chunks
    Vec y(4 * s);
    y.segment(0, s) = bh * c(0) + ombh * c(2);
    y.segment(s, s) = ombh * c(0) + bh * c(3);
    y.segment(2 * s, s) = bh * c(2) + ombh * c(3);
    y.segment(3 * s, s) = c(1);
    Vec w = Vec::Zero(4 * s);
    w.segment(0, s) = ah * y.segment(0, s);
    w.segment(s, s) = ombh * y.segment(s, s);
    Vec out(4 * s);
    out.segment(0, s) = bh * w.segment(0, s) + ombh * w.segment(s, s);
    out.segment(s, s) = w.segment(3 * s, s);
    out.segment(2 * s, s) = ombh * w.segment(0, s) + bh * w.segment(2 * s, s);
    out.segment(3 * s, s) = bh * w.segment(s, s) + ombh * w.segment(2 * s, s);
    return out;
  }
};

}  // namespace

PairingOutcome pair_classes(const KClassQuantitative& qc, const LipschitzClass& lc,
                            bool materialize) {
  // ideal-side checks for [p1]-[p2]
  if (op_norm(lc.p1.scalar_part - lc.p2.scalar_part) > 1e-12)
    throw std::invalid_argument("pair_classes: p1 and p2 must share their scalar part");
  if (op_norm(lc.p1.values[lc.basepoint] - lc.p2.values[lc.basepoint]) > 1e-10)
    throw std::invalid_argument("pair_classes: p1 - p2 must vanish at the basepoint");
  if (!qc.plus.element.same_scalar_part(qc.minus.element, 1e-12))
    throw std::invalid_argument("pair_classes: scalar parts of the quantitative class differ");

  PairingOutcome out;
  auto push = [&](const std::string& name, const QuasiIdempotent& q) {
    out.stages.push_back(StageCertificate{name, q.certificate, q.params});
  };

  QuasiIdempotent b11 = basic_product(qc.plus, lc.p1);
  QuasiIdempotent b12 = basic_product(qc.plus, lc.p2);
  QuasiIdempotent b21 = basic_product(qc.minus, lc.p1);
  QuasiIdempotent b22 = basic_product(qc.minus, lc.p2);
  push("product_plus_p1", b11);
  push("product_plus_p2", b12);
  push("product_minus_p1", b21);
  push("product_minus_p2", b22);

  DifferenceReport d1 = difference_construction(b11, b12);
  DifferenceReport d2 = difference_construction(b21, b22);
  push("first_difference_plus", d1.result);
  push("first_difference_minus", d2.result);

  const CMat a = d1.result.element.dense();
  const CMat b = d2.result.element.dense();
  const long s4 = a.rows();

  // spectral count of the outer element through the half-size core
  CMat b_sq = b * b;
  double b_defect = op_norm(b_sq - b);
  long count1;
  if (b_defect <= 1e-10) {
    // exact beta slot: d is an exact similarity of diag(a, 1-b, 0, 0)
    auto ca = count_near_one(a);
    if (!ca.ok) throw std::runtime_error("pairing: count on P1' failed: " + ca.note);
    double trb = b.trace().real();
    long rank_b = std::lround(trb);
    if (std::abs(trb - static_cast<double>(rank_b)) > 1e-7)
      throw std::runtime_error("pairing: exact idempotent with non-integer trace");
    count1 = ca.count + (s4 - rank_b);
    out.reduced_path = true;
  } else {
    auto cc = count_near_one(difference_spectral_core(a, b));
    if (!cc.ok) throw std::runtime_error("pairing: outer spectral count failed: " + cc.note);
    count1 = cc.count;
    out.reduced_path = false;
  }
  out.count1_plus = count1;
  // reference idempotent: e_{1,1} pattern of the 4x4 outer structure
  // tensored over the inner block; rank = one of the four outer slots = s4
  out.trace_reference = s4;

  Triple tin{d1.result.params.epsilon, d1.result.params.r, d1.result.params.N};
  Triple tout = difference_transform(tin);
  ParameterTuple outer_budget{tout.epsilon, tout.r, tout.N, qc.plus.params.L};

  ParameterTuple ref_budget = outer_budget;
  const int K = d1.result.element.internal_dim();  // 4 m n
  CMat refp = CMat::Zero(4 * K, 4 * K);
  refp.topLeftCorner(K, K) = CMat::Identity(K, K);
  UnitizedOperator ref = UnitizedOperator::scalar_only(
      d1.result.element.op.space(), 4 * K, refp, refp, d1.result.element.sector);

  if (materialize) {
    DifferenceReport douter = difference_construction(d1.result, d2.result);
    push("outer_difference", douter.result);
    QuasiIdempotent minus{ref, ref_budget, measure_certificate(ref, ref_budget)};
    out.cls = KClassQuantitative{douter.result, std::move(minus)};
  } else {
    // factored certificates: norms by power iteration on the factors,
    // propagation by the filtration bound on length-3 words
    OuterFactored f(a, b);
    const long dim = 4 * s4;
    Certificate cert;
    auto ap = [&](const Eigen::VectorXcd& v) { return f.apply(v); };
    auto apH = [&](const Eigen::VectorXcd& v) { return f.apply_adj(v); };
    cert.norm_e = op_norm_matvec(ap, apH, static_cast<int>(dim));
    auto ap1 = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return v - f.apply(v); };
    auto ap1H = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return v - f.apply_adj(v); };
    cert.norm_1_minus_e = op_norm_matvec(ap1, ap1H, static_cast<int>(dim));
    auto apd = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      return f.apply(f.apply(v)) - f.apply(v);
    };
    auto apdH = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
      return f.apply_adj(f.apply_adj(v)) - f.apply_adj(v);
    };
    cert.norm_e2_minus_e = op_norm_matvec(apd, apdH, static_cast<int>(dim));
    cert.propagation =
        2.0 * d2.result.element.propagation() + d1.result.element.propagation();
    cert.propagation = std::max(cert.propagation, 3.0 * d2.result.element.propagation());
    cert.propagation_is_bound = true;
    cert.valid = rat_from_double_up(cert.norm_e2_minus_e) < outer_budget.epsilon &&
                 rat_from_double_up(cert.propagation) <= outer_budget.r &&
                 rat_from_double_up(std::max(cert.norm_e, cert.norm_1_minus_e)) <=
                     outer_budget.N;
    out.stages.push_back(StageCertificate{"outer_difference", cert, outer_budget});
  }
  return out;
}

PairingReport pair_to_integer(const KClassQuantitative& qc, const LipschitzClass& lc,
                              const ParameterTuple& params, bool allow_override) {
  PairingReport rep;
  rep.pairable = is_pairable(params);
  rep.pairable_lhs = rat_str(pairable_lhs(params));
  rep.pairable_rhs = rat_str(pairable_rhs(params));
  rep.override_used = !rep.pairable && allow_override;
  rep.derived = derived_params(params);
  if (!rep.pairable && !allow_override)
    throw NonPairableError("parameters not pairable: 2^6 r N^2 L + eps = " + rep.pairable_lhs +
                           " >= 2^-68 N^-16 = " + rep.pairable_rhs);

  PairingOutcome po = pair_classes(qc, lc, /*materialize=*/false);
  rep.stages = po.stages;
  rep.value = po.count1_plus - po.trace_reference;
  return rep;
}

}  // namespace quantk
