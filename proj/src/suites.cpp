#include "quantk/suites.hpp"

#include "quantk/index_models.hpp"
#include "quantk/nerve.hpp"
#include "quantk/pairing.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace quantk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Json SuiteReport::to_json() const {
  Json j = report_envelope("suite-report");
  j["suite"] = suite;
  j["seed"] = seed;
  j["trials"] = trials;
  j["failures"] = failures;
  j["verdict"] = pass ? "pass" : "fail";
  j["config"] = config;
  j["results"] = results;
  j["elapsed_seconds"] = elapsed_seconds;
  return j;
}

SpacePtr random_point_cloud_space(TrialRng& rng, int min_pts, int max_pts) {
  int n = rng.uniform_int(min_pts, max_pts);
  // L1 point cloud in the plane; distinct coordinates keep distances positive
  std::vector<std::pair<double, double>> pts;
  std::set<long long> taken;
  while (static_cast<int>(pts.size()) < n) {
    double x = rng.uniform(0, 10), y = rng.uniform(0, 10);
    long long key = static_cast<long long>(x * 1e6) * 10000000 + static_cast<long long>(y * 1e6);
    if (taken.count(key)) continue;
    taken.insert(key);
    pts.emplace_back(x, y);
  }
  std::vector<std::string> ids;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    ids.push_back("p" + std::to_string(i));
    for (int j = 0; j < n; ++j)
      d(i, j) = std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second);
  }
  return build_metric_space(std::move(ids), std::move(d));
}

FilteredOperator random_banded_operator(SpacePtr space, int k, double radius, TrialRng& rng) {
  const int pts = space->size();
  CMat m = CMat::Zero(static_cast<long>(pts) * k, static_cast<long>(pts) * k);
  for (int x = 0; x < pts; ++x)
    for (int y = 0; y < pts; ++y) {
      if (space->d(x, y) > radius) continue;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) m(x * k + a, y * k + b) = rng.cgauss();
    }
  CMat scaled = m / std::max(op_norm(m), 1e-12);
  return FilteredOperator(std::move(space), k, std::move(scaled));
}

LipschitzElement random_lipschitz_element(SpacePtr space, int n, TrialRng& rng,
                                          bool real_valued) {
  const int pts = space->size();
  LipschitzElement f;
  f.space = space;
  f.n = n;
  f.scalar_part = CMat::Zero(n, n);
  f.values.assign(pts, CMat::Zero(n, n));
  int bumps = rng.uniform_int(2, 4);
  for (int c = 0; c < bumps; ++c) {
    int center = rng.uniform_int(0, pts - 1);
    double width = rng.uniform(1.0, 6.0);
    CMat coeff(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        coeff(i, j) = real_valued ? Cplx(rng.gauss(), 0) : rng.cgauss();
    for (int x = 0; x < pts; ++x) {
      double bump = std::max(0.0, 1.0 - space->d(x, center) / width);
      f.values[x] += bump * coeff;
    }
  }
  f.certify();
  return f;
}

UnitizedOperator random_quasiidempotent(SpacePtr space, int k, double target_defect,
                                        double radius, TrialRng& rng) {
  const int pts = space->size();
  const long dim = static_cast<long>(pts) * k;
  // exact idempotent, block diagonal over nearby-point clusters so the
  // propagation stays inside `radius`
  CMat e0 = CMat::Zero(dim, dim);
  std::vector<int> order(pts);
  for (int i = 0; i < pts; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<char> used(pts, 0);
  for (int idx = 0; idx < pts; ++idx) {
    int x = order[idx];
    if (used[x]) continue;
    std::vector<int> cluster{x};
    used[x] = 1;
    for (int y = 0; y < pts && cluster.size() < 3; ++y)
      if (!used[y] && space->d(x, y) <= radius) {
        cluster.push_back(y);
        used[y] = 1;
      }
    const int cdim = static_cast<int>(cluster.size()) * k;
    CMat s = CMat::Identity(cdim, cdim);
    for (int i = 0; i < cdim; ++i)
      for (int j = 0; j < cdim; ++j) s(i, j) += 0.3 * rng.cgauss();
    CMat diag = CMat::Zero(cdim, cdim);
    for (int i = 0; i < cdim; ++i) diag(i, i) = rng.uniform(0, 1) < 0.5 ? 1.0 : 0.0;
    CMat blk = s * diag * s.inverse();
    for (std::size_t ci = 0; ci < cluster.size(); ++ci)
      for (std::size_t cj = 0; cj < cluster.size(); ++cj)
        e0.block(cluster[ci] * k, cluster[cj] * k, k, k) =
            blk.block(ci * k, cj * k, k, k);
  }
  // banded perturbation scaled to the requested defect
  CMat pert = CMat::Zero(dim, dim);
  for (int x = 0; x < pts; ++x)
    for (int y = 0; y < pts; ++y) {
      if (space->d(x, y) > radius) continue;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) pert(x * k + a, y * k + b) = rng.cgauss();
    }
  pert /= std::max(op_norm(pert), 1e-12);
  double lo = 0, hi = 1.0;
  CMat best = e0;
  for (int iter = 0; iter < 24; ++iter) {
    double mid = 0.5 * (lo + hi);
    CMat cand = e0 + mid * pert;
    double defect = op_norm((cand * cand - cand).eval());
    if (defect <= target_defect) {
      best = cand;
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return UnitizedOperator::from_operator(FilteredOperator(space, k, std::move(best)));
}

// ---------------------------------------------------------------------------
// filtration laws

SuiteReport suite_filtration(int trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "filtration";
  rep.seed = seed;
  rep.trials = trials;
  rep.results = Json::array();
  rep.config = {{"tolerance", "prop comparisons use the operator prop_tolerance"}};
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "filtration", t);
    SpacePtr sp = random_point_cloud_space(rng, 6, 20);
    int k = rng.uniform_int(1, 2);
    double r1 = rng.uniform(1, 5), r2 = rng.uniform(1, 5);
    FilteredOperator a = random_banded_operator(sp, k, r1, rng);
    FilteredOperator b = random_banded_operator(sp, k, r2, rng);
    FilteredOperator sum = a.with_matrix(a.matrix() + b.matrix());
    FilteredOperator prod = a.with_matrix(a.matrix() * b.matrix());
    FilteredOperator adj = a.with_matrix(a.matrix().adjoint());
    FilteredOperator amp = amplify(a, rng.uniform_int(1, 3));
    // measured propagations obey the filtration laws up to the entry
    // tolerance; allow the metric's own granularity as slack
    double slack = 1e-9;
    bool ok_sum = sum.propagation() <= std::max(a.propagation(), b.propagation()) + slack;
    bool ok_prod = prod.propagation() <= a.propagation() + b.propagation() + slack;
    bool ok_adj = std::abs(adj.propagation() - a.propagation()) <= slack;
    bool ok_amp = std::abs(amp.propagation() - a.propagation()) <= slack;
    bool ok_norm = std::abs(amp.norm() - a.norm()) <= 1e-8 * std::max(1.0, a.norm());
    bool pass = ok_sum && ok_prod && ok_adj && ok_amp && ok_norm;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", t},
                               {"prop_a", a.propagation()},
                               {"prop_b", b.propagation()},
                               {"prop_sum", sum.propagation()},
                               {"prop_prod", prod.propagation()},
                               {"prop_adjoint", adj.propagation()},
                               {"prop_amplified", amp.propagation()},
                               {"norm_a", a.norm()},
                               {"norm_amplified", amp.norm()},
                               {"pass", pass}});
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// commutator estimate and the staircase claims

SuiteReport suite_commutator(int trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "commutator";
  rep.seed = seed;
  rep.trials = trials;
  rep.results = Json::array();
  rep.config = {{"bound", "8 L prop(T) ||T||, slack 1e-12 ||T||"},
                {"staircase", "claims (i) and (ii) on each real part"}};
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "commutator", t);
    SpacePtr sp = random_point_cloud_space(rng, 8, 64);
    int m = rng.uniform_int(1, 4);
    int n = rng.uniform_int(1, 4);
    bool real_f = rng.uniform(0, 1) < 0.5;
    FilteredOperator T = random_banded_operator(sp, m, rng.uniform(1.0, 6.0), rng);
    LipschitzElement f = random_lipschitz_element(sp, n, rng, real_f);
    CommutatorReport cr = commutator_certificate(T, f);
    bool pass = cr.pass;

    Json trial{{"trial", t},
               {"points", sp->size()},
               {"m", m},
               {"n", n},
               {"commutator_norm", cr.commutator_norm},
               {"bound", cr.bound},
               {"L", cr.lipschitz_L},
               {"prop", cr.propagation},
               {"norm_T", cr.operator_norm}};

    double delta = f.lipschitz_L * T.propagation();
    if (delta > 1e-12) {
      Json parts = Json::array();
      auto check_part = [&](const LipschitzElement& part, const char* name) {
        LipschitzElement g = staircase_discretization(part, delta, n);
        double claim_i = 0;  // ||I_m ⊗ (part - g)|| = max_x ||part(x)-g(x)||
        for (int x = 0; x < sp->size(); ++x)
          claim_i = std::max(claim_i, op_norm(part.values[x] - g.values[x]));
        double claim_ii = op_norm(commutator_amplified(T, g));
        double sharp = op_norm(commutator_amplified(T, part));
        bool ok_i = claim_i <= delta + 1e-12;
        bool ok_ii = claim_ii <= 2.0 * delta * cr.operator_norm + 1e-12 * cr.operator_norm;
        bool ok_sharp = sharp <= 4.0 * delta * cr.operator_norm + 1e-12 * cr.operator_norm;
        pass = pass && ok_i && ok_ii && ok_sharp;
        parts.push_back(Json{{"part", name},
                             {"claim_i", claim_i},
                             {"claim_i_bound", delta},
                             {"claim_ii", claim_ii},
                             {"claim_ii_bound", 2.0 * delta * cr.operator_norm},
                             {"real_part_bound", 4.0 * delta * cr.operator_norm},
                             {"real_part_norm", sharp}});
      };
      LipschitzElement fre = f, fim = f;
      for (int x = 0; x < sp->size(); ++x) {
        fre.values[x] = 0.5 * (f.values[x] + f.values[x].conjugate());
        fim.values[x] = Cplx(0, -0.5) * (f.values[x] - f.values[x].conjugate());
      }
      fre.certify();
      fim.certify();
      check_part(fre, "re");
      if (!real_f) check_part(fim, "im");
      trial["delta"] = delta;
      trial["staircase"] = std::move(parts);
    } else {
      trial["staircase"] = "skipped (delta = 0)";
    }
    trial["pass"] = pass;
    rep.failures += !pass;
    rep.results.push_back(std::move(trial));
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// difference construction

SuiteReport suite_difference(int trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "difference";
  rep.seed = seed;
  rep.trials = trials;
  rep.results = Json::array();
  rep.config = {{"closed_form_tolerance", 1e-12},
                {"ztz_bound", "8 eps"},
                {"certificate", "(2^8 N^4 eps, 3r, 16 N^3)"}};
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "difference", t);
    SpacePtr sp = random_point_cloud_space(rng, 5, 10);
    int k = rng.uniform_int(1, 2);
    double radius = rng.uniform(1.5, 4.0);
    double defect_target = rng.uniform(0.002, 0.02);
    UnitizedOperator beta = random_quasiidempotent(sp, k, defect_target, radius, rng);
    // alpha = beta + small banded piece keeps alpha - beta in the ideal
    CMat bump = CMat::Zero(beta.dim(), beta.dim());
    const int pts = sp->size();
    for (int x = 0; x < pts; ++x)
      for (int y = 0; y < pts; ++y) {
        if (sp->d(x, y) > radius) continue;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) bump(x * k + a, y * k + b) = rng.cgauss();
      }
    bump *= rng.uniform(0.01, 0.05) / std::max(op_norm(bump), 1e-12);
    UnitizedOperator alpha = beta;
    alpha.op = FilteredOperator(sp, k, beta.op.matrix() + bump);

    CMat ad = alpha.dense(), bd = beta.dense();
    double eps_meas = std::max(op_norm((ad * ad - ad).eval()), op_norm((bd * bd - bd).eval()));
    double prop_meas = std::max(alpha.propagation(), beta.propagation());
    double norm_meas = std::max({op_norm(ad), op_norm(CMat(CMat::Identity(ad.rows(), ad.cols()) - ad)),
                                 op_norm(bd), op_norm(CMat(CMat::Identity(bd.rows(), bd.cols()) - bd))});
    ParameterTuple p{rat_from_double_up(eps_meas, 20), rat_from_double_up(prop_meas, 20),
                     rat_from_double_up(norm_meas, 20), Rational(0)};
    QuasiIdempotent qa{alpha, p, measure_certificate(alpha, p)};
    QuasiIdempotent qb{beta, p, measure_certificate(beta, p)};

    DifferenceReport dr = difference_construction(qa, qb);
    double scale = std::max(1.0, op_norm(dr.result.element.dense()));
    bool agree = dr.closed_form_agreement <= 1e-12 * std::max(1.0, scale);
    bool ztz = dr.ztz_minus_identity < 8 * rat_to_double(p.epsilon);
    bool cert = dr.result.certificate.valid;
    bool inputs_ok = qa.certificate.valid && qb.certificate.valid;
    bool pass = agree && ztz && cert && inputs_ok;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", t},
                               {"epsilon", rat_str(p.epsilon)},
                               {"closed_form_agreement", dr.closed_form_agreement},
                               {"ztz_minus_identity", dr.ztz_minus_identity},
                               {"ztz_bound", 8 * rat_to_double(p.epsilon)},
                               {"output_certificate", certificate_to_json(
                                    dr.result.certificate, dr.result.params)},
                               {"pass", pass}});
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// exact parameter arithmetic

SuiteReport suite_pairing_params(int trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "pairing-params";
  rep.seed = seed;
  rep.trials = trials;
  rep.results = Json::array();
  rep.config = {{"arithmetic", "exact rational, zero tolerance"}};
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "pairing-params", t);
    // random exact rational tuples
    auto rr = [&](int lo, int hi) {
      return Rational(rng.uniform_int(lo, hi), rng.uniform_int(1, 1 << 20));
    };
    ParameterTuple p{rr(1, 1000) / 100000, rr(1, 4096), 7 + rr(0, 64), rr(1, 4096)};

    Triple base{p.epsilon, p.r, p.N};
    Triple step1 = difference_transform(basic_product_transform(base, p.L));
    Triple step2 = difference_transform(step1);
    bool chain1 =
        step1.epsilon == rat_pow2(11) * p.r * rat_pow(p.N, 6) * p.L +
                             rat_pow2(8) * rat_pow(p.N, 4) * p.epsilon &&
        step1.r == 3 * p.r && step1.N == 16 * rat_pow(p.N, 3);
    bool chain2 =
        step2.epsilon == rat_pow2(35) * p.r * rat_pow(p.N, 18) * p.L +
                             rat_pow2(32) * rat_pow(p.N, 16) * p.epsilon &&
        step2.r == 9 * p.r && step2.N == rat_pow2(16) * rat_pow(p.N, 9);
    DerivedParams d = derived_params(p);
    bool thm = d.epsilon_prime == rat_pow2(70) * p.r * rat_pow(p.N, 18) * p.L +
                                      rat_pow2(64) * rat_pow(p.N, 16) * p.epsilon &&
               d.r_prime == 9 * p.r && d.N_prime == rat_pow2(32) * rat_pow(p.N, 9);
    // pairable <=> eps' < 1/16, by multiplying the defining inequality by 2^64 N^16
    bool equiv = is_pairable(p) == (d.epsilon_prime < Rational(1, 16));
    // homotopy budget from the well-definedness proof equals (4 eps', 4 N')
    bool budget = 4 * d.epsilon_prime ==
                      rat_pow2(72) * p.r * rat_pow(p.N, 18) * p.L +
                          rat_pow2(66) * rat_pow(p.N, 16) * p.epsilon &&
                  4 * d.N_prime == rat_pow2(34) * rat_pow(p.N, 9);
    bool pass = chain1 && chain2 && thm && equiv && budget;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", t},
                               {"epsilon", rat_str(p.epsilon)},
                               {"r", rat_str(p.r)},
                               {"N", rat_str(p.N)},
                               {"L", rat_str(p.L)},
                               {"chain1", chain1},
                               {"chain2", chain2},
                               {"thm_formula", thm},
                               {"pairable_iff_sixteenth", equiv},
                               {"homotopy_budget", budget},
                               {"pass", pass}});
  }
  // boundary case: exact equality is not pairable and eps' = 1/16 exactly
  {
    ParameterTuple p{Rational(0), Rational(1), Rational(7), Rational(0)};
    p.L = rat_pow2(-70) * rat_pow(p.N, -18) / 2;  // 2^6 r N^2 L = half the rhs
    p.epsilon = pairable_rhs(p) - rat_pow2(6) * p.r * rat_pow(p.N, 2) * p.L;
    bool not_pairable = !is_pairable(p);
    bool at_sixteenth = derived_params(p).epsilon_prime == Rational(1, 16);
    bool pass = not_pairable && at_sixteenth;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", "boundary"},
                               {"not_pairable", not_pairable},
                               {"epsilon_prime_equals_1_16", at_sixteenth},
                               {"pass", pass}});
  }
  rep.trials += 1;
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// kappa

SuiteReport suite_kappa(int trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "kappa";
  rep.seed = seed;
  rep.trials = trials;
  rep.results = Json::array();
  rep.config = {{"idempotency_tolerance", 1e-10},
                {"trace_tolerance", 1e-8},
                {"contour_agreement", 1e-8},
                {"contour_nodes", 256}};
  for (int t = 0; t < trials; ++t) {
    TrialRng rng(seed, "kappa", t);
    int n = rng.uniform_int(4, 24);
    CMat s = CMat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) += 0.3 * rng.cgauss();
    CMat diag = CMat::Zero(n, n);
    int rank = rng.uniform_int(1, n - 1);
    for (int i = 0; i < rank; ++i) diag(i, i) = 1.0;
    CMat e0 = s * diag * s.inverse();
    CMat pert(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pert(i, j) = rng.cgauss();
    pert /= std::max(op_norm(pert), 1e-12);
    double target = rng.uniform(0.01, 0.2);
    double lo = 0, hi = 1;
    CMat e = e0;
    for (int it = 0; it < 24; ++it) {
      double mid = 0.5 * (lo + hi);
      CMat cand = e0 + mid * pert;
      if (op_norm((cand * cand - cand).eval()) <= target) {
        e = cand;
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double defect_in = op_norm((e * e - e).eval());

    auto kp = kappa(e);
    CMat contour = riesz_contour(e, 256);
    double disagreement = op_norm(kp.idempotent - contour);
    double tr = kp.idempotent.trace().real();
    double tr_drift = std::abs(tr - std::round(tr)) + std::abs(kp.idempotent.trace().imag());
    bool pass = kp.defect <= 1e-10 && tr_drift <= 1e-8 && disagreement <= 1e-8;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", t},
                               {"n", n},
                               {"input_defect", defect_in},
                               {"kappa_defect", kp.defect},
                               {"trace", tr},
                               {"trace_drift", tr_drift},
                               {"iteration_vs_contour", disagreement},
                               {"pass", pass}});
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// nerve / Lipschitz certification on random grid covers

namespace {

OpenCover random_ball_cover(const FiniteMetricSpace& sp, TrialRng& rng) {
  OpenCover cover;
  std::vector<char> covered(sp.size(), 0);
  int next_name = 0;
  auto add_ball = [&](int center, double radius) {
    CoverSet cs;
    cs.name = "U" + std::to_string(next_name++);
    for (int y = 0; y < sp.size(); ++y)
      if (sp.d(center, y) < radius) cs.points.push_back(y);
    // keep members proper subsets so the Lebesgue number stays finite
    if (static_cast<int>(cs.points.size()) == sp.size()) cs.points.pop_back();
    if (cs.points.empty()) return;
    for (int p : cs.points) covered[p] = 1;
    cover.sets.push_back(std::move(cs));
  };
  while (true) {
    std::vector<int> missing;
    for (int i = 0; i < sp.size(); ++i)
      if (!covered[i]) missing.push_back(i);
    if (missing.empty()) break;
    int center = missing[rng.uniform_int(0, static_cast<int>(missing.size()) - 1)];
    add_ball(center, rng.uniform(1.6, 3.4));
  }
  // a couple of extra members for overlap variety
  int extras = rng.uniform_int(0, 2);
  for (int i = 0; i < extras; ++i)
    add_ball(rng.uniform_int(0, sp.size() - 1), rng.uniform(1.6, 3.4));
  return cover;
}

}  // namespace

SuiteReport suite_nerve(int covers, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "nerve";
  rep.seed = seed;
  rep.trials = covers;
  rep.results = Json::array();
  rep.config = {{"claim", "d_N(phi x, phi y) <= (m/R) d_M(x,y), exhaustive"},
                {"partition_sum_tolerance", 1e-12},
                {"metric", "waypoint surrogate, grid 8 (adaptive refinement)"}};
  for (int t = 0; t < covers; ++t) {
    TrialRng rng(seed, "nerve", t);
    int nx = rng.uniform_int(3, 6), ny = rng.uniform_int(3, 5);
    SpacePtr sp = make_grid(nx, ny);
    OpenCover cover = random_ball_cover(*sp, rng);
    CoverStats stats = cover_stats(*sp, cover);
    double claimed = stats.multiplicity / stats.lebesgue;
    auto cert = certify_lipschitz_nerve_map(*sp, cover, claimed);
    bool pass = cert.pass && cert.pou_sum_error <= 1e-12;
    rep.failures += !pass;
    rep.results.push_back(Json{{"trial", t},
                               {"grid", {nx, ny}},
                               {"members", cover.sets.size()},
                               {"lebesgue", finite_or_inf(stats.lebesgue)},
                               {"multiplicity", stats.multiplicity},
                               {"claimed_L", claimed},
                               {"max_ratio", cert.max_ratio},
                               {"partition_sum_error", cert.pou_sum_error},
                               {"waypoint_grid", cert.grid},
                               {"pass", pass}});
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// index / pairing equivalence

SuiteReport suite_index(const std::vector<int>& sizes, int flux_lo, int flux_hi,
                        int vanishing_trials, std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "index";
  rep.seed = seed;
  rep.results = Json::array();
  rep.config = {{"model", "wilson-torus"},
                {"flux", {flux_lo, flux_hi}},
                {"chi_degree", 9},
                {"params", {{"epsilon", "1/64"}, {"N", "7"}}}};
  for (int size : sizes) {
    for (int flux = flux_lo; flux <= flux_hi; ++flux) {
      rep.trials += 1;
      WilsonTorus model = build_wilson_torus(size, flux);
      auto oracle = analytic_index_oracle(model.D);
      ParameterTuple params{Rational(1, 64), rat_from_double_up(9 * model.D.op.propagation()),
                            Rational(7), rat_from_double_up(model.bott.lipschitz_L)};
      auto chi = normalizing_approximant(model.D, params.r, 9);
      auto qi = quantitative_index(model.D, params, chi);
      LipschitzClass lc = bott_class(model);
      auto pr = pair_to_integer(qi.cls, lc, params, /*allow_override=*/true);
      auto tw = analytic_index_oracle_twisted(model.D, lc);
      bool match = pr.value == tw.index;
      rep.failures += !match;
      rep.results.push_back(Json{{"size", size},
                                 {"flux", flux},
                                 {"oracle_index", oracle.index},
                                 {"oracle_gap", oracle.nonzero_min},
                                 {"chi_flatness", chi.flatness},
                                 {"measured_epsilon", qi.measured_epsilon},
                                 {"pairing", pr.value},
                                 {"twisted_oracle", tw.index},
                                 {"override_used", pr.override_used},
                                 {"match", match}});
    }
  }
  if (vanishing_trials > 0) {
    int size = sizes.empty() ? 8 : sizes.front();
    WilsonTorus gapped = build_wilson_torus(size, 0);
    ParameterTuple params{Rational(1, 64), rat_from_double_up(12 * gapped.D.op.propagation()),
                          Rational(7), Rational(1)};
    auto vr = vanishing_consistency(gapped, 0.5, params, vanishing_trials, seed);
    rep.trials += 1;
    rep.failures += !vr.all_zero;
    Json trials_json = Json::array();
    for (const auto& vt : vr.trials)
      trials_json.push_back(Json{{"pairing", vt.pairing},
                                 {"oracle", vt.oracle},
                                 {"winding", vt.winding},
                                 {"pass", vt.pass}});
    rep.results.push_back(Json{{"vanishing", {{"gap_required", vr.gap_required},
                                              {"gap_measured", vr.gap_measured},
                                              {"trials", trials_json},
                                              {"all_zero", vr.all_zero}}}});
  }
  rep.pass = rep.failures == 0;
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

SuiteReport suite_all(std::uint64_t seed) {
  auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = "all";
  rep.seed = seed;
  rep.results = Json::array();
  auto fold = [&](const SuiteReport& r) {
    rep.trials += r.trials;
    rep.failures += r.failures;
    rep.results.push_back(r.to_json());
  };
  fold(suite_filtration(100, seed));
  fold(suite_commutator(150, seed));
  fold(suite_difference(100, seed));
  fold(suite_pairing_params(100, seed));
  fold(suite_kappa(100, seed));
  fold(suite_nerve(12, seed));
  fold(suite_index({8}, -1, 1, 5, seed));
  rep.pass = rep.failures == 0;
  rep.config = {{"composition", "reduced trial counts of every member suite"}};
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

SuiteReport run_suite(const std::string& suite, int trials, std::uint64_t seed) {
  if (suite == "filtration") return suite_filtration(trials, seed);
  if (suite == "commutator") return suite_commutator(trials, seed);
  if (suite == "difference") return suite_difference(trials, seed);
  if (suite == "pairing-params") return suite_pairing_params(trials, seed);
  if (suite == "kappa") return suite_kappa(trials, seed);
  if (suite == "nerve") return suite_nerve(trials, seed);
  if (suite == "index") return suite_index({8, 12, 16}, -2, 2, 20, seed);
  if (suite == "all") return suite_all(seed);
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace quantk
