#include "quantk/bounds.hpp"
#include "quantk/index_models.hpp"
#include "quantk/json_io.hpp"
#include "quantk/nerve.hpp"
#include "quantk/pairing.hpp"
#include "quantk/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace quantk;

namespace {

void emit(const Json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << std::endl;
  else
    save_json_file(out, j);
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed,
               const std::string& out) {
  SuiteReport rep;
  try {
    rep = run_suite(suite, trials, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  emit(rep.to_json(), out);
  std::cerr << "suite " << suite << ": " << (rep.pass ? "pass" : "FAIL") << " ("
            << rep.trials << " trials, " << rep.failures << " failures, "
            << rep.elapsed_seconds << " s)\n";
  return rep.pass ? 0 : 1;
}

int cmd_nerve(const std::string& space_file, const std::string& cover_file, double h,
              const std::string& out) {
  SpacePtr sp = space_from_json(load_json_file(space_file));
  OpenCover cover = cover_from_json(*sp, load_json_file(cover_file));
  CoverStats stats = cover_stats(*sp, cover, h);
  auto nc = build_nerve(*sp, cover);
  auto pou = partition_of_unity(*sp, cover);

  Json rep = report_envelope("nerve-report");
  rep["stats"] = Json{{"lebesgue", finite_or_inf(stats.lebesgue)},
                      {"multiplicity", stats.multiplicity},
                      {"h", finite_or_inf(stats.h)},
                      {"dimension", stats.dimension}};
  rep["nerve"] = nerve_to_json(nc);
  Json weights = Json::array();
  for (int x = 0; x < sp->size(); ++x) {
    Json row = Json::array();
    for (int i = 0; i < pou.weights.cols(); ++i) row.push_back(pou.weights(x, i));
    weights.push_back(std::move(row));
  }
  rep["partition_of_unity"] = std::move(weights);
  if (pou.used_surrogate)
    rep["empty_complement_surrogate"] = pou.empty_complement_value;

  if (std::isfinite(stats.lebesgue)) {
    double claimed = static_cast<double>(stats.multiplicity) / stats.lebesgue;
    auto cert = certify_lipschitz_nerve_map(*sp, cover, claimed);
    rep["lipschitz"] = Json{{"claimed_L", claimed},
                            {"max_ratio", cert.max_ratio},
                            {"pass", cert.pass},
                            {"waypoint_grid", cert.grid},
                            {"partition_sum_error", cert.pou_sum_error}};
  } else {
    rep["lipschitz"] = "skipped: infinite Lebesgue number (a member covers the space)";
  }
  emit(rep, out);
  return 0;
}

UnitizedOperator unitized_from_json(SpacePtr sp, const Json& j) {
  FilteredOperator op = operator_from_json(sp, j);
  UnitizedOperator u = UnitizedOperator::from_operator(std::move(op));
  if (j.contains("scalar_part")) {
    Cplx s(j["scalar_part"][0].get<double>(), j["scalar_part"][1].get<double>());
    u.scalar_plus = s * CMat::Identity(u.internal_dim(), u.internal_dim());
    u.scalar_minus = u.scalar_plus;
  }
  return u;
}

int cmd_pair(const std::string& qc_file, const std::string& p_file,
             const std::string& params_file, bool allow_override, const std::string& out) {
  Json qj = load_json_file(qc_file);
  SpacePtr sp = space_from_json(qj.at("space"));
  UnitizedOperator plus = unitized_from_json(sp, qj.at("plus"));
  UnitizedOperator minus = unitized_from_json(sp, qj.at("minus"));
  ParameterTuple params = params_from_json(load_json_file(params_file));
  params.validate(true);
  KClassQuantitative qc{validate_quasiidempotent(plus, params),
                        validate_quasiidempotent(minus, params)};

  Json pj = load_json_file(p_file);
  LipschitzClass lc;
  lc.p1.space = sp;
  lc.p2.space = sp;
  lc.p1.n = lc.p2.n = pj.at("n").get<int>();
  auto read_values = [&](const Json& arr, LipschitzElement& dst) {
    dst.values.clear();
    for (const auto& vx : arr) {
      CMat v(dst.n, dst.n);
      for (int i = 0; i < dst.n; ++i)
        for (int k = 0; k < dst.n; ++k)
          v(i, k) = Cplx(vx[i][k][0].get<double>(), vx[i][k][1].get<double>());
      dst.values.push_back(std::move(v));
    }
    if (static_cast<int>(dst.values.size()) != sp->size())
      throw ParseError("Lipschitz element: one value per point required");
  };
  read_values(pj.at("p1"), lc.p1);
  read_values(pj.at("p2"), lc.p2);
  CMat scal = CMat::Zero(lc.p1.n, lc.p1.n);
  if (pj.contains("scalar_part")) {
    const auto& s = pj["scalar_part"];
    for (int i = 0; i < lc.p1.n; ++i)
      for (int k = 0; k < lc.p1.n; ++k) scal(i, k) = Cplx(s[i][k][0].get<double>(), s[i][k][1].get<double>());
  }
  lc.p1.scalar_part = scal;
  lc.p2.scalar_part = scal;
  lc.p1.certify();
  lc.p2.certify();
  lc.basepoint = pj.contains("basepoint") ? sp->index_of(pj["basepoint"].get<std::string>()) : 0;
  lc.L = rat_from_double_up(std::max(lc.p1.lipschitz_L, lc.p2.lipschitz_L));

  Json rep = report_envelope("pairing-report");
  rep["params"] = params_to_json(params);
  try {
    auto pr = pair_to_integer(qc, lc, params, allow_override);
    rep["value"] = pr.value;
    rep["pairable"] = pr.pairable;
    rep["pairable_lhs"] = pr.pairable_lhs;
    rep["pairable_rhs"] = pr.pairable_rhs;
    rep["override_used"] = pr.override_used;
    rep["epsilon_prime"] = rat_str(pr.derived.epsilon_prime);
    rep["epsilon_prime_lt_one_sixteenth"] =
        pr.derived.epsilon_prime < Rational(1, 16);
    Json stages = Json::array();
    for (const auto& st : pr.stages)
      stages.push_back(Json{{"stage", st.stage},
                            {"certificate", certificate_to_json(st.cert, st.budget)}});
    rep["stages"] = std::move(stages);
  } catch (const NonPairableError& e) {
    rep["error"] = e.what();
    rep["pairable"] = false;
    emit(rep, out);
    std::cerr << e.what() << "\n";
    return 3;
  }
  emit(rep, out);
  return 0;
}

int cmd_index(const std::string& model, int size, int flux, const std::string& params_file,
              const std::string& out, const std::string& fixture) {
  if (model != "wilson-torus") {
    std::cerr << "unknown model: " << model << "\n";
    return 2;
  }
  WilsonTorus wt = build_wilson_torus(size, flux);
  auto oracle = analytic_index_oracle(wt.D);

  ParameterTuple params;
  if (!params_file.empty()) {
    params = params_from_json(load_json_file(params_file));
  } else {
    params = ParameterTuple{Rational(1, 64), rat_from_double_up(9 * wt.D.op.propagation()),
                            Rational(7), rat_from_double_up(wt.bott.lipschitz_L)};
  }
  auto chi = normalizing_approximant(wt.D, params.r, 9);
  auto qi = quantitative_index(wt.D, params, chi);
  LipschitzClass lc = bott_class(wt);
  auto pr = pair_to_integer(qi.cls, lc, params, /*allow_override=*/true);
  auto tw = analytic_index_oracle_twisted(wt.D, lc);

  Json rep = report_envelope("index-report");
  rep["model"] = Json{{"name", model},
                      {"size", size},
                      {"flux", flux},
                      {"points", wt.space->size()},
                      {"spectral_gap", wt.spectral_gap}};
  rep["oracle_index"] = oracle.index;
  rep["oracle"] = Json{{"zero_max", oracle.zero_max},
                       {"nonzero_min", oracle.nonzero_min},
                       {"smax", oracle.smax}};
  rep["chi"] = Json{{"degree", chi.degree},
                    {"flatness", chi.flatness},
                    {"propagation", chi.propagation},
                    {"prop_bound", chi.prop_bound},
                    {"sup_bound", chi.sup_bound}};
  rep["quantitative_index"] = Json{
      {"measured_epsilon", qi.measured_epsilon},
      {"closed_form_vs_w", qi.closed_form_vs_w},
      {"plus_certificate",
       certificate_to_json(qi.cls.plus.certificate, qi.cls.plus.params)},
      {"minus_certificate",
       certificate_to_json(qi.cls.minus.certificate, qi.cls.minus.params)}};
  rep["pairing"] = pr.value;
  rep["twisted_oracle"] = tw.index;
  rep["match"] = pr.value == tw.index;
  rep["override_used"] = pr.override_used;
  Json stages = Json::array();
  for (const auto& st : pr.stages)
    stages.push_back(Json{{"stage", st.stage},
                          {"certificate", certificate_to_json(st.cert, st.budget)}});
  rep["stages"] = std::move(stages);
  emit(rep, out);

  if (!fixture.empty()) {
    Json fx;
    fx["model"] = "wilson-torus";
    fx["size"] = size;
    fx["flux"] = flux;
    fx["oracle_index"] = oracle.index;
    fx["oracle_meta"] = Json{{"zero_max", oracle.zero_max},
                             {"nonzero_min", oracle.nonzero_min},
                             {"smax", oracle.smax},
                             {"rtol", 1e-8},
                             {"gap_factor", 100.0}};
    save_json_file(fixture, fx);
  }
  return pr.value == tw.index ? 0 : 1;
}

int cmd_bound(const std::string& R, long m, long l, const std::string& lambda,
              const std::string& constants_file, const std::string& out) {
  BoundConstants c = constants_from_json(load_json_file(constants_file));
  BoundQuery q;
  q.R = rat_parse(R);
  q.m = m;
  if (l > 0) q.l = l;
  if (!lambda.empty()) q.lambda = rat_parse(lambda);

  Json rep = report_envelope("bound-report");
  rep["constants"] = constants_to_json(c);
  rep["query"] = Json{{"R", rat_str(q.R)}, {"m", q.m}};
  auto mb = k_bound_main(q, c);
  rep["k_main"] = Json{{"value", rat_str(mb.k_value)},
                       {"exact", mb.exact},
                       {"r_scale", mb.r_scale},
                       {"L_m_minus_1", rat_str(mb.L_m_minus_1.value)}};
  if (q.l) {
    auto cb = k_bound_closed(q, c);
    rep["k_closed"] = Json{{"l", *q.l}, {"value", rat_str(cb.k_value)}, {"exact", cb.exact}};
  }
  if (q.lambda) {
    auto cv = curvature_bound(q, c);
    rep["curvature"] = Json{{"lambda", rat_str(*q.lambda)},
                            {"value", rat_str(cv.value)},
                            {"exact", cv.exact},
                            {"is_limit", cv.is_limit}};
  }
  emit(rep, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantk: finite-model laboratory for quantitative K-theory machinery"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a seeded property suite");
  std::string suite = "all";
  int trials = 100;
  std::uint64_t seed = 42;
  std::string out;
  verify->add_option("--suite", suite,
                     "filtration|commutator|difference|pairing-params|kappa|nerve|index|all");
  verify->add_option("--trials", trials, "trial count");
  verify->add_option("--seed", seed, "global 64-bit seed");
  verify->add_option("--out", out, "report file (stdout when omitted)");

  auto* nerve = app.add_subcommand("nerve", "cover statistics, nerve, partition, Lipschitz");
  std::string space_file, cover_file;
  double h = -1;
  std::string nerve_out;
  nerve->add_option("--space", space_file, "space JSON")->required();
  nerve->add_option("--cover", cover_file, "cover JSON")->required();
  nerve->add_option("--h", h, "multiplicity radius (defaults to the Lebesgue number)");
  nerve->add_option("--out", nerve_out, "report file");

  auto* pair = app.add_subcommand("pair", "pair a quantitative class with a Lipschitz class");
  std::string qc_file, p_file, params_file, pair_out;
  bool override_flag = false;
  pair->add_option("--P", qc_file, "quantitative class JSON")->required();
  pair->add_option("--p", p_file, "Lipschitz class JSON")->required();
  pair->add_option("--params", params_file, "parameter tuple JSON")->required();
  pair->add_flag("--override", override_flag, "proceed on non-pairable parameters");
  pair->add_option("--out", pair_out, "report file");

  auto* index = app.add_subcommand("index", "lattice model index and pairing");
  std::string model = "wilson-torus", index_params, index_out, fixture;
  int size = 8, flux = 0;
  index->add_option("--model", model, "model name");
  index->add_option("--size", size, "lattice size")->required();
  index->add_option("--flux", flux, "flux quanta");
  index->add_option("--params", index_params, "parameter tuple JSON");
  index->add_option("--out", index_out, "report file");
  index->add_option("--fixture", fixture, "write model fixture JSON");

  auto* bound = app.add_subcommand("bound", "closed-form bound evaluators");
  std::string R = "1", lambda, constants_file, bound_out;
  long m = 1, l = 0;
  bound->add_option("--R", R, "Lebesgue number (rational string)")->required();
  bound->add_option("--m", m, "multiplicity")->required();
  bound->add_option("--l", l, "dimension (enables the closed bound)");
  bound->add_option("--lambda", lambda, "curvature slack (enables the curvature bound)");
  bound->add_option("--constants", constants_file, "constants JSON")->required();
  bound->add_option("--out", bound_out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, trials, seed, out);
    if (nerve->parsed()) return cmd_nerve(space_file, cover_file, h, nerve_out);
    if (pair->parsed()) return cmd_pair(qc_file, p_file, params_file, override_flag, pair_out);
    if (index->parsed()) return cmd_index(model, size, flux, index_params, index_out, fixture);
    if (bound->parsed()) return cmd_bound(R, m, l, lambda, constants_file, bound_out);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
