#include "quantk/json_io.hpp"

#include <chrono>
#include <fstream>

namespace quantk {

Json space_to_json(const FiniteMetricSpace& space, const std::string& name) {
  Json j;
  j["name"] = name;
  j["points"] = space.point_ids();
  Json rows = Json::array();
  for (int i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < space.size(); ++k) row.push_back(space.d(i, k));
    rows.push_back(std::move(row));
  }
  j["distance"] = std::move(rows);
  return j;
}

SpacePtr space_from_json(const Json& j) {
  if (!j.contains("points") || !j.contains("distance"))
    throw ParseError("space file needs 'points' and 'distance'");
  std::vector<std::string> pts = j.at("points").get<std::vector<std::string>>();
  const auto& d = j.at("distance");
  Eigen::MatrixXd m(pts.size(), pts.size());
  if (d.size() != pts.size()) throw ParseError("distance row count mismatch");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (d[i].size() != pts.size())
      throw ParseError("distance row " + std::to_string(i) + " has wrong length");
    for (std::size_t k = 0; k < pts.size(); ++k) m(i, k) = d[i][k].get<double>();
  }
  return build_metric_space(std::move(pts), std::move(m));
}

Json cover_to_json(const FiniteMetricSpace& space, const OpenCover& cover) {
  Json sets = Json::array();
  for (const auto& s : cover.sets) {
    Json e;
    e["name"] = s.name;
    Json pts = Json::array();
    for (int p : s.points) pts.push_back(space.id(p));
    e["points"] = std::move(pts);
    sets.push_back(std::move(e));
  }
  return Json{{"sets", std::move(sets)}};
}

OpenCover cover_from_json(const FiniteMetricSpace& space, const Json& j) {
  if (!j.contains("sets")) throw ParseError("cover file needs 'sets'");
  OpenCover c;
  for (const auto& e : j.at("sets")) {
    CoverSet s;
    s.name = e.at("name").get<std::string>();
    for (const auto& p : e.at("points")) s.points.push_back(space.index_of(p.get<std::string>()));
    std::sort(s.points.begin(), s.points.end());
    c.sets.push_back(std::move(s));
  }
  validate_cover(space, c);
  return c;
}

Json nerve_to_json(const NerveComplex& nc) {
  Json j;
  j["vertices"] = nc.vertices;
  Json simp = Json::array();
  for (const auto& s : nc.simplices) {
    Json one = Json::array();
    for (int v : s) one.push_back(nc.vertices.at(v));
    simp.push_back(std::move(one));
  }
  j["simplices"] = std::move(simp);
  return j;
}

Json operator_to_json(const FilteredOperator& op, const std::string& space_name) {
  Json j;
  j["space"] = space_name;
  j["internal_dim"] = op.internal_dim();
  Json rows = Json::array();
  for (int i = 0; i < op.dim(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < op.dim(); ++k)
      row.push_back(Json::array({op.matrix()(i, k).real(), op.matrix()(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

FilteredOperator operator_from_json(SpacePtr space, const Json& j) {
  int k = j.at("internal_dim").get<int>();
  const auto& m = j.at("matrix");
  long n = static_cast<long>(space->size()) * k;
  if (static_cast<long>(m.size()) != n) throw ParseError("operator matrix row count mismatch");
  CMat mat(n, n);
  for (long i = 0; i < n; ++i) {
    if (static_cast<long>(m[i].size()) != n)
      throw ParseError("operator matrix row " + std::to_string(i) + " has wrong length");
    for (long c = 0; c < n; ++c)
      mat(i, c) = Cplx(m[i][c][0].get<double>(), m[i][c][1].get<double>());
  }
  return FilteredOperator(std::move(space), k, std::move(mat));
}

Json certificate_to_json(const Certificate& c, const ParameterTuple& p) {
  Json j;
  j["epsilon"] = rat_str(p.epsilon);
  j["r"] = rat_to_double(p.r);
  j["N"] = rat_str(p.N);
  j["norm_e2_minus_e"] = c.norm_e2_minus_e;
  j["propagation"] = c.propagation;
  if (c.propagation_is_bound) j["propagation_kind"] = "filtration-bound";
  j["norm_e"] = c.norm_e;
  j["norm_1_minus_e"] = c.norm_1_minus_e;
  j["valid"] = c.valid;
  return j;
}

ParameterTuple params_from_json(const Json& j) {
  auto get = [&](const char* key, const char* dflt) {
    if (j.contains(key)) {
      if (j.at(key).is_string()) return rat_parse(j.at(key).get<std::string>());
      return rat_of_double(j.at(key).get<double>());
    }
    return rat_parse(dflt);
  };
  ParameterTuple p;
  p.epsilon = get("epsilon", "1/100");
  p.r = get("r", "1");
  p.N = get("N", "7");
  p.L = get("L", "0");
  return p;
}

Json params_to_json(const ParameterTuple& p) {
  return Json{{"epsilon", rat_str(p.epsilon)},
              {"r", rat_str(p.r)},
              {"N", rat_str(p.N)},
              {"L", rat_str(p.L)}};
}

BoundConstants constants_from_json(const Json& j) {
  BoundConstants c;
  auto get = [&](const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("constants file needs '") + key + "'");
    if (j.at(key).is_string()) return rat_parse(j.at(key).get<std::string>());
    return rat_of_double(j.at(key).get<double>());
  };
  c.C = get("C");
  c.C_prime = get("C_prime");
  c.omega_0 = get("omega_0");
  if (j.contains("N"))
    c.N = j.at("N").is_string() ? rat_parse(j.at("N").get<std::string>())
                                : rat_of_double(j.at("N").get<double>());
  c.validate();
  return c;
}

Json constants_to_json(const BoundConstants& c) {
  return Json{{"C", rat_str(c.C)},
              {"C_prime", rat_str(c.C_prime)},
              {"omega_0", rat_str(c.omega_0)},
              {"N", rat_str(c.N)}};
}

Json finite_or_inf(double v) {
  if (std::isinf(v)) return Json("inf");
  return Json(v);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json report_envelope(const std::string& kind) {
  Json j;
  j["schema"] = "quantk/1";
  j["kind"] = kind;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  j["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return j;
}

}  // namespace quantk
