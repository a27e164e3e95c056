#include "quantk/metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace quantk {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> point_ids, Eigen::MatrixXd dist,
                                     double triangle_rtol)
    : ids_(std::move(point_ids)), dist_(std::move(dist)) {
  const int n = static_cast<int>(ids_.size());
  if (dist_.rows() != n || dist_.cols() != n)
    throw MetricError("distance matrix is " + std::to_string(dist_.rows()) + "x" +
                      std::to_string(dist_.cols()) + " but there are " + std::to_string(n) +
                      " labels");
  for (int i = 0; i < n; ++i) {
    if (dist_(i, i) != 0.0)
      throw MetricError("nonzero diagonal at index " + std::to_string(i));
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(dist_(i, j)) || dist_(i, j) < 0)
        throw MetricError("negative or non-finite entry at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      if (i != j && dist_(i, j) == 0.0)
        throw MetricError("zero distance between distinct points (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      if (dist_(i, j) != dist_(j, i))
        throw MetricError("asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + "): " +
                          std::to_string(dist_(i, j)) + " vs " + std::to_string(dist_(j, i)));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = dist_(i, k);
        double rhs = dist_(i, j) + dist_(j, k);
        if (lhs > rhs + triangle_rtol * std::max(1.0, rhs)) {
          std::ostringstream os;
          os << "triangle inequality fails on (" << i << "," << j << "," << k
             << "): d(i,k)=" << lhs << " > d(i,j)+d(j,k)=" << rhs;
          throw MetricError(os.str());
        }
      }
  diameter_ = dist_.maxCoeff();
}

int FiniteMetricSpace::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (ids_[i] == label) return i;
  throw MetricError("unknown point label: " + label);
}

SpacePtr build_metric_space(std::vector<std::string> labels, Eigen::MatrixXd distance,
                            double triangle_rtol) {
  return std::make_shared<FiniteMetricSpace>(std::move(labels), std::move(distance),
                                             triangle_rtol);
}

SpacePtr make_path(int n, double step) {
  std::vector<std::string> ids;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    ids.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) d(i, j) = step * std::abs(i - j);
  }
  return build_metric_space(std::move(ids), std::move(d));
}

SpacePtr make_grid(int nx, int ny) {
  std::vector<std::string> ids;
  std::vector<std::pair<int, int>> pts;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      ids.push_back(std::to_string(x) + "," + std::to_string(y));
      pts.emplace_back(x, y);
    }
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d(i, j) = std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second);
  return build_metric_space(std::move(ids), std::move(d));
}

SpacePtr make_torus(int n, const std::vector<int>& skip) {
  std::set<int> sk(skip.begin(), skip.end());
  std::vector<std::string> ids;
  std::vector<std::pair<int, int>> pts;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int flat = x * n + y;
      if (sk.count(flat)) continue;
      ids.push_back(std::to_string(x) + "," + std::to_string(y));
      pts.emplace_back(x, y);
    }
  const int m = static_cast<int>(pts.size());
  Eigen::MatrixXd d(m, m);
  auto wrap = [n](int a) { return std::min((a % n + n) % n, n - (a % n + n) % n); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      d(i, j) = wrap(pts[i].first - pts[j].first) + wrap(pts[i].second - pts[j].second);
  return build_metric_space(std::move(ids), std::move(d));
}

void validate_cover(const FiniteMetricSpace& space, const OpenCover& cover) {
  std::vector<char> hit(space.size(), 0);
  for (const auto& s : cover.sets) {
    if (s.points.empty()) throw MetricError("cover member '" + s.name + "' is empty");
    for (int p : s.points) {
      if (p < 0 || p >= space.size())
        throw MetricError("cover member '" + s.name + "' references point " + std::to_string(p));
      hit[p] = 1;
    }
  }
  for (int i = 0; i < space.size(); ++i)
    if (!hit[i]) throw MetricError("point " + space.id(i) + " not covered");
}

std::vector<int> ball(const FiniteMetricSpace& space, int x, double radius) {
  if (x < 0 || x >= space.size()) throw MetricError("ball: unknown point " + std::to_string(x));
  if (radius < 0) throw MetricError("ball: negative radius");
  std::vector<int> out;
  for (int y = 0; y < space.size(); ++y)
    if (space.d(x, y) < radius) out.push_back(y);
  return out;
}

double set_distance(const FiniteMetricSpace& space, int x, const std::vector<int>& subset) {
  if (subset.empty()) return kInf;
  double best = kInf;
  for (int y : subset) best = std::min(best, space.d(x, y));
  return best;
}

static std::vector<int> complement(const FiniteMetricSpace& space, const std::vector<int>& set) {
  std::vector<char> in(space.size(), 0);
  for (int p : set) in[p] = 1;
  std::vector<int> out;
  for (int i = 0; i < space.size(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

double lebesgue_number(const FiniteMetricSpace& space, const OpenCover& cover) {
  validate_cover(space, cover);
  std::vector<std::vector<int>> comp;
  comp.reserve(cover.sets.size());
  for (const auto& s : cover.sets) comp.push_back(complement(space, s.points));
  double result = kInf;
  for (int x = 0; x < space.size(); ++x) {
    double best = 0;
    for (const auto& c : comp) best = std::max(best, set_distance(space, x, c));
    result = std::min(result, best);
  }
  return result;
}

int h_multiplicity(const FiniteMetricSpace& space, const OpenCover& cover, double h) {
  if (!(h > 0)) throw MetricError("h_multiplicity requires h > 0");
  validate_cover(space, cover);
  int best = 0;
  for (int x = 0; x < space.size(); ++x) {
    int count = 0;
    for (const auto& s : cover.sets) {
      bool meets = false;
      for (int p : s.points)
        if (space.d(x, p) < h) {
          meets = true;
          break;
        }
      count += meets;
    }
    best = std::max(best, count);
  }
  return best;
}

CoverStats cover_stats(const FiniteMetricSpace& space, const OpenCover& cover, double h) {
  double R = lebesgue_number(space, cover);
  double use_h = h > 0 ? h : R;
  int m;
  if (std::isinf(use_h)) {
    // a member equals the whole space; every ball meets everything it can
    m = h_multiplicity(space, cover, space.diameter() + 1);
  } else {
    m = h_multiplicity(space, cover, use_h);
  }
  return CoverStats{R, m, use_h, m - 1};
}

}  // namespace quantk
