#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantk {

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Finite point set with an exact distance matrix.  Stands in for (M, d_M):
// balls, covers and partitions of unity are all computed against `dist`.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> point_ids, Eigen::MatrixXd dist,
                    double triangle_rtol = 1e-12);

  int size() const { return static_cast<int>(ids_.size()); }
  double d(int i, int j) const { return dist_(i, j); }
  const Eigen::MatrixXd& dist() const { return dist_; }
  const std::vector<std::string>& point_ids() const { return ids_; }
  const std::string& id(int i) const { return ids_.at(i); }
  int index_of(const std::string& label) const;
  double diameter() const { return diameter_; }

 private:
  std::vector<std::string> ids_;
  Eigen::MatrixXd dist_;
  double diameter_ = 0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

SpacePtr build_metric_space(std::vector<std::string> labels, Eigen::MatrixXd distance,
                            double triangle_rtol = 1e-12);

// Common test geometries.
SpacePtr make_path(int n, double step = 1.0);
SpacePtr make_grid(int nx, int ny);                       // L1 distance
SpacePtr make_torus(int n, const std::vector<int>& skip = {});  // wraparound L1

struct CoverSet {
  std::string name;
  std::vector<int> points;  // sorted indices
};

struct OpenCover {
  std::vector<CoverSet> sets;
};

void validate_cover(const FiniteMetricSpace& space, const OpenCover& cover);

// Strictly open ball {y : d(x,y) < radius}.
std::vector<int> ball(const FiniteMetricSpace& space, int x, double radius);

// d(x, S); +inf when S is empty.
double set_distance(const FiniteMetricSpace& space, int x, const std::vector<int>& subset);

// Largest lambda such that every open lambda-ball lies inside a member:
// min_x max_i d(x, M \ U_i).  +inf when some member is the whole space.
double lebesgue_number(const FiniteMetricSpace& space, const OpenCover& cover);

// max_x #{i : B_h(x) meets U_i}, h > 0.
int h_multiplicity(const FiniteMetricSpace& space, const OpenCover& cover, double h);

struct CoverStats {
  double lebesgue;
  int multiplicity;
  double h;
  int dimension;  // multiplicity - 1
};

// h defaults to the Lebesgue number (the combination the Lipschitz bound uses).
CoverStats cover_stats(const FiniteMetricSpace& space, const OpenCover& cover,
                       double h = -1.0);

}  // namespace quantk
