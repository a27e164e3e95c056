#pragma once

#include "quantk/metric.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace quantk {

// Nerve of a cover: one vertex per member, a simplex per family of members
// with non-empty common intersection.  Simplices are stored as sorted
// vertex-index sets, closed under subsets.
struct NerveComplex {
  std::vector<std::string> vertices;
  std::vector<std::vector<int>> simplices;  // sorted, includes all faces
  int dim = 0;

  bool is_simplex(const std::vector<int>& sorted_vertices) const;
  const std::vector<std::vector<int>>& maximal() const { return maximal_; }
  std::vector<std::vector<int>> maximal_;  // filled by build_nerve
};

NerveComplex build_nerve(const FiniteMetricSpace& space, const OpenCover& cover);

// phi_i(x) = psi_i(x) / sum_j psi_j(x), psi_i(x) = d(x, M \ U_i).
// A member equal to the whole space has empty complement; its psi is the
// finite surrogate 1 + diam(M) so the quotient stays defined.
struct PartitionOfUnity {
  Eigen::MatrixXd weights;        // (points) x (members)
  double empty_complement_value;  // surrogate used for d(x, emptyset), if any
  bool used_surrogate = false;
};

PartitionOfUnity partition_of_unity(const FiniteMetricSpace& space, const OpenCover& cover);

// Point of the nerve: carrier simplex plus barycentric weights, weights > 0
// and summing to 1.
struct NervePoint {
  std::vector<int> carrier;     // sorted vertex indices
  std::vector<double> weights;  // same length
};

std::vector<NervePoint> nerve_map(const FiniteMetricSpace& space, const OpenCover& cover);
std::vector<NervePoint> nerve_map(const FiniteMetricSpace& space, const OpenCover& cover,
                                  const NerveComplex& complex, const PartitionOfUnity& pou);

// l1 distance between two points inside a common simplex.
double l1_distance(const NervePoint& p, const NervePoint& q);

// Simplicial distance.  Inside a shared simplex this is the exact l1
// formula; across simplices it is the shortest path through a barycentric
// waypoint graph with `grid` subdivisions per edge (an over-approximation
// of the polyhedral metric that shrinks as the grid refines).  +inf when
// p and q live in different components.
struct SimplicialMetricOptions {
  int grid = 8;           // subdivisions for dim <= 2 simplices
  int grid_dim3 = 4;      // dim == 3
  int grid_high = 2;      // dim >= 4
};

double simplicial_distance(const NerveComplex& complex, const NervePoint& p,
                           const NervePoint& q, const SimplicialMetricOptions& opt = {});

// Precomputed waypoint graph for many queries against one complex.
class SimplicialMetric {
 public:
  SimplicialMetric(const NerveComplex& complex, const SimplicialMetricOptions& opt = {});
  double distance(const NervePoint& p, const NervePoint& q) const;
  int grid_used(int dim) const;

 private:
  const NerveComplex& complex_;
  SimplicialMetricOptions opt_;
  // nodes are barycentric points with rational weights over a common grid
  std::vector<NervePoint> nodes_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::optional<std::vector<int>> containing_simplex(const NervePoint& p) const;
  friend struct SimplicialMetricTester;
};

struct LipschitzCertificate {
  double claimed_L;
  double max_ratio;
  bool pass;
  int worst_x = -1, worst_y = -1;
  int grid = 0;          // waypoint resolution used for the worst pair
  bool used_surrogate;   // whether any pair needed the waypoint graph
  double pou_sum_error;  // max |sum_i phi_i(x) - 1|
};

// Exhaustive check of d_N(phi x, phi y) <= L * d_M(x, y) over all pairs.
// Near-violations trigger grid refinement (the surrogate only ever
// over-estimates, so refining can only help a true pass).
LipschitzCertificate certify_lipschitz_nerve_map(const FiniteMetricSpace& space,
                                                 const OpenCover& cover, double claimed_L,
                                                 SimplicialMetricOptions opt = {});

}  // namespace quantk
