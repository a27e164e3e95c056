#include "quantk/nerve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace quantk {

bool NerveComplex::is_simplex(const std::vector<int>& sorted_vertices) const {
  for (const auto& m : maximal_)
    if (std::includes(m.begin(), m.end(), sorted_vertices.begin(), sorted_vertices.end()))
      return true;
  return false;
}

NerveComplex build_nerve(const FiniteMetricSpace& space, const OpenCover& cover) {
  validate_cover(space, cover);
  NerveComplex nc;
  for (const auto& s : cover.sets) nc.vertices.push_back(s.name);

  // every simplex is a subset of I(x) = {i : x in U_i} for some x
  std::set<std::vector<int>> carriers;
  for (int x = 0; x < space.size(); ++x) {
    std::vector<int> ix;
    for (int i = 0; i < static_cast<int>(cover.sets.size()); ++i)
      if (std::binary_search(cover.sets[i].points.begin(), cover.sets[i].points.end(), x))
        ix.push_back(i);
    carriers.insert(ix);
  }
  // maximal carriers
  for (const auto& c : carriers) {
    bool contained = false;
    for (const auto& other : carriers)
      if (&other != &c && other.size() > c.size() &&
          std::includes(other.begin(), other.end(), c.begin(), c.end())) {
        contained = true;
        break;
      }
    if (!contained) nc.maximal_.push_back(c);
  }
  // all faces
  std::set<std::vector<int>> faces;
  for (const auto& m : nc.maximal_) {
    const int k = static_cast<int>(m.size());
    if (k > 24) throw MetricError("nerve: simplex with > 24 vertices; refusing to enumerate");
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> f;
      for (int b = 0; b < k; ++b)
        if (mask & (1u << b)) f.push_back(m[b]);
      faces.insert(f);
    }
  }
  nc.simplices.assign(faces.begin(), faces.end());
  std::sort(nc.simplices.begin(), nc.simplices.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  nc.dim = 0;
  for (const auto& s : nc.simplices) nc.dim = std::max<int>(nc.dim, static_cast<int>(s.size()) - 1);
  return nc;
}

PartitionOfUnity partition_of_unity(const FiniteMetricSpace& space, const OpenCover& cover) {
  validate_cover(space, cover);
  const int n = space.size();
  const int m = static_cast<int>(cover.sets.size());
  PartitionOfUnity pou;
  pou.empty_complement_value = 1.0 + space.diameter();
  pou.weights.resize(n, m);

  std::vector<std::vector<int>> comp(m);
  for (int i = 0; i < m; ++i) {
    std::vector<char> in(n, 0);
    for (int p : cover.sets[i].points) in[p] = 1;
    for (int x = 0; x < n; ++x)
      if (!in[x]) comp[i].push_back(x);
    if (comp[i].empty()) pou.used_surrogate = true;
  }
  for (int x = 0; x < n; ++x) {
    double denom = 0;
    for (int i = 0; i < m; ++i) {
      double psi = comp[i].empty() ? pou.empty_complement_value : set_distance(space, x, comp[i]);
      pou.weights(x, i) = psi;
      denom += psi;
    }
    if (!(denom > 0)) throw MetricError("partition of unity: zero denominator at " + space.id(x));
    pou.weights.row(x) /= denom;
  }
  return pou;
}

std::vector<NervePoint> nerve_map(const FiniteMetricSpace& space, const OpenCover& cover) {
  auto nc = build_nerve(space, cover);
  auto pou = partition_of_unity(space, cover);
  return nerve_map(space, cover, nc, pou);
}

std::vector<NervePoint> nerve_map(const FiniteMetricSpace& space, const OpenCover&,
                                  const NerveComplex& complex, const PartitionOfUnity& pou) {
  std::vector<NervePoint> out(space.size());
  for (int x = 0; x < space.size(); ++x) {
    NervePoint p;
    for (int i = 0; i < pou.weights.cols(); ++i)
      if (pou.weights(x, i) > 0) {
        p.carrier.push_back(i);
        p.weights.push_back(pou.weights(x, i));
      }
    if (!complex.is_simplex(p.carrier))
      throw MetricError("nerve_map: carrier of " + space.id(x) +
                        " is not a simplex (corrupt inputs)");
    out[x] = std::move(p);
  }
  return out;
}

double l1_distance(const NervePoint& p, const NervePoint& q) {
  double s = 0;
  std::size_t i = 0, j = 0;
  while (i < p.carrier.size() || j < q.carrier.size()) {
    int vp = i < p.carrier.size() ? p.carrier[i] : INT32_MAX;
    int vq = j < q.carrier.size() ? q.carrier[j] : INT32_MAX;
    if (vp == vq) {
      s += std::abs(p.weights[i] - q.weights[j]);
      ++i, ++j;
    } else if (vp < vq) {
      s += p.weights[i];
      ++i;
    } else {
      s += q.weights[j];
      ++j;
    }
  }
  return s;
}

namespace {

std::vector<int> union_carrier(const NervePoint& p, const NervePoint& q) {
  std::vector<int> u;
  std::set_union(p.carrier.begin(), p.carrier.end(), q.carrier.begin(), q.carrier.end(),
                 std::back_inserter(u));
  return u;
}

// enumerate barycentric grid points of a simplex: non-negative integer
// weights summing to g over the vertex set
void enum_grid(const std::vector<int>& verts, int g, std::vector<NervePoint>& out) {
  std::vector<int> w(verts.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == w.size()) {
      w[pos] = left;
      NervePoint np;
      for (std::size_t i = 0; i < verts.size(); ++i)
        if (w[i] > 0) {
          np.carrier.push_back(verts[i]);
          np.weights.push_back(static_cast<double>(w[i]) / g);
        }
      out.push_back(std::move(np));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      w[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, g);
}

std::string key_of(const NervePoint& p) {
  std::string k;
  for (std::size_t i = 0; i < p.carrier.size(); ++i) {
    k += std::to_string(p.carrier[i]);
    k += ':';
    k += std::to_string(static_cast<long long>(std::llround(p.weights[i] * 1e12)));
    k += ';';
  }
  return k;
}

}  // namespace

int SimplicialMetric::grid_used(int dim) const {
  if (dim <= 2) return opt_.grid;
  if (dim == 3) return opt_.grid_dim3;
  return opt_.grid_high;
}

SimplicialMetric::SimplicialMetric(const NerveComplex& complex, const SimplicialMetricOptions& opt)
    : complex_(complex), opt_(opt) {
  std::map<std::string, int> seen;
  auto add_node = [&](const NervePoint& p) {
    auto k = key_of(p);
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(p);
    seen.emplace(k, id);
    return id;
  };
  std::vector<std::vector<int>> members_per_simplex;
  for (const auto& m : complex.maximal_) {
    int g = grid_used(static_cast<int>(m.size()) - 1);
    std::vector<NervePoint> pts;
    enum_grid(m, g, pts);
    std::vector<int> ids;
    for (auto& p : pts) ids.push_back(add_node(p));
    members_per_simplex.push_back(std::move(ids));
  }
  adj_.assign(nodes_.size(), {});
  for (const auto& ids : members_per_simplex)
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        double w = l1_distance(nodes_[ids[a]], nodes_[ids[b]]);
        adj_[ids[a]].push_back({ids[b], w});
        adj_[ids[b]].push_back({ids[a], w});
      }
}

std::optional<std::vector<int>> SimplicialMetric::containing_simplex(const NervePoint& p) const {
  if (complex_.is_simplex(p.carrier)) return p.carrier;
  return std::nullopt;
}

double SimplicialMetric::distance(const NervePoint& p, const NervePoint& q) const {
  if (!containing_simplex(p) || !containing_simplex(q))
    throw MetricError("simplicial_distance: point not on the complex");
  auto u = union_carrier(p, q);
  if (complex_.is_simplex(u)) return l1_distance(p, q);

  // Dijkstra over the waypoint graph, with p and q attached to every node
  // sharing a simplex with them.
  const int n = static_cast<int>(nodes_.size());
  const int src = n, dst = n + 1;
  std::vector<double> dist(n + 2, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto shares = [&](const NervePoint& a, const NervePoint& b) {
    return complex_.is_simplex(union_carrier(a, b));
  };
  dist[src] = 0;
  pq.push({0, src});
  // direct p-q never a shortcut here (they don't share a simplex)
  while (!pq.empty()) {
    auto [dcur, v] = pq.top();
    pq.pop();
    if (dcur > dist[v]) continue;
    if (v == dst) break;
    auto relax = [&](int to, double w) {
      if (dist[v] + w < dist[to]) {
        dist[to] = dist[v] + w;
        pq.push({dist[to], to});
      }
    };
    if (v == src) {
      for (int i = 0; i < n; ++i)
        if (shares(p, nodes_[i])) relax(i, l1_distance(p, nodes_[i]));
    } else {
      if (shares(nodes_[v], q)) relax(dst, l1_distance(nodes_[v], q));
      for (auto [to, w] : adj_[v]) relax(to, w);
    }
  }
  return dist[dst];
}

double simplicial_distance(const NerveComplex& complex, const NervePoint& p, const NervePoint& q,
                           const SimplicialMetricOptions& opt) {
  SimplicialMetric sm(complex, opt);
  return sm.distance(p, q);
}

LipschitzCertificate certify_lipschitz_nerve_map(const FiniteMetricSpace& space,
                                                 const OpenCover& cover, double claimed_L,
                                                 SimplicialMetricOptions opt) {
  auto nc = build_nerve(space, cover);
  auto pou = partition_of_unity(space, cover);
  auto phi = nerve_map(space, cover, nc, pou);

  LipschitzCertificate cert;
  cert.claimed_L = claimed_L;
  cert.max_ratio = 0;
  cert.used_surrogate = false;
  cert.grid = opt.grid;
  cert.pou_sum_error = 0;
  for (int x = 0; x < space.size(); ++x)
    cert.pou_sum_error =
        std::max(cert.pou_sum_error, std::abs(pou.weights.row(x).sum() - 1.0));

  SimplicialMetric sm(nc, opt);
  struct Pending {
    int x, y;
    double dm;
  };
  std::vector<Pending> cross;  // pairs needing the waypoint graph
  for (int x = 0; x < space.size(); ++x)
    for (int y = x + 1; y < space.size(); ++y) {
      auto u = union_carrier(phi[x], phi[y]);
      if (nc.is_simplex(u)) {
        double r = l1_distance(phi[x], phi[y]) / space.d(x, y);
        if (r > cert.max_ratio) {
          cert.max_ratio = r;
          cert.worst_x = x;
          cert.worst_y = y;
        }
      } else {
        cross.push_back({x, y, space.d(x, y)});
      }
    }
  cert.used_surrogate = !cross.empty();
  for (const auto& pr : cross) {
    double dn = sm.distance(phi[pr.x], phi[pr.y]);
    double r = dn / pr.dm;
    // the waypoint graph over-estimates; refine before reporting a failure
    if (r > claimed_L && std::isfinite(dn)) {
      SimplicialMetricOptions fine = opt;
      for (int rounds = 0; rounds < 2 && r > claimed_L; ++rounds) {
        fine.grid *= 2;
        fine.grid_dim3 *= 2;
        fine.grid_high *= 2;
        SimplicialMetric fsm(nc, fine);
        dn = fsm.distance(phi[pr.x], phi[pr.y]);
        r = dn / pr.dm;
        cert.grid = fine.grid;
      }
    }
    if (r > cert.max_ratio) {
      cert.max_ratio = r;
      cert.worst_x = pr.x;
      cert.worst_y = pr.y;
    }
  }
  cert.pass = cert.max_ratio <= claimed_L + 1e-12;
  return cert;
}

}  // namespace quantk
