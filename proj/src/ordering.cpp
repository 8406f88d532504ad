#include "ddt/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ddt/error.hpp"

namespace ddt {

std::vector<LabeledPoint> label_points(std::span<const Point> r, std::span<const Point> w) {
  std::vector<LabeledPoint> out;
  out.reserve(r.size() + w.size());
  for (const auto& p : r) out.push_back({p, Origin::R, out.size()});
  for (const auto& p : w) out.push_back({p, Origin::W, out.size()});
  return out;
}

Dominance dominance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("dominance: dimension mismatch");
  bool le = true, ge = true;
  for (std::size_t i = 0; i < a.size() && (le || ge); ++i) {
    if (a[i] < b[i]) ge = false;
    else if (a[i] > b[i]) le = false;
  }
  if (le && ge) return Dominance::Equal;
  if (le) return Dominance::Less;
  if (ge) return Dominance::Greater;
  return Dominance::Parallel;
}

namespace {

void check_points(const std::vector<LabeledPoint>& points) {
  if (points.size() < 2) throw ArgumentError("ordering needs at least two points");
  const auto d = points.front().vector.size();
  if (d == 0) throw ArgumentError("ordering needs points of dimension >= 1");
  for (const auto& p : points) {
    if (p.vector.size() != d) throw ArgumentError("ordering: points of mixed dimension");
    for (double v : p.vector)
      if (!std::isfinite(v)) throw ArgumentError("ordering: non-finite component");
  }
}

bool lex_then_index(const LabeledPoint& a, const LabeledPoint& b) {
  if (a.vector != b.vector) return a.vector < b.vector;
  return a.index < b.index;
}

void finish_partition(TopoPartition& p, std::size_t total) {
  p.parallelism = 0;
  for (auto& bin : p.bins) {
    std::sort(bin.begin(), bin.end(), lex_then_index);
    p.parallelism = std::max(p.parallelism, bin.size());
  }
  p.parallelism_warning = 4 * p.parallelism > total;
}

}  // namespace

PosetDag build_poset(std::vector<LabeledPoint> points) {
  check_points(points);
  PosetDag dag;
  dag.points = std::move(points);
  const auto d = dag.points.front().vector.size();

  std::vector<std::size_t> order(dag.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return lex_then_index(dag.points[a], dag.points[b]);
  });
  for (auto i : order) {
    const auto& v = dag.points[i].vector;
    if (dag.nodes.empty() || dag.nodes.back().vector != v) dag.nodes.push_back({v, {}, 0});
    dag.nodes.back().members.push_back(i);
  }

  const auto k = dag.nodes.size();
  std::vector<bool> has_succ(k, false);
  std::size_t max_level = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t level = 1;
    const auto& vj = dag.nodes[j].vector;
    // Lexicographic order extends dominance: only earlier nodes can be below j.
    for (std::size_t i = 0; i < j; ++i) {
      if (dominance(dag.nodes[i].vector, vj) == Dominance::Less) {
        dag.edges.emplace_back(i, j);
        has_succ[i] = true;
        level = std::max(level, dag.nodes[i].level + 1);
      }
    }
    dag.nodes[j].level = level;
    max_level = std::max(max_level, level);
  }
  std::vector<std::size_t> per_level(max_level + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    ++per_level[dag.nodes[i].level];
    if (dag.nodes[i].level == 1) dag.edges.emplace_back(dag.source_id(), i);
    if (!has_succ[i]) dag.edges.emplace_back(i, dag.sink_id());
  }
  dag.width = *std::max_element(per_level.begin(), per_level.end());

  dag.source.assign(d, 0.0);
  dag.sink.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double lo = dag.nodes.front().vector[c], hi = lo;
    for (const auto& n : dag.nodes) {
      lo = std::min(lo, n.vector[c]);
      hi = std::max(hi, n.vector[c]);
    }
    dag.source[c] = lo - 1.0;
    dag.sink[c] = hi + 1.0;
  }
  return dag;
}

TopoPartition topo_partition_poset(const PosetDag& dag) {
  TopoPartition p;
  p.method = OrderingMethod::Poset;
  std::size_t levels = 0;
  for (const auto& n : dag.nodes) levels = std::max(levels, n.level);
  p.bins.resize(levels);
  for (const auto& n : dag.nodes)
    for (auto m : n.members) p.bins[n.level - 1].push_back(dag.points[m]);
  finish_partition(p, dag.points.size());
  return p;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent, rank;
  explicit DisjointSets(std::size_t n) : parent(n), rank(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
    return true;
  }
};

}  // namespace

SpanningTree build_mst(std::vector<LabeledPoint> points) {
  check_points(points);
  SpanningTree tree;
  tree.nodes = std::move(points);
  const auto n = tree.nodes.size();
  const auto d = tree.nodes.front().vector.size();

  std::vector<TreeEdge> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = tree.nodes[i].vector;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& b = tree.nodes[j].vector;
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double t = a[c] - b[c];
        s += t * t;
      }
      candidates.push_back({i, j, std::sqrt(s)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const TreeEdge& x, const TreeEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  DisjointSets sets(n);
  tree.edges.reserve(n - 1);
  for (const auto& e : candidates) {
    if (!sets.unite(e.a, e.b)) continue;
    tree.edges.push_back(e);
    tree.total_weight += e.weight;
    if (tree.edges.size() == n - 1) break;
  }
  return tree;
}

TopoPartition topo_partition_mst(const SpanningTree& tree) {
  const auto n = tree.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : tree.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = adj[i].size();

  TopoPartition p;
  p.method = OrderingMethod::Mst;
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> layer;
  for (std::size_t i = 0; i < n; ++i)
    if (degree[i] <= 1) layer.push_back(i);
  std::size_t seen = 0;
  while (!layer.empty()) {
    for (auto v : layer) visited[v] = true;
    seen += layer.size();
    std::vector<LabeledPoint> bin;
    for (auto v : layer) bin.push_back(tree.nodes[v]);
    p.bins.push_back(std::move(bin));

    std::vector<std::size_t> next;
    for (auto v : layer) {
      for (auto u : adj[v]) {
        if (visited[u]) continue;
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  if (seen != n) throw ArgumentError("spanning tree is not connected");
  finish_partition(p, n);
  return p;
}

std::pair<Ecdf1D, Ecdf1D> partition_ecdfs(const TopoPartition& partition) {
  std::size_t total_r = 0, total_w = 0;
  for (const auto& bin : partition.bins)
    for (const auto& pt : bin) (pt.origin == Origin::R ? total_r : total_w)++;
  if (total_r == 0 || total_w == 0)
    throw ArgumentError("partition must contain points of both origins");

  std::vector<double> sr, cr, sw, cw;
  std::size_t seen_r = 0, seen_w = 0, position = 0;
  const Point* prev = nullptr;
  // Positions advance per distinct consecutive vector; each origin records
  // its cumulative count at positions where it has a point.
  auto flush = [&](bool had_r, bool had_w) {
    if (had_r) {
      sr.push_back(static_cast<double>(position));
      cr.push_back(static_cast<double>(seen_r) / static_cast<double>(total_r));
    }
    if (had_w) {
      sw.push_back(static_cast<double>(position));
      cw.push_back(static_cast<double>(seen_w) / static_cast<double>(total_w));
    }
  };
  bool had_r = false, had_w = false;
  for (const auto& bin : partition.bins) {
    for (const auto& pt : bin) {
      if (prev == nullptr || pt.vector != *prev) {
        if (prev != nullptr) flush(had_r, had_w);
        ++position;
        had_r = had_w = false;
      }
      if (pt.origin == Origin::R) {
        ++seen_r;
        had_r = true;
      } else {
        ++seen_w;
        had_w = true;
      }
      prev = &pt.vector;
    }
  }
  flush(had_r, had_w);
  cr.back() = 1.0;
  cw.back() = 1.0;
  return {Ecdf1D(std::move(sr), std::move(cr), total_r),
          Ecdf1D(std::move(sw), std::move(cw), total_w)};
}

Ecdf1D ecdf_from_partition(const TopoPartition& partition, Origin origin) {
  std::size_t r = 0, w = 0;
  for (const auto& bin : partition.bins)
    for (const auto& pt : bin) (pt.origin == Origin::R ? r : w)++;
  if ((origin == Origin::R ? r : w) == 0)
    throw ArgumentError("partition has no points of the requested origin");
  if (r == 0 || w == 0) {
    // single-origin partition: build the one CDF directly
    std::vector<double> s, c;
    std::size_t pos = 0, seen = 0;
    const auto total = origin == Origin::R ? r : w;
    const Point* prev = nullptr;
    for (const auto& bin : partition.bins)
      for (const auto& pt : bin) {
        if (prev == nullptr || pt.vector != *prev) {
          ++pos;
          s.push_back(static_cast<double>(pos));
          c.push_back(0.0);
        }
        c.back() = static_cast<double>(++seen) / static_cast<double>(total);
        prev = &pt.vector;
      }
    c.back() = 1.0;
    return Ecdf1D(std::move(s), std::move(c), total);
  }
  auto both = partition_ecdfs(partition);
  return origin == Origin::R ? std::move(both.first) : std::move(both.second);
}

TopoPartition order_windows(std::span<const Point> r, std::span<const Point> w,
                            OrderingMethod method) {
  auto pts = label_points(r, w);
  if (method == OrderingMethod::Poset) return topo_partition_poset(build_poset(std::move(pts)));

  // Equal vectors would be split across layers by zero-length edges, so the
  // tree is built over distinct vectors and each node brings its copies along.
  std::map<Point, std::size_t> slot;
  std::vector<LabeledPoint> unique;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [it, fresh] = slot.emplace(pts[i].vector, unique.size());
    if (fresh) {
      unique.push_back(pts[i]);
      unique.back().index = unique.size() - 1;
      members.emplace_back();
    }
    members[it->second].push_back(i);
  }
  TopoPartition p;
  p.method = OrderingMethod::Mst;
  if (unique.size() == 1) {
    p.bins.push_back(std::move(pts));
    finish_partition(p, p.bins.front().size());
    return p;
  }
  const auto tree = topo_partition_mst(build_mst(std::move(unique)));
  for (const auto& bin : tree.bins) {
    std::vector<LabeledPoint> full;
    for (const auto& u : bin)
      for (auto i : members[u.index]) full.push_back(pts[i]);
    p.bins.push_back(std::move(full));
  }
  finish_partition(p, pts.size());
  return p;
}

}  // namespace ddt
