#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ddt/measures.hpp"
#include "ddt/series.hpp"

namespace ddt {

/// Which window a point came from: the reference (red) or the moving (white).
enum class Origin : std::uint8_t { R, W };

struct LabeledPoint {
  Point vector;
  Origin origin = Origin::R;
  std::size_t index = 0;  // stable id, position in the input list
};

/// Labels `r` as R and `w` as W, indices running over the concatenation.
std::vector<LabeledPoint> label_points(std::span<const Point> r, std::span<const Point> w);

enum class Dominance { Less, Greater, Equal, Parallel };

/// Componentwise comparison. Throws ArgumentError on dimension mismatch.
Dominance dominance(std::span<const double> a, std::span<const double> b);

/// Distinct vectors of the input; identical points collapse into one node.
struct PosetNode {
  Point vector;
  std::vector<std::size_t> members;  // indices into PosetDag::points
  std::size_t level = 0;             // longest-path depth from the source, >= 1
};

struct PosetDag {
  std::vector<LabeledPoint> points;
  std::vector<PosetNode> nodes;  // lexicographic order of vectors
  Point source;                  // componentwise minimum - margin
  Point sink;                    // componentwise maximum + margin
  /// Directed node pairs (a, b) with a < b componentwise, plus source and
  /// sink edges. Node ids index `nodes`; source_id() and sink_id() are the
  /// synthetic ends.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t width = 0;  // largest level (antichain) encountered

  std::size_t source_id() const noexcept { return nodes.size(); }
  std::size_t sink_id() const noexcept { return nodes.size() + 1; }
};

/// Builds the dominance DAG. Points are presorted lexicographically, which is
/// a linear extension of the componentwise order, so each node only needs
/// to be compared with its predecessors. Throws ArgumentError for fewer than
/// two points or mixed dimensions.
PosetDag build_poset(std::vector<LabeledPoint> points);

enum class OrderingMethod { Poset, Mst };

struct TopoPartition {
  std::vector<std::vector<LabeledPoint>> bins;
  OrderingMethod method = OrderingMethod::Poset;
  std::size_t parallelism = 0;  // largest bin
  /// Set when parallelism exceeds a quarter of the points: bins are then too
  /// wide for the within-bin order to carry information.
  bool parallelism_warning = false;
};

/// Bin i holds the nodes at longest-path depth i; lexicographic within bins.
TopoPartition topo_partition_poset(const PosetDag& dag);

struct TreeEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

struct SpanningTree {
  std::vector<LabeledPoint> nodes;
  std::vector<TreeEdge> edges;
  double total_weight = 0.0;
};

/// Euclidean minimum spanning tree, Kruskal with union-find over all
/// n(n-1)/2 edges sorted by (weight, i, j).
SpanningTree build_mst(std::vector<LabeledPoint> points);

/// Simultaneous leaf peeling: bin 1 holds the leaves, each next bin the nodes
/// left with at most one unvisited neighbour. The last bin holds one or two
/// roots.
TopoPartition topo_partition_mst(const SpanningTree& tree);

/// Step CDF of one origin along the traversal order (bin-major, then
/// within-bin order). Support points are traversal positions 1, 2, ...;
/// consecutive identical vectors share one position. Throws ArgumentError if
/// the origin is absent.
Ecdf1D ecdf_from_partition(const TopoPartition& partition, Origin origin);

/// Both origin CDFs at once.
std::pair<Ecdf1D, Ecdf1D> partition_ecdfs(const TopoPartition& partition);

/// Orders the pooled windows with `method` and returns the partition.
TopoPartition order_windows(std::span<const Point> r, std::span<const Point> w,
                            OrderingMethod method);

}  // namespace ddt
