#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "ddt/series.hpp"

namespace ddt {

enum class StrangenessKind { NearestNeighbor, AverageDistance };

const char* strangeness_name(StrangenessKind kind);
StrangenessKind strangeness_from_name(std::string_view name);

/// alpha_k against the other points (self excluded): nearest Euclidean
/// distance or mean distance. Throws ArgumentError for fewer than two points.
std::vector<double> strangeness_scores(std::span<const Point> points, StrangenessKind kind);

/// Deterministic transducer over a sliding window of `window` points. Holds
/// window-1 previous points; a new point joins them, every member is scored
/// against the rest, and p = #{alpha_i >= alpha_new} / window (the new point
/// counts itself, so p is in [1/window, 1]). The oldest point then leaves.
/// Distances are cached so each step costs O(window * d).
class Transducer {
 public:
  Transducer(std::size_t window, StrangenessKind kind);

  std::size_t window() const noexcept { return window_; }
  StrangenessKind kind() const noexcept { return kind_; }
  std::size_t buffered() const noexcept { return order_.size(); }
  bool ready() const noexcept { return order_.size() + 1 == window_; }

  /// Adds a reference point without scoring. Throws StateError once ready.
  void prime(const Point& x);
  /// Scores `x` and slides. Throws StateError if not ready.
  double step(const Point& x);

  /// Current alphas of the buffered points, oldest first (for testing).
  std::vector<double> buffered_scores() const;

 private:
  double dist(std::size_t a, std::size_t b) const { return dist_[a * window_ + b]; }
  void insert(const Point& x, std::size_t slot);
  void remove(std::size_t slot);
  double score(std::size_t slot, std::size_t members) const;
  void refresh_sums();

  std::size_t window_;
  StrangenessKind kind_;
  std::vector<Point> slots_;
  std::vector<double> dist_;     // window x window over slots
  std::vector<double> nn_;       // nearest distance per slot
  std::vector<std::size_t> nn_arg_;
  std::vector<double> sum_;      // distance sums per slot
  std::deque<std::size_t> order_;  // occupied slots, oldest first
  std::vector<std::size_t> free_;
  std::size_t removals_ = 0;
};

struct MartingaleConfig {
  double epsilon = 0.95;
  double lambda = 20.0;
  double t = 3.0;
  double reset_floor = 1e-6;
  std::size_t history = 250;  // p values kept for the distribution check
};

struct MartingaleStep {
  double m = 1.0;
  double delta = 0.0;
  bool lambda_reject = false;
  bool delta_reject = false;
};

struct ResetEvent {
  std::size_t step = 0;
  double m_before = 0.0;
};

/// Power martingale M <- epsilon * p^(epsilon-1) * M. Starts at 1.
struct MartingaleState {
  explicit MartingaleState(MartingaleConfig cfg = {});

  MartingaleConfig config;
  double m = 1.0;
  std::size_t steps = 0;
  std::deque<double> p_history;
  std::vector<ResetEvent> reset_log;
};

/// Throws ArgumentError unless 0 < p <= 1.
MartingaleStep martingale_step(MartingaleState& state, double p);

/// Restarts M at 1 when the check found no change and M has left
/// [reset_floor, lambda]. Returns true on reset.
bool maybe_reset(MartingaleState& state, bool change_detected);

/// epsilon * p^(epsilon-1).
double betting_function(double p, double epsilon);

}  // namespace ddt
