#include "ddt/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ddt/error.hpp"

namespace ddt {

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("points of mixed dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* strangeness_name(StrangenessKind kind) {
  return kind == StrangenessKind::NearestNeighbor ? "nn" : "avg";
}

StrangenessKind strangeness_from_name(std::string_view name) {
  if (name == "nn" || name == "nearest_neighbor") return StrangenessKind::NearestNeighbor;
  if (name == "avg" || name == "average_distance") return StrangenessKind::AverageDistance;
  throw ArgumentError("unknown strangeness kind: " + std::string(name));
}

std::vector<double> strangeness_scores(std::span<const Point> points, StrangenessKind kind) {
  const auto n = points.size();
  if (n < 2) throw ArgumentError("strangeness needs at least two points");
  std::vector<double> nn(n, kInf), sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = euclid(points[i], points[j]);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
      sum[i] += d;
      sum[j] += d;
    }
  }
  if (kind == StrangenessKind::NearestNeighbor) return nn;
  for (auto& s : sum) s /= static_cast<double>(n - 1);
  return sum;
}

Transducer::Transducer(std::size_t window, StrangenessKind kind)
    : window_(window), kind_(kind) {
  if (window < 3) throw ArgumentError("transducer window must be at least 3");
  slots_.resize(window);
  dist_.assign(window * window, 0.0);
  nn_.assign(window, kInf);
  nn_arg_.assign(window, window);
  sum_.assign(window, 0.0);
  for (std::size_t s = window; s-- > 0;) free_.push_back(s);
}

void Transducer::insert(const Point& x, std::size_t slot) {
  if (!order_.empty() && x.size() != slots_[order_.front()].size())
    throw ArgumentError("transducer: point of different dimension");
  slots_[slot] = x;
  nn_[slot] = kInf;
  nn_arg_[slot] = window_;
  sum_[slot] = 0.0;
  for (auto o : order_) {
    const double d = euclid(slots_[o], x);
    dist_[o * window_ + slot] = d;
    dist_[slot * window_ + o] = d;
    sum_[o] += d;
    sum_[slot] += d;
    if (d < nn_[o]) {
      nn_[o] = d;
      nn_arg_[o] = slot;
    }
    if (d < nn_[slot]) {
      nn_[slot] = d;
      nn_arg_[slot] = o;
    }
  }
  order_.push_back(slot);
}

void Transducer::remove(std::size_t slot) {
  order_.erase(std::find(order_.begin(), order_.end(), slot));
  free_.push_back(slot);
  for (auto o : order_) {
    sum_[o] -= dist(o, slot);
    if (nn_arg_[o] != slot) continue;
    nn_[o] = kInf;
    nn_arg_[o] = window_;
    for (auto q : order_) {
      if (q == o) continue;
      if (dist(o, q) < nn_[o]) {
        nn_[o] = dist(o, q);
        nn_arg_[o] = q;
      }
    }
  }
  // Sums drift under repeated subtraction; rebuild them once per window.
  if (++removals_ % window_ == 0) refresh_sums();
}

void Transducer::refresh_sums() {
  for (auto a : order_) {
    double s = 0.0;
    for (auto b : order_)
      if (a != b) s += dist(a, b);
    sum_[a] = s;
  }
}

double Transducer::score(std::size_t slot, std::size_t members) const {
  if (kind_ == StrangenessKind::NearestNeighbor) return nn_[slot];
  return sum_[slot] / static_cast<double>(members - 1);
}

void Transducer::prime(const Point& x) {
  if (ready()) throw StateError("transducer buffer is already full");
  const auto slot = free_.back();
  free_.pop_back();
  insert(x, slot);
}

double Transducer::step(const Point& x) {
  if (!ready()) throw StateError("transducer buffer is not full");
  const auto slot = free_.back();
  free_.pop_back();
  insert(x, slot);
  const double a_new = score(slot, window_);
  std::size_t count = 0;
  for (auto o : order_)
    if (score(o, window_) >= a_new) ++count;
  remove(order_.front());
  return static_cast<double>(count) / static_cast<double>(window_);
}

std::vector<double> Transducer::buffered_scores() const {
  std::vector<double> out;
  for (auto o : order_) out.push_back(score(o, order_.size()));
  return out;
}

MartingaleState::MartingaleState(MartingaleConfig cfg) : config(cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw ArgumentError("martingale epsilon must be in (0,1)");
  if (!(cfg.lambda > 0.0) || !(cfg.t > 0.0) || !(cfg.reset_floor > 0.0))
    throw ArgumentError("martingale lambda, t and reset floor must be positive");
}

double betting_function(double p, double epsilon) { return epsilon * std::pow(p, epsilon - 1.0); }

MartingaleStep martingale_step(MartingaleState& state, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("martingale p must be in (0,1]");
  MartingaleStep out;
  const double before = state.m;
  state.m = betting_function(p, state.config.epsilon) * state.m;
  ++state.steps;
  state.p_history.push_back(p);
  while (state.p_history.size() > state.config.history) state.p_history.pop_front();
  out.m = state.m;
  out.delta = state.m - before;
  out.lambda_reject = state.m >= state.config.lambda;
  out.delta_reject = std::fabs(out.delta) >= state.config.t;
  return out;
}

bool maybe_reset(MartingaleState& state, bool change_detected) {
  if (change_detected) return false;
  if (state.m >= state.config.reset_floor && state.m <= state.config.lambda) return false;
  state.reset_log.push_back({state.steps, state.m});
  state.m = 1.0;
  return true;
}

}  // namespace ddt
