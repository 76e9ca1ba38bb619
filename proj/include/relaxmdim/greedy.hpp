#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/graph.hpp"
#include "relaxmdim/parallel.hpp"

namespace relaxmdim {

// The unordered vertex pairs a sensor set has to tell apart, indexed densely.
// Coverage rows are never stored: sensor s covers {u, w} iff d(s,u) != d(s,w),
// which is read straight from the distance matrix when needed.
class PairUniverse {
public:
  // Every pair at distance > k.
  static PairUniverse relaxed(const DistanceMatrix& dm, Distance k) {
    PairUniverse U;
    const std::size_t n = dm.order();
    for (Vertex u = 0; u < n; ++u) {
      auto row = dm.row(u);
      for (Vertex w = u + 1; w < n; ++w) {
        if (row[w] > k) U.pairs_.emplace_back(u, w);
      }
    }
    return U;
  }

  // Every pair inside `targets`, whatever their distance.
  static PairUniverse within(const DistanceMatrix& dm, std::span<const Vertex> targets) {
    validate_sensors(dm.order(), targets);
    std::vector<Vertex> sorted(targets.begin(), targets.end());
    std::sort(sorted.begin(), sorted.end());
    PairUniverse U;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      for (std::size_t j = i + 1; j < sorted.size(); ++j) U.pairs_.emplace_back(sorted[i], sorted[j]);
    }
    return U;
  }

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const std::vector<Edge>& pairs() const noexcept { return pairs_; }

  static bool covers(const DistanceMatrix& dm, Vertex sensor, Edge pair) {
    auto row = dm.row(sensor);
    return row[pair.first] != row[pair.second];
  }

  // Materialized coverage row of one candidate sensor.
  std::vector<bool> coverage(const DistanceMatrix& dm, Vertex sensor) const {
    std::vector<bool> bits(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) bits[i] = covers(dm, sensor, pairs_[i]);
    return bits;
  }

private:
  std::vector<Edge> pairs_;
};

struct GreedyStep {
  std::size_t pick_index = 0;
  Vertex sensor = 0;
  std::size_t newly_covered = 0;
  std::size_t remaining = 0;
};

using GreedyTrace = std::vector<GreedyStep>;

struct GreedyResult {
  SensorSet sensors;  // in pick order
  GreedyTrace trace;
};

namespace detail {

inline std::size_t marginal_gain(const DistanceMatrix& dm, Vertex c, std::span<const Edge> live) {
  auto row = dm.row(c);
  std::size_t gain = 0;
  for (auto [u, w] : live) gain += row[u] != row[w];
  return gain;
}

} // namespace detail

// Greedy set cover over `U`: repeatedly pick the vertex distinguishing the
// most still-uncovered pairs, ties to the smallest id. Marginal gains only
// shrink as pairs get covered, so stale gains are valid upper bounds and a
// candidate is re-evaluated only when it reaches the top of the queue.
inline GreedyResult greedy_cover(const DistanceMatrix& dm, const PairUniverse& U) {
  GreedyResult out;
  std::vector<Edge> live = U.pairs();
  if (live.empty()) return out;
  const std::size_t n = dm.order();

  struct Entry {
    std::size_t gain;
    Vertex vertex;
    std::size_t round;
  };
  auto lower = [](const Entry& a, const Entry& b) {
    return a.gain != b.gain ? a.gain < b.gain : a.vertex > b.vertex;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  {
    std::vector<std::size_t> gains(n);
    parallel_for(n, [&](std::size_t c) {
      gains[c] = detail::marginal_gain(dm, static_cast<Vertex>(c), live);
    }, 4);
    for (Vertex c = 0; c < n; ++c) heap.push({gains[c], c, 0});
  }

  std::size_t round = 0;
  while (!live.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != round) {
      top.gain = detail::marginal_gain(dm, top.vertex, live);
      top.round = round;
      heap.push(top);
      continue;
    }
    if (top.gain == 0) throw std::logic_error("greedy_cover: no candidate covers a remaining pair");
    auto row = dm.row(top.vertex);
    std::size_t before = live.size();
    std::erase_if(live, [&](const Edge& p) { return row[p.first] != row[p.second]; });
    out.sensors.push_back(top.vertex);
    out.trace.push_back({out.trace.size(), top.vertex, before - live.size(), live.size()});
    ++round;
  }
  return out;
}

// Approximate minimum k-relaxed resolving set.
inline GreedyResult greedy_k_resolving_set(const DistanceMatrix& dm, Distance k) {
  if (dm.order() == 0) throw ValidationError("greedy resolver: empty graph");
  if (!dm.connected()) throw ValidationError("greedy resolver requires a connected graph");
  return greedy_cover(dm, PairUniverse::relaxed(dm, k));
}

// Sensors, drawn from all vertices, giving every vertex of `targets` its own
// identification vector.
inline SensorSet greedy_resolve_within(const DistanceMatrix& dm, std::span<const Vertex> targets) {
  if (targets.empty()) throw ValidationError("greedy_resolve_within: empty target set");
  return greedy_cover(dm, PairUniverse::within(dm, targets)).sensors;
}

} // namespace relaxmdim
