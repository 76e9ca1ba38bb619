#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/graph.hpp"
#include "relaxmdim/greedy.hpp"
#include "relaxmdim/parallel.hpp"
#include "relaxmdim/tree.hpp"

namespace relaxmdim {

enum class Resolver { exact_tree, greedy };

inline Resolver parse_resolver(const std::string& tag) {
  if (tag == "exact-tree") return Resolver::exact_tree;
  if (tag == "greedy") return Resolver::greedy;
  throw ValidationError("unknown resolver '" + tag + "'");
}

struct SweepRecord {
  std::size_t k = 0;
  SensorSet sensor_set;
  std::size_t sensors = 0;
  double sensor_fraction = 0.0;
  std::size_t non_resolved_count = 0;
  double non_resolved_ratio = 0.0;
  std::size_t alpha = 0;
  double alpha_fraction = 0.0;
  std::map<std::size_t, std::size_t> class_histogram;  // block size -> count, singletons omitted
};

inline SweepRecord summarize(const DistanceMatrix& dm, std::size_t k, SensorSet sensors) {
  const auto n = static_cast<double>(dm.order());
  auto part = equivalence_partition(dm, sensors);
  SweepRecord rec;
  rec.k = k;
  rec.sensors = sensors.size();
  rec.sensor_set = std::move(sensors);
  rec.sensor_fraction = static_cast<double>(rec.sensors) / n;
  rec.non_resolved_count = part.non_resolved_count;
  rec.non_resolved_ratio = static_cast<double>(part.non_resolved_count) / n;
  rec.alpha = part.alpha;
  rec.alpha_fraction = static_cast<double>(part.alpha) / n;
  for (const auto& block : part.blocks) {
    if (block.size() > 1) ++rec.class_histogram[block.size()];
  }
  return rec;
}

// Sensor fraction, non-resolved ratio and largest class per k. `dm` must be
// the distance matrix of `g`.
inline std::vector<SweepRecord> sweep_metrics(const Graph& g, const DistanceMatrix& dm,
                                              std::span<const std::size_t> k_values, Resolver resolver) {
  if (g.empty() || !is_connected(g)) throw ValidationError("sweep requires a connected graph");
  if (dm.order() != g.order()) throw ValidationError("distance matrix does not match the graph");
  if (resolver == Resolver::exact_tree && !is_tree(g)) {
    throw IncompatibleMethodError("exact tree resolver requested on a graph with cycles");
  }
  std::vector<SweepRecord> out(k_values.size());
  parallel_for(k_values.size(), [&](std::size_t i) {
    std::size_t k = k_values[i];
    SensorSet s = resolver == Resolver::exact_tree
                      ? exact_tree_md(g, k).witness
                      : greedy_k_resolving_set(dm, static_cast<Distance>(k)).sensors;
    out[i] = summarize(dm, k, std::move(s));
  }, 1);
  return out;
}

inline std::vector<SweepRecord> sweep_metrics(const Graph& g, std::span<const std::size_t> k_values,
                                              Resolver resolver) {
  if (g.empty() || !is_connected(g)) throw ValidationError("sweep requires a connected graph");
  if (resolver == Resolver::exact_tree && !is_tree(g)) {
    throw IncompatibleMethodError("exact tree resolver requested on a graph with cycles");
  }
  return sweep_metrics(g, all_pairs_distances(g), k_values, resolver);
}

struct ClassResolution {
  std::vector<Vertex> members;  // one phase-1 equivalence class, |members| >= 2
  SensorSet sensors;            // phase-2 sensors separating the class
};

struct TwoStepResult {
  std::size_t k = 0;
  SensorSet s1;
  std::vector<ClassResolution> classes;
  std::vector<Vertex> worst_class;  // a class needing max_s2 sensors, smallest member first on ties
  std::size_t max_s2 = 0;
  std::size_t qstar = 0;
};

// Passive k-relaxed placement followed by the largest active placement any
// phase-1 class can require. Singleton classes need nothing and are skipped.
inline TwoStepResult two_step_qstar(const DistanceMatrix& dm, std::size_t k) {
  TwoStepResult res;
  res.k = k;
  res.s1 = greedy_k_resolving_set(dm, static_cast<Distance>(k)).sensors;
  auto part = equivalence_partition(dm, res.s1);
  for (auto& block : part.blocks) {
    if (block.size() < 2) continue;
    ClassResolution cls;
    cls.sensors = greedy_resolve_within(dm, block);
    cls.members = std::move(block);
    // Blocks arrive ordered by smallest member, so strict > keeps the first.
    if (res.worst_class.empty() || cls.sensors.size() > res.max_s2) {
      res.max_s2 = cls.sensors.size();
      res.worst_class = cls.members;
    }
    res.classes.push_back(std::move(cls));
  }
  res.qstar = res.s1.size() + res.max_s2;
  return res;
}

inline TwoStepResult two_step_qstar(const Graph& g, std::size_t k) {
  if (g.empty() || !is_connected(g)) throw ValidationError("two-step requires a connected graph");
  return two_step_qstar(all_pairs_distances(g), k);
}

// q*_k for k = 0..k_max against one distance matrix.
inline std::vector<TwoStepResult> qstar_curve(const DistanceMatrix& dm, std::size_t k_max) {
  if (dm.order() == 0 || !dm.connected()) throw ValidationError("two-step requires a connected graph");
  if (k_max > dm.diameter()) {
    throw ValidationError("k_max " + std::to_string(k_max) + " exceeds the diameter " +
                          std::to_string(dm.diameter()));
  }
  std::vector<TwoStepResult> out(k_max + 1);
  parallel_for(k_max + 1, [&](std::size_t k) { out[k] = two_step_qstar(dm, k); }, 1);
  return out;
}

inline std::vector<TwoStepResult> qstar_curve(const Graph& g, std::size_t k_max) {
  if (g.empty() || !is_connected(g)) throw ValidationError("two-step requires a connected graph");
  return qstar_curve(all_pairs_distances(g), k_max);
}

} // namespace relaxmdim
