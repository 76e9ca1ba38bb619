#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/graph.hpp"
#include "relaxmdim/offspring.hpp"
#include "relaxmdim/random.hpp"
#include "relaxmdim/tree.hpp"

namespace relaxmdim {

// Preferential-attachment tree grown from the single edge 0-1: vertex t picks
// its neighbor with probability proportional to current degree.
inline Graph ba_tree(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("ba_tree needs n >= 2");
  Rng rng(seed);
  std::vector<Edge> edges{{0, 1}};
  std::vector<Vertex> endpoints{0, 1};  // each vertex appears once per incident edge
  endpoints.reserve(2 * n);
  for (Vertex t = 2; t < n; ++t) {
    Vertex target = endpoints[rng.below(endpoints.size())];
    edges.emplace_back(target, t);
    endpoints.push_back(target);
    endpoints.push_back(t);
  }
  return Graph::from_edges(n, edges);
}

// Uniform labeled tree decoded from a uniform Pruefer sequence.
inline Graph uniform_tree(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("uniform_tree needs n >= 2");
  Rng rng(seed);
  std::vector<Vertex> code(n - 2);
  for (auto& c : code) c = static_cast<Vertex>(rng.below(n));
  std::vector<std::size_t> degree(n, 1);
  for (Vertex c : code) ++degree[c];
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  // Linear-time decoding: `leaf` is the smallest current leaf.
  Vertex ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  Vertex leaf = ptr;
  for (Vertex c : code) {
    edges.emplace_back(leaf, c);
    if (--degree[c] == 1 && c < ptr) {
      leaf = c;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, static_cast<Vertex>(n - 1));
  return Graph::from_edges(n, edges);
}

namespace detail {

// Rotates a child-count sequence summing to n-1 into the unique cyclic shift
// that is a valid depth-first (Lukasiewicz) encoding, then builds the tree.
inline RootedTree tree_from_offspring(std::vector<std::size_t> counts) {
  const std::size_t n = counts.size();
  // Start right after the first minimum of the walk S_j = sum_{i<=j} (c_i - 1).
  long long walk = 0, best = 0;
  std::size_t start = 0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    walk += static_cast<long long>(counts[j]) - 1;
    if (walk < best) {
      best = walk;
      start = j + 1;
    }
  }
  std::rotate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(start), counts.end());

  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<std::pair<Vertex, std::size_t>> open;  // vertices still owed children
  for (Vertex v = 0; v < n; ++v) {
    if (v > 0) {
      auto& top = open.back();
      edges.emplace_back(top.first, v);
      if (--top.second == 0) open.pop_back();
    }
    if (counts[v] > 0) open.emplace_back(v, counts[v]);
  }
  return RootedTree::from_graph(Graph::from_edges(n, edges), 0);
}

inline std::size_t rejection_budget(std::size_t n) {
  return 1000 * (static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1);
}

} // namespace detail

// Child counts of a GW(xi) tree conditioned on n vertices, in depth-first order.
// Poisson and geometric laws are conditioned exactly in closed form (the
// conditioned counts are multinomial, resp. a uniform weak composition);
// other laws use rejection against a budget that grows like sqrt(n).
inline std::vector<std::size_t> conditioned_offspring_counts(std::size_t n, const OffspringDistribution& xi,
                                                             Rng& rng) {
  std::vector<std::size_t> counts(n, 0);
  const std::size_t total = n - 1;
  switch (xi.family()) {
  case OffspringDistribution::Family::poisson:
    for (std::size_t ball = 0; ball < total; ++ball) ++counts[rng.below(n)];
    return counts;
  case OffspringDistribution::Family::geometric: {
    // Stars and bars: n-1 stars split by n-1 bars into n parts.
    std::vector<bool> bar(2 * total, false);
    std::fill(bar.begin() + static_cast<std::ptrdiff_t>(total), bar.end(), true);
    rng.shuffle(bar.begin(), bar.end());
    std::size_t part = 0;
    for (bool b : bar) {
      if (b) ++part;
      else ++counts[part];
    }
    return counts;
  }
  case OffspringDistribution::Family::custom:
    break;
  }
  const std::size_t budget = detail::rejection_budget(n);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    std::size_t sum = 0;
    std::size_t i = 0;
    for (; i < n && sum <= total; ++i) {
      counts[i] = xi.sample(rng);
      sum += counts[i];
    }
    if (i == n && sum == total) return counts;
  }
  throw ResourceRefusalError("conditioned GW sampler: no offspring sequence summing to " +
                             std::to_string(total) + " after " + std::to_string(budget) + " attempts");
}

// Exact sample of a GW(xi) tree conditioned on n vertices; root is vertex 0
// and ids follow depth-first order.
inline RootedTree gw_tree_conditioned(std::size_t n, const OffspringDistribution& xi, std::uint64_t seed) {
  if (n == 0) throw ValidationError("gw_tree_conditioned needs n >= 1");
  if (n == 1) return RootedTree::from_graph(Graph::from_edges(1, {}), 0);
  Rng rng(seed);
  return detail::tree_from_offspring(conditioned_offspring_counts(n, xi, rng));
}

struct ConfigurationModelReport {
  std::vector<std::size_t> degrees;  // sampled sequence, before erasure
  std::size_t erased_self_loops = 0;
  std::size_t erased_multi_edges = 0;
  std::size_t component_order = 0;
};

// Degrees 2 + X with X ~ Zipf(exponent) on 1..n-3; odd totals are repaired by
// resampling the last degree. Stubs are matched uniformly, self-loops and
// multi-edges erased, and the largest component returned.
inline Graph configuration_model(std::size_t n, std::uint64_t seed, double exponent = 2.5,
                                 ConfigurationModelReport* report = nullptr) {
  if (n < 4) throw ValidationError("configuration_model needs n >= 4");
  Rng rng(seed);
  std::vector<double> cdf(n - 3);
  double acc = 0.0;
  for (std::size_t x = 1; x <= n - 3; ++x) cdf[x - 1] = acc += std::pow(static_cast<double>(x), -exponent);
  auto zipf = [&] {
    double u = rng.uniform01() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), n - 4) + 1;
  };
  std::vector<std::size_t> degree(n);
  std::size_t total = 0;
  for (auto& d : degree) total += d = 2 + zipf();
  while (total % 2 != 0) {
    total -= degree.back();
    total += degree.back() = 2 + zipf();
  }
  std::vector<Vertex> stubs;
  stubs.reserve(total);
  for (Vertex v = 0; v < n; ++v) stubs.insert(stubs.end(), degree[v], v);
  rng.shuffle(stubs.begin(), stubs.end());
  std::vector<Edge> edges;
  edges.reserve(total / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);
  std::size_t loops = 0, multi = 0;
  Graph g = Graph::from_edges(n, edges, &loops, &multi);
  auto lcc = largest_connected_component(g);
  if (report) {
    report->degrees = std::move(degree);
    report->erased_self_loops = loops;
    report->erased_multi_edges = multi;
    report->component_order = lcc.graph.order();
  }
  return std::move(lcc.graph);
}

// factor * sqrt(log n / (n pi)).
inline double rgg_radius(std::size_t n, double radius_factor) {
  return radius_factor * std::sqrt(std::log(static_cast<double>(n)) /
                                   (static_cast<double>(n) * std::numbers::pi));
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Random geometric graph on the unit square: uniform points, edge iff the
// Euclidean distance is <= radius. Neighbors come from a grid of cells at
// least one radius wide.
inline Graph rgg(std::size_t n, double radius_factor, std::uint64_t seed,
                 std::vector<Point2>* points_out = nullptr) {
  if (n < 2) throw ValidationError("rgg needs n >= 2");
  if (!(radius_factor >= 0.0)) throw ValidationError("rgg radius factor must be nonnegative");
  Rng rng(seed);
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  const double radius = rgg_radius(n, radius_factor);
  std::vector<Edge> edges;
  if (radius > 0.0) {
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::min(std::floor(1.0 / radius), 4096.0)));
    auto cell_of = [&](double c) { return std::min(cells - 1, static_cast<std::size_t>(c * static_cast<double>(cells))); };
    std::vector<std::vector<Vertex>> grid(cells * cells);
    for (Vertex v = 0; v < n; ++v) grid[cell_of(pts[v].y) * cells + cell_of(pts[v].x)].push_back(v);
    const double r2 = radius * radius;
    for (Vertex u = 0; u < n; ++u) {
      std::size_t cx = cell_of(pts[u].x), cy = cell_of(pts[u].y);
      for (std::size_t y = cy > 0 ? cy - 1 : 0; y <= std::min(cells - 1, cy + 1); ++y) {
        for (std::size_t x = cx > 0 ? cx - 1 : 0; x <= std::min(cells - 1, cx + 1); ++x) {
          for (Vertex v : grid[y * cells + x]) {
            if (v <= u) continue;
            double dx = pts[u].x - pts[v].x, dy = pts[u].y - pts[v].y;
            if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
          }
        }
      }
    }
  }
  if (points_out) *points_out = std::move(pts);
  return Graph::from_edges(n, edges);
}

// ---------------------------------------------------------------------------

enum class Model { ba_tree, gw_tree, config_model, rgg, uniform_tree };

inline Model parse_model(const std::string& tag) {
  if (tag == "ba-tree") return Model::ba_tree;
  if (tag == "gw-tree") return Model::gw_tree;
  if (tag == "config-model") return Model::config_model;
  if (tag == "rgg") return Model::rgg;
  if (tag == "uniform-tree") return Model::uniform_tree;
  throw ValidationError("unknown model '" + tag + "'");
}

struct GeneratorConfig {
  Model model = Model::ba_tree;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string offspring = "poisson:3";  // gw-tree
  double zipf_exponent = 2.5;           // config-model
  double radius_factor = 1.5;           // rgg
};

struct GeneratedGraph {
  Graph graph;
  std::optional<Vertex> root;  // set for gw-tree
};

inline GeneratedGraph generate(const GeneratorConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("n must be >= 1");
  switch (cfg.model) {
  case Model::ba_tree: return {ba_tree(cfg.n, cfg.seed), std::nullopt};
  case Model::uniform_tree: return {uniform_tree(cfg.n, cfg.seed), std::nullopt};
  case Model::config_model: return {configuration_model(cfg.n, cfg.seed, cfg.zipf_exponent), std::nullopt};
  case Model::rgg: return {rgg(cfg.n, cfg.radius_factor, cfg.seed), std::nullopt};
  case Model::gw_tree: {
    auto t = gw_tree_conditioned(cfg.n, OffspringDistribution::parse(cfg.offspring), cfg.seed);
    return {std::move(t.graph), t.root};
  }
  }
  throw ValidationError("unhandled model");
}

} // namespace relaxmdim
