#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/parallel.hpp"

namespace relaxmdim {

using Vertex = std::uint32_t;
using Distance = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Ordered list of distinct sensor vertices.
using SensorSet = std::vector<Vertex>;

inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

// Immutable undirected simple graph in CSR form. Neighbor lists are sorted.
class Graph {
public:
  Graph() : offsets_(1, 0) {}

  // Self-loops and repeated edges are dropped; the counts are reported
  // through the optional out-parameters.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::size_t* self_loops = nullptr,
                          std::size_t* duplicates = nullptr) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    std::size_t loops = 0;
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) {
        throw ValidationError("edge endpoint out of range: " + std::to_string(std::max(u, v)));
      }
      if (u == v) {
        ++loops;
        continue;
      }
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    auto last = std::unique(canon.begin(), canon.end());
    std::size_t dups = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());
    if (self_loops) *self_loops = loops;
    if (duplicates) *duplicates = dups;

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(2 * canon.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : canon) {
      g.targets_[fill[u]++] = v;
      g.targets_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
    }
    return g;
  }

  std::size_t order() const noexcept { return offsets_.size() - 1; }
  std::size_t size() const noexcept { return targets_.size() / 2; }
  bool empty() const noexcept { return order() == 0; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Each edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(size());
    for (Vertex u = 0; u < order(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
};

// A graph together with the ids its vertices carry in a parent graph.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> original;  // new id -> parent id
};

// Induced subgraph on `keep` (any order); vertices are relabeled in
// increasing order of their parent id.
inline Subgraph induced_subgraph(const Graph& g, std::vector<Vertex> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<Vertex> relabel(g.order(), kNoVertex);
  for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (Vertex u : keep) {
    for (Vertex v : g.neighbors(u)) {
      if (u < v && relabel[v] != kNoVertex) edges.emplace_back(relabel[u], relabel[v]);
    }
  }
  return {Graph::from_edges(keep.size(), edges), std::move(keep)};
}

// ---------------------------------------------------------------------------
// Edge-list input

struct EdgeListData {
  Graph graph;
  std::vector<std::string> labels;  // id -> token as it appeared in the input
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  std::optional<Vertex> root;       // from a "# root <label>" header comment
};

// Two endpoint tokens per line, whitespace or comma separated. '#' and '%'
// start comments. Tokens are relabeled 0..n-1 in order of first appearance.
inline EdgeListData load_edge_list(std::istream& in) {
  EdgeListData out;
  std::unordered_map<std::string, Vertex> ids;
  std::vector<Edge> edges;
  std::optional<std::string> root_label;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<Vertex>(out.labels.size()));
    if (inserted) out.labels.push_back(tok);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#%");
    if (hash != std::string::npos) {
      std::istringstream comment(line.substr(hash + 1));
      std::string key, value;
      if (comment >> key >> value && key == "root" && !root_label) root_label = value;
      line.erase(hash);
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw ParseError(lineno, "expected two endpoint tokens, found one");
    if (fields >> extra) throw ParseError(lineno, "expected two endpoint tokens, found more");
    Vertex u = intern(a);
    Vertex v = intern(b);
    edges.emplace_back(u, v);
  }
  out.graph = Graph::from_edges(out.labels.size(), edges, &out.self_loops_dropped,
                                &out.duplicates_dropped);
  if (root_label) {
    auto it = ids.find(*root_label);
    if (it != ids.end()) out.root = it->second;
  }
  return out;
}

inline EdgeListData load_edge_list(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

// ---------------------------------------------------------------------------
// Connectivity

// Component index per vertex, numbered in order of smallest member.
inline std::vector<Vertex> connected_components(const Graph& g, std::size_t* count = nullptr) {
  std::vector<Vertex> comp(g.order(), kNoVertex);
  Vertex next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.order(); ++s) {
    if (comp[s] != kNoVertex) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u)) {
        if (comp[v] == kNoVertex) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

inline bool is_connected(const Graph& g) {
  std::size_t count = 0;
  connected_components(g, &count);
  return count == 1;
}

inline bool is_tree(const Graph& g) {
  return !g.empty() && g.size() + 1 == g.order() && is_connected(g);
}

// Largest component; ties go to the component holding the smallest id.
inline Subgraph largest_connected_component(const Graph& g) {
  if (g.empty()) throw ValidationError("largest_connected_component: empty graph");
  std::size_t count = 0;
  auto comp = connected_components(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (Vertex c : comp) ++sizes[c];
  // Components are numbered by smallest member, so the first maximum wins ties.
  Vertex best = static_cast<Vertex>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> keep;
  keep.reserve(sizes[best]);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (comp[v] == best) keep.push_back(v);
  }
  return induced_subgraph(g, std::move(keep));
}

// ---------------------------------------------------------------------------
// Distances

// Hop counts from `source`; unreachable vertices get kUnreachable.
inline void bfs_distances(const Graph& g, Vertex source, std::span<Distance> out) {
  std::fill(out.begin(), out.end(), kUnreachable);
  std::vector<Vertex> frontier{source};
  std::vector<Vertex> next;
  out[source] = 0;
  Distance depth = 0;
  while (!frontier.empty()) {
    ++depth;
    next.clear();
    for (Vertex u : frontier) {
      for (Vertex v : g.neighbors(u)) {
        if (out[v] == kUnreachable) {
          out[v] = depth;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
}

inline std::vector<Distance> bfs_distances(const Graph& g, Vertex source) {
  std::vector<Distance> d(g.order());
  bfs_distances(g, source, d);
  return d;
}

// Dense all-pairs hop-count matrix, row-major.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, kUnreachable) {}

  std::size_t order() const noexcept { return n_; }

  Distance operator()(Vertex u, Vertex v) const { return data_[std::size_t{u} * n_ + v]; }

  std::span<const Distance> row(Vertex u) const { return {data_.data() + std::size_t{u} * n_, n_}; }
  std::span<Distance> row(Vertex u) { return {data_.data() + std::size_t{u} * n_, n_}; }

  bool connected() const {
    return std::find(data_.begin(), data_.end(), kUnreachable) == data_.end();
  }

  // Largest finite entry.
  Distance diameter() const {
    Distance best = 0;
    for (Distance d : data_) {
      if (d != kUnreachable) best = std::max(best, d);
    }
    return best;
  }

private:
  std::size_t n_ = 0;
  std::vector<Distance> data_;
};

inline DistanceMatrix all_pairs_distances(const Graph& g) {
  DistanceMatrix dm(g.order());
  parallel_for(g.order(), [&](std::size_t s) {
    bfs_distances(g, static_cast<Vertex>(s), dm.row(static_cast<Vertex>(s)));
  });
  return dm;
}

// ---------------------------------------------------------------------------
// Identification vectors and equivalence classes

inline void validate_sensors(std::size_t n, std::span<const Vertex> sensors) {
  std::vector<bool> seen(n, false);
  for (Vertex s : sensors) {
    if (s >= n) throw ValidationError("sensor id " + std::to_string(s) + " out of range");
    if (seen[s]) throw ValidationError("duplicate sensor id " + std::to_string(s));
    seen[s] = true;
  }
}

inline std::vector<Distance> identification_vector(const DistanceMatrix& dm, Vertex u,
                                                   std::span<const Vertex> sensors) {
  if (u >= dm.order()) throw ValidationError("vertex out of range");
  validate_sensors(dm.order(), sensors);
  std::vector<Distance> phi;
  phi.reserve(sensors.size());
  for (Vertex s : sensors) phi.push_back(dm(s, u));
  return phi;
}

struct EquivalencePartition {
  // Blocks sorted internally and ordered by smallest member.
  std::vector<std::vector<Vertex>> blocks;
  std::vector<std::uint32_t> block_of;  // vertex -> index into blocks
  std::size_t alpha = 0;
  std::size_t non_resolved_count = 0;
};

namespace detail {

// Refines the trivial partition of 0..n-1 one sensor coordinate at a time;
// row_of(i) gives the distances from the i-th sensor.
template <class RowOf>
EquivalencePartition refine_partition(std::size_t n, std::size_t sensor_count, RowOf row_of) {
  std::vector<std::vector<Vertex>> blocks;
  if (n > 0) {
    blocks.emplace_back(n);
    std::iota(blocks.front().begin(), blocks.front().end(), Vertex{0});
  }
  std::vector<std::vector<Vertex>> refined;
  for (std::size_t si = 0; si < sensor_count; ++si) {
    auto row = row_of(si);
    refined.clear();
    for (auto& block : blocks) {
      if (block.size() == 1) {
        refined.push_back(std::move(block));
        continue;
      }
      std::stable_sort(block.begin(), block.end(),
                       [&](Vertex a, Vertex b) { return row[a] < row[b]; });
      std::size_t start = 0;
      for (std::size_t i = 1; i <= block.size(); ++i) {
        if (i == block.size() || row[block[i]] != row[block[start]]) {
          refined.emplace_back(block.begin() + static_cast<std::ptrdiff_t>(start),
                               block.begin() + static_cast<std::ptrdiff_t>(i));
          start = i;
        }
      }
    }
    blocks.swap(refined);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  EquivalencePartition p;
  p.block_of.assign(n, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (Vertex v : blocks[i]) p.block_of[v] = static_cast<std::uint32_t>(i);
    p.alpha = std::max(p.alpha, blocks[i].size());
    if (blocks[i].size() > 1) p.non_resolved_count += blocks[i].size();
  }
  p.blocks = std::move(blocks);
  return p;
}

} // namespace detail

// Vertices grouped by identical identification vectors. Equality is exact:
// blocks are split coordinate by coordinate rather than hashed.
inline EquivalencePartition equivalence_partition(const DistanceMatrix& dm,
                                                  std::span<const Vertex> sensors) {
  validate_sensors(dm.order(), sensors);
  return detail::refine_partition(dm.order(), sensors.size(), [&](std::size_t i) { return dm.row(sensors[i]); });
}

// Same partition from one BFS per sensor, without an all-pairs matrix.
inline EquivalencePartition equivalence_partition(const Graph& g, std::span<const Vertex> sensors) {
  validate_sensors(g.order(), sensors);
  std::vector<std::vector<Distance>> rows(sensors.size());
  parallel_for(sensors.size(), [&](std::size_t i) { rows[i] = bfs_distances(g, sensors[i]); }, 1);
  return detail::refine_partition(g.order(), sensors.size(),
                                  [&](std::size_t i) { return std::span<const Distance>(rows[i]); });
}

// True iff every pair sharing an identification vector is within distance k.
inline bool is_k_relaxed_resolving(const DistanceMatrix& dm, std::span<const Vertex> sensors,
                                   Distance k) {
  auto p = equivalence_partition(dm, sensors);
  for (const auto& block : p.blocks) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      auto row = dm.row(block[i]);
      for (std::size_t j = i + 1; j < block.size(); ++j) {
        if (row[block[j]] > k) return false;
      }
    }
  }
  return true;
}

// Memory-light variant: BFS from the sensors, then from members of shared
// classes only.
inline bool is_k_relaxed_resolving(const Graph& g, std::span<const Vertex> sensors, Distance k) {
  auto p = equivalence_partition(g, sensors);
  std::vector<Distance> dist(g.order());
  for (const auto& block : p.blocks) {
    for (std::size_t i = 0; i + 1 < block.size(); ++i) {
      bfs_distances(g, block[i], dist);
      for (std::size_t j = i + 1; j < block.size(); ++j) {
        if (dist[block[j]] > k) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural statistics

// Membership mask of the 2-core: iterative removal of degree <= 1 vertices.
inline std::vector<bool> two_core_mask(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> deg(n);
  std::vector<bool> alive(n, true);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] <= 1) {
      alive[v] = false;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    Vertex u = queue.back();
    queue.pop_back();
    for (Vertex v : g.neighbors(u)) {
      if (alive[v] && --deg[v] <= 1) {
        alive[v] = false;
        queue.push_back(v);
      }
    }
  }
  return alive;
}

inline std::size_t shell1_size(const Graph& g) {
  auto core = two_core_mask(g);
  return static_cast<std::size_t>(std::count(core.begin(), core.end(), false));
}

struct GraphStats {
  std::size_t n = 0;
  std::size_t m = 0;
  double avg_degree = 0.0;
  Distance diameter = 0;
  double avg_spl = 0.0;  // mean over ordered pairs u != v
  std::size_t shell1_size = 0;
};

inline GraphStats graph_stats(const Graph& g) {
  if (g.empty()) throw ValidationError("graph_stats: empty graph");
  if (!is_connected(g)) {
    throw ValidationError("graph_stats: graph is disconnected; extract the largest connected "
                          "component first");
  }
  const std::size_t n = g.order();
  std::vector<Distance> ecc(n);
  std::vector<std::uint64_t> total(n);
  parallel_for(n, [&](std::size_t s) {
    auto d = bfs_distances(g, static_cast<Vertex>(s));
    ecc[s] = *std::max_element(d.begin(), d.end());
    total[s] = std::accumulate(d.begin(), d.end(), std::uint64_t{0});
  });
  GraphStats st;
  st.n = n;
  st.m = g.size();
  st.avg_degree = 2.0 * static_cast<double>(st.m) / static_cast<double>(n);
  st.diameter = *std::max_element(ecc.begin(), ecc.end());
  std::uint64_t sum = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
  st.avg_spl = n > 1 ? static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(n - 1))
                     : 0.0;
  st.shell1_size = shell1_size(g);
  return st;
}

// Exact diameter without materializing the distance matrix.
inline Distance diameter(const Graph& g) {
  if (g.empty()) return 0;
  std::vector<Distance> ecc(g.order());
  parallel_for(g.order(), [&](std::size_t s) {
    auto d = bfs_distances(g, static_cast<Vertex>(s));
    ecc[s] = *std::max_element(d.begin(), d.end());
  });
  return *std::max_element(ecc.begin(), ecc.end());
}

} // namespace relaxmdim
