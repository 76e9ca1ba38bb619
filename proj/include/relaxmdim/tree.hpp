#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/graph.hpp"

namespace relaxmdim {

// Tree oriented away from `root`. `labels` carries the ids the vertices had
// in whatever graph this tree was cut from (identity for a fresh tree).
struct RootedTree {
  Graph graph;
  Vertex root = 0;
  std::vector<Vertex> parent;  // parent[root] == kNoVertex
  std::vector<std::vector<Vertex>> children;
  std::vector<Vertex> labels;

  std::size_t order() const noexcept { return graph.order(); }

  static RootedTree from_graph(Graph g, Vertex root) {
    if (!is_tree(g)) throw ValidationError("rooted tree requires a connected acyclic graph");
    if (root >= g.order()) throw ValidationError("root out of range");
    RootedTree t;
    const std::size_t n = g.order();
    t.root = root;
    t.parent.assign(n, kNoVertex);
    t.children.assign(n, {});
    t.labels.resize(n);
    std::iota(t.labels.begin(), t.labels.end(), Vertex{0});
    std::vector<Vertex> order{root};
    std::vector<bool> seen(n, false);
    seen[root] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      Vertex u = order[i];
      for (Vertex v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          t.parent[v] = u;
          t.children[u].push_back(v);
          order.push_back(v);
        }
      }
    }
    t.graph = std::move(g);
    return t;
  }

  // Vertices with every child before its parent.
  std::vector<Vertex> postorder() const {
    std::vector<Vertex> order{root};
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (Vertex c : children[order[i]]) order.push_back(c);
    }
    std::reverse(order.begin(), order.end());
    return order;
  }

  // Height of the subtree hanging below each vertex (leaves have height 0).
  std::vector<std::size_t> subtree_heights() const {
    std::vector<std::size_t> h(order(), 0);
    for (Vertex v : postorder()) {
      for (Vertex c : children[v]) h[v] = std::max(h[v], h[c] + 1);
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// Stemming

struct StemResult {
  std::vector<Vertex> survivors;  // ids in the input graph, ascending
  Graph graph;                    // induced on survivors, relabeled ascending
  std::vector<std::vector<Vertex>> removed_per_round;
  bool exhausted = false;         // nothing survived the requested rounds
};

namespace detail {

// Runs `rounds` peeling rounds. A vertex is removed in a round when its
// degree among the round's starting survivors is <= 1, unless it is `keep`.
inline std::vector<std::vector<Vertex>> peel(const Graph& g, std::size_t rounds, Vertex keep,
                                             std::vector<bool>& alive) {
  const std::size_t n = g.order();
  alive.assign(n, true);
  std::vector<std::size_t> deg(n);
  for (Vertex v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::vector<std::vector<Vertex>> removed;
  std::vector<Vertex> candidates(n);
  std::iota(candidates.begin(), candidates.end(), Vertex{0});
  for (std::size_t round = 0; round < rounds; ++round) {
    std::vector<Vertex> drop;
    for (Vertex v : candidates) {
      if (alive[v] && v != keep && deg[v] <= 1) drop.push_back(v);
    }
    std::sort(drop.begin(), drop.end());
    drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
    for (Vertex v : drop) alive[v] = false;
    // Only neighbors of dropped vertices can become droppable next round.
    candidates.clear();
    for (Vertex v : drop) {
      for (Vertex u : g.neighbors(v)) {
        if (alive[u]) {
          --deg[u];
          candidates.push_back(u);
        }
      }
    }
    removed.push_back(std::move(drop));
  }
  return removed;
}

} // namespace detail

inline StemResult stem_r(const Graph& g, std::size_t r) {
  std::vector<bool> alive;
  StemResult out;
  out.removed_per_round = detail::peel(g, r, kNoVertex, alive);
  for (Vertex v = 0; v < g.order(); ++v) {
    if (alive[v]) out.survivors.push_back(v);
  }
  out.graph = induced_subgraph(g, out.survivors).graph;
  out.exhausted = out.survivors.empty() && (r > 0 || g.empty());
  return out;
}

inline StemResult stem(const Graph& g) { return stem_r(g, 1); }

// Same peeling as stem_r, but the root is never removed.
inline RootedTree down_stem_r(const RootedTree& t, std::size_t r) {
  std::vector<bool> alive;
  detail::peel(t.graph, r, t.root, alive);
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < t.order(); ++v) {
    if (alive[v]) keep.push_back(v);
  }
  auto sub = induced_subgraph(t.graph, keep);
  Vertex new_root = static_cast<Vertex>(
      std::lower_bound(sub.original.begin(), sub.original.end(), t.root) - sub.original.begin());
  RootedTree out = RootedTree::from_graph(std::move(sub.graph), new_root);
  for (std::size_t i = 0; i < out.labels.size(); ++i) out.labels[i] = t.labels[sub.original[i]];
  return out;
}

// ---------------------------------------------------------------------------
// Leaves, leaf paths and exterior major vertices

// Connected, acyclic, max degree 2. A single vertex counts as a line.
inline bool is_line_graph(const Graph& g) {
  if (g.empty() || !is_tree(g)) return false;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (g.degree(v) > 2) return false;
  }
  return true;
}

struct ExteriorMajor {
  Vertex vertex;
  std::vector<Vertex> leaves;  // leaf endpoints of its leaf paths, ascending
};

// Follows each leaf through degree-2 vertices to the first vertex of degree
// >= 3. Leaves whose walk ends at another leaf (a path component) have no
// major vertex and are skipped.
inline std::vector<ExteriorMajor> exterior_major_vertices(const Graph& g) {
  std::vector<std::vector<Vertex>> leaves_of(g.order());
  for (Vertex leaf = 0; leaf < g.order(); ++leaf) {
    if (g.degree(leaf) != 1) continue;
    Vertex prev = leaf;
    Vertex cur = g.neighbors(leaf)[0];
    while (g.degree(cur) == 2) {
      auto nb = g.neighbors(cur);
      Vertex next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
      if (cur == leaf) break;
    }
    if (g.degree(cur) >= 3) leaves_of[cur].push_back(leaf);
  }
  std::vector<ExteriorMajor> out;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (!leaves_of[v].empty()) out.push_back({v, std::move(leaves_of[v])});
  }
  return out;
}

struct SigmaEx {
  std::size_t sigma = 0;  // degree-1 vertices
  std::size_t ex = 0;     // exterior major vertices
};

inline SigmaEx count_sigma_ex(const Graph& g) {
  SigmaEx out;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (g.degree(v) == 1) ++out.sigma;
  }
  out.ex = exterior_major_vertices(g).size();
  return out;
}

// Double BFS; only valid on trees.
inline Distance tree_diameter(const Graph& g) {
  if (g.order() <= 1) return 0;
  auto d0 = bfs_distances(g, 0);
  Vertex far = static_cast<Vertex>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto d1 = bfs_distances(g, far);
  return *std::max_element(d1.begin(), d1.end());
}

// ---------------------------------------------------------------------------
// Exact relaxed metric dimension of trees

struct TreeMDReport {
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t sigma_r = 0;
  std::size_t ex_r = 0;
  bool is_line = false;
  std::size_t md = 0;
  SensorSet witness;               // ascending ids of the input tree
  Distance diameter = 0;
  bool single_vertex_stem = false; // degenerate stem, reported rather than rejected
};

// MD_k of a tree. k >= diameter gives 0. Otherwise odd k reduces to
// r = floor(k/2); a line-shaped r-stem needs one endpoint, and any other stem
// needs every leaf of each exterior major vertex except one.
inline TreeMDReport exact_tree_md(const Graph& t, std::size_t k) {
  if (!is_tree(t)) throw IncompatibleMethodError("exact tree method requires an acyclic connected graph");
  TreeMDReport rep;
  rep.k = k;
  rep.r = k / 2;
  rep.diameter = tree_diameter(t);
  auto st = stem_r(t, rep.r);
  auto counts = count_sigma_ex(st.graph);
  rep.sigma_r = counts.sigma;
  rep.ex_r = counts.ex;
  rep.is_line = is_line_graph(st.graph);
  if (k >= rep.diameter) {
    rep.md = 0;
    return rep;
  }
  if (rep.is_line) {
    rep.md = 1;
    rep.single_vertex_stem = st.graph.order() == 1;
    Vertex endpoint = 0;
    if (st.graph.order() > 1) {
      for (Vertex v = 0; v < st.graph.order(); ++v) {
        if (st.graph.degree(v) == 1) {
          endpoint = v;
          break;
        }
      }
    }
    rep.witness = {st.survivors[endpoint]};
    return rep;
  }
  for (const auto& major : exterior_major_vertices(st.graph)) {
    std::vector<Vertex> leaves;
    for (Vertex leaf : major.leaves) leaves.push_back(st.survivors[leaf]);
    std::sort(leaves.begin(), leaves.end());
    rep.witness.insert(rep.witness.end(), leaves.begin() + 1, leaves.end());
  }
  std::sort(rep.witness.begin(), rep.witness.end());
  rep.md = rep.witness.size();
  return rep;
}

// ---------------------------------------------------------------------------
// Subtree property counters

struct SubtreePropertyCounts {
  std::size_t nl = 0;  // subtrees of height exactly r
  std::size_t ne = 0;  // r-down-stemmed subtrees whose root has >= 2 children, one a line
};

// In Down-Stem_r(T_v) a non-root vertex w survives iff its own subtree has
// height >= r, which lets both properties be read off subtree heights.
inline SubtreePropertyCounts subtree_property_counts(const RootedTree& t, std::size_t r) {
  auto h = t.subtree_heights();
  const std::size_t n = t.order();
  std::vector<bool> line(n, false);
  SubtreePropertyCounts out;
  for (Vertex v : t.postorder()) {
    std::size_t surviving = 0;
    bool has_line_child = false;
    Vertex only = kNoVertex;
    for (Vertex c : t.children[v]) {
      if (h[c] >= r) {
        ++surviving;
        only = c;
        has_line_child = has_line_child || line[c];
      }
    }
    line[v] = h[v] >= r && (surviving == 0 || (surviving == 1 && line[only]));
    if (h[v] == r) ++out.nl;
    if (surviving >= 2 && has_line_child) ++out.ne;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

inline constexpr std::size_t kBruteForceLimit = 14;

struct BruteForceResult {
  std::size_t md = 0;
  SensorSet witness;
};

// Smallest k-relaxed resolving set by enumerating subsets in increasing size,
// lexicographically within a size.
inline BruteForceResult brute_force_md(const Graph& g, std::size_t k) {
  const std::size_t n = g.order();
  if (n > kBruteForceLimit) {
    throw ResourceRefusalError("brute force refuses graphs with more than " +
                               std::to_string(kBruteForceLimit) + " vertices (got " +
                               std::to_string(n) + ")");
  }
  if (n == 0 || !is_connected(g)) throw ValidationError("brute force requires a connected graph");
  auto dm = all_pairs_distances(g);
  // One mask per pair that must be told apart: the vertices that do so.
  std::vector<std::uint32_t> masks;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (dm(u, v) <= k) continue;
      std::uint32_t mask = 0;
      for (Vertex s = 0; s < n; ++s) {
        if (dm(s, u) != dm(s, v)) mask |= std::uint32_t{1} << s;
      }
      masks.push_back(mask);
    }
  }
  std::vector<Vertex> pick;
  for (std::size_t size = 0; size <= n; ++size) {
    pick.resize(size);
    std::iota(pick.begin(), pick.end(), Vertex{0});
    while (true) {
      std::uint32_t chosen = 0;
      for (Vertex s : pick) chosen |= std::uint32_t{1} << s;
      bool ok = std::all_of(masks.begin(), masks.end(),
                            [&](std::uint32_t m) { return (m & chosen) != 0; });
      if (ok) return {size, pick};
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw ValidationError("brute force found no resolving set");  // unreachable: V resolves
}

} // namespace relaxmdim
