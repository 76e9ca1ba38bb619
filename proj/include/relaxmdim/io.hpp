#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "relaxmdim/graph.hpp"
#include "relaxmdim/greedy.hpp"
#include "relaxmdim/gw.hpp"
#include "relaxmdim/localization.hpp"
#include "relaxmdim/tree.hpp"

namespace relaxmdim::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kStatsSchema = "relaxmdim.stats/1";
inline constexpr const char* kMdimSchema = "relaxmdim.mdim/1";
inline constexpr const char* kSweepSchema = "relaxmdim.sweep-csv/1";
inline constexpr const char* kTwoStepCsvSchema = "relaxmdim.two-step-csv/1";
inline constexpr const char* kTwoStepSchema = "relaxmdim.two-step/1";
inline constexpr const char* kGWSchema = "relaxmdim.gw-constants-csv/1";
inline constexpr const char* kManifestSchema = "relaxmdim.manifest/1";

// Shortest round-trip decimal form, independent of locale and stream state.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

inline json to_json(const GraphStats& s) {
  return json{{"n", s.n},
              {"m", s.m},
              {"avg_degree", s.avg_degree},
              {"diameter", s.diameter},
              {"avg_spl", s.avg_spl},
              {"shell1_size", s.shell1_size}};
}

inline json to_json(const TreeMDReport& r) {
  return json{{"k", r.k},         {"r", r.r},   {"sigma_r", r.sigma_r}, {"ex_r", r.ex_r},
              {"is_line", r.is_line}, {"md", r.md}, {"witness", r.witness}};
}

inline json to_json(const GreedyTrace& trace) {
  json rows = json::array();
  for (const auto& s : trace) {
    rows.push_back({{"pick_index", s.pick_index},
                    {"sensor", s.sensor},
                    {"newly_covered", s.newly_covered},
                    {"remaining", s.remaining}});
  }
  return rows;
}

inline json to_json(const TwoStepResult& t) {
  json sizes = json::array();
  for (const auto& c : t.classes) sizes.push_back({{"size", c.members.size()}, {"s2", c.sensors.size()}});
  return json{{"k", t.k},
              {"s1", t.s1},
              {"s1_size", t.s1.size()},
              {"max_s2", t.max_s2},
              {"qstar", t.qstar},
              {"worst_class", t.worst_class},
              {"classes", std::move(sizes)}};
}

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> rows) {
  out << "k,sensors,sensor_fraction,non_resolved_ratio,alpha,alpha_fraction\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.sensors << ',' << format_double(r.sensor_fraction) << ','
        << format_double(r.non_resolved_ratio) << ',' << r.alpha << ',' << format_double(r.alpha_fraction)
        << '\n';
  }
}

inline void write_two_step_csv(std::ostream& out, std::span<const TwoStepResult> rows) {
  out << "k,s1,max_s2,qstar,worst_class_size,classes\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.s1.size() << ',' << r.max_s2 << ',' << r.qstar << ',' << r.worst_class.size()
        << ',' << r.classes.size() << '\n';
  }
}

inline void write_gw_csv(std::ostream& out, const GWConstants& c) {
  out << "r,d,l,s,e,c\n";
  for (const auto& row : c.rows) {
    out << row.r << ',' << format_double(row.d) << ',' << format_double(row.l) << ','
        << format_double(row.s) << ',' << format_double(row.e) << ',' << format_double(row.c) << '\n';
  }
}

// Edge-list text readable by load_edge_list. A rooted tree is written as
// "parent child" lines in preorder with children ascending, so the root is the
// first token and preorder-labeled trees reload with the same ids.
inline void write_edge_list(std::ostream& out, const Graph& g, std::optional<Vertex> root = std::nullopt,
                            std::span<const std::string> comments = {}) {
  for (const auto& c : comments) out << "# " << c << '\n';
  if (!root) {
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return;
  }
  out << "# root " << *root << '\n';
  auto t = RootedTree::from_graph(g, *root);
  std::vector<Vertex> stack{*root};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (v != *root) out << t.parent[v] << ' ' << v << '\n';
    const auto& ch = t.children[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
}

} // namespace relaxmdim::io
