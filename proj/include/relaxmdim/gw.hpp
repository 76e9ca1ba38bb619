#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/generators.hpp"
#include "relaxmdim/offspring.hpp"
#include "relaxmdim/parallel.hpp"
#include "relaxmdim/random.hpp"
#include "relaxmdim/tree.hpp"

namespace relaxmdim {

// Fringe probabilities of an unconditioned GW tree F at level r:
//   d: P(height(F) < r)
//   l: P(height(F) == r)
//   s: P(Down-Stem_r(F) is a line)
//   e: P(root of Down-Stem_r(F) has >= 2 children, one of them a line)
//   c: l - e, the limit of MD_{2r}/n
struct GWRow {
  std::size_t r = 0;
  double d = 0.0;
  double l = 0.0;
  double s = 0.0;
  double e = 0.0;
  double c = 0.0;
};

struct GWConstants {
  std::vector<GWRow> rows;        // r = 0..r_max
  double criticality_gap = 0.0;   // |E[xi] - 1|; nonzero means the limit theory does not apply
  double tail_bound = 0.0;
};

inline GWConstants gw_sequence(const OffspringDistribution& xi, std::size_t r_max) {
  GWConstants out;
  out.criticality_gap = xi.criticality_gap();
  out.tail_bound = xi.tail_bound();
  out.rows.reserve(r_max + 1);
  double d = 0.0, l = 0.0;
  for (std::size_t r = 0; r <= r_max; ++r) {
    GWRow row;
    row.r = r;
    if (r == 0) {
      d = 0.0;
      l = xi.pmf()[0];
    } else {
      double d_prev = d;
      d = xi.pgf(d_prev);
      l = xi.pgf(d_prev + l) - d;
    }
    double denom = 1.0 - xi.pgf_derivative(d);
    if (!(denom > 0.0)) {
      throw SingularityError("line-probability denominator 1 - pgf'(d_" + std::to_string(r) +
                             ") = " + std::to_string(denom) + " is not positive");
    }
    row.d = d;
    row.l = l;
    row.s = l / denom;
    row.e = 1.0 - xi.pgf(1.0 - row.s) - row.s + l;
    row.c = row.l - row.e;
    out.rows.push_back(row);
  }
  return out;
}

// Poisson(1) evaluated from its closed forms, with no pmf truncation:
//   d_r = exp(d_{r-1} - 1), l_r = d_r (exp(l_{r-1}) - 1), s_r = l_r / (1 - exp(d_r - 1)),
//   e_r = 1 - exp(-s_r) - (s_r - l_r), c_r = s_r + exp(-s_r) - 1.
// Other means fall back to the general recursion.
inline GWConstants poisson_closed_form(double lambda, std::size_t r_max) {
  if (lambda != 1.0) return gw_sequence(OffspringDistribution::poisson(lambda), r_max);
  GWConstants out;
  out.rows.reserve(r_max + 1);
  double d = 0.0, l = 1.0 / std::numbers::e;
  for (std::size_t r = 0; r <= r_max; ++r) {
    if (r > 0) {
      d = std::exp(d - 1.0);
      l = d * std::expm1(l);
    }
    GWRow row;
    row.r = r;
    row.d = d;
    row.l = l;
    row.s = l / -std::expm1(d - 1.0);
    row.e = -std::expm1(-row.s) - (row.s - l);
    row.c = row.s + std::expm1(-row.s);
    out.rows.push_back(row);
  }
  return out;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::vector<double> samples;  // MD_{2r}/n per replicate
};

// Mean and standard error of MD_{2r}(T)/n over conditioned GW trees of size n.
// Replicate i uses seed derive_seed(seed, i).
inline MonteCarloEstimate monte_carlo_cr(const OffspringDistribution& xi, std::size_t r, std::size_t n,
                                         std::size_t reps, std::uint64_t seed) {
  if (reps == 0) throw ValidationError("monte_carlo_cr needs at least one replicate");
  MonteCarloEstimate est;
  est.samples.resize(reps);
  parallel_for(reps, [&](std::size_t i) {
    auto tree = gw_tree_conditioned(n, xi, derive_seed(seed, i));
    est.samples[i] = static_cast<double>(exact_tree_md(tree.graph, 2 * r).md) / static_cast<double>(n);
  }, 1);
  double sum = 0.0;
  for (double x : est.samples) sum += x;
  est.mean = sum / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (double x : est.samples) ss += (x - est.mean) * (x - est.mean);
    est.standard_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return est;
}

} // namespace relaxmdim
