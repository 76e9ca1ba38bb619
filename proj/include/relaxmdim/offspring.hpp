#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "relaxmdim/errors.hpp"
#include "relaxmdim/random.hpp"

namespace relaxmdim {

// Offspring law of a Galton-Watson process, truncated at index J.
class OffspringDistribution {
public:
  enum class Family { poisson, geometric, custom };

  // Truncation J is the smallest index whose dropped tail is below `tail`
  // times the double rounding unit. The recursions amplify truncation error
  // by up to 1/(1 - pgf'(d_r)), so a tail that merely sits under `tail` would
  // still leak into the constants; one this small rounds away entirely.
  static OffspringDistribution poisson(double lambda, double tail = 1e-12) {
    if (!(lambda > 0.0) || !(lambda <= 700.0)) throw ValidationError("poisson mean must lie in (0, 700]");
    std::vector<double> terms{std::exp(-lambda)};
    for (std::size_t j = 1; terms.back() > 1e-300 || static_cast<double>(j) < lambda; ++j) {
      terms.push_back(terms.back() * lambda / static_cast<double>(j));
    }
    return truncated(Family::poisson, lambda, std::move(terms), tail);
  }

  // P(j) = p (1 - p)^j on j >= 0; critical at p = 1/2.
  static OffspringDistribution geometric(double p, double tail = 1e-12) {
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("geometric parameter must lie in (0, 1]");
    std::vector<double> terms{p};
    while (terms.back() > 1e-300 && p < 1.0) terms.push_back(terms.back() * (1.0 - p));
    return truncated(Family::geometric, p, std::move(terms), tail);
  }

  static OffspringDistribution from_pmf(std::vector<double> pmf, double tolerance = 1e-9) {
    if (pmf.empty()) throw ValidationError("pmf is empty");
    double mass = 0.0;
    for (double p : pmf) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("pmf entries must be finite and nonnegative");
      mass += p;
    }
    if (mass > 1.0 + tolerance || mass < 1.0 - tolerance) {
      throw ValidationError("pmf mass " + std::to_string(mass) + " is not within tolerance of 1");
    }
    OffspringDistribution d;
    d.family_ = Family::custom;
    d.pmf_ = std::move(pmf);
    d.tail_ = std::max(0.0, 1.0 - mass);
    d.build_cdf();
    return d;
  }

  // Whitespace separated p_0 p_1 ...; '#' starts a comment.
  static OffspringDistribution from_pmf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pmf file " + path);
    std::vector<double> pmf;
    std::string line;
    while (std::getline(in, line)) {
      line.erase(std::min(line.find('#'), line.size()));
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream fields(line);
      std::string tok;
      while (fields >> tok) {
        try {
          std::size_t used = 0;
          pmf.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ValidationError("bad pmf value '" + tok + "' in " + path);
        }
      }
    }
    return from_pmf(std::move(pmf));
  }

  // "poisson:<mean>", "geometric:<p>" or "pmf:<file>".
  static OffspringDistribution parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ValidationError("offspring spec must look like family:value");
    std::string family = spec.substr(0, colon);
    std::string value = spec.substr(colon + 1);
    if (family == "pmf") return from_pmf_file(value);
    double x = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ValidationError("bad offspring parameter '" + value + "'");
    }
    if (family == "poisson") return poisson(x);
    if (family == "geometric") return geometric(x);
    throw ValidationError("unknown offspring family '" + family + "'");
  }

  Family family() const noexcept { return family_; }
  double parameter() const noexcept { return parameter_; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  std::size_t truncation() const noexcept { return pmf_.size() - 1; }
  double tail_bound() const noexcept { return tail_; }

  double mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j < pmf_.size(); ++j) m += static_cast<double>(j) * pmf_[j];
    return m;
  }
  double criticality_gap() const { return std::abs(mean() - 1.0); }

  // sum_j p_j x^j, Horner from the truncation index down.
  double pgf(double x) const {
    double acc = 0.0;
    for (std::size_t j = pmf_.size(); j-- > 0;) acc = acc * x + pmf_[j];
    return acc;
  }

  // sum_{j>=1} j p_j x^(j-1).
  double pgf_derivative(double x) const {
    double acc = 0.0;
    for (std::size_t j = pmf_.size(); j-- > 1;) acc = acc * x + static_cast<double>(j) * pmf_[j];
    return acc;
  }

  // Inversion over the truncated cdf; leftover tail mass maps to J.
  std::size_t sample(Rng& rng) const {
    double u = rng.uniform01() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), truncation());
  }

private:
  static OffspringDistribution truncated(Family family, double parameter, std::vector<double> terms,
                                         double tail) {
    // Suffix sums from the far end keep the tiny tails accurate.
    std::vector<double> suffix(terms.size() + 1, 0.0);
    for (std::size_t j = terms.size(); j-- > 0;) suffix[j] = suffix[j + 1] + terms[j];
    const double cutoff = tail * std::numeric_limits<double>::epsilon();
    std::size_t J = 0;
    while (J + 1 < terms.size() && suffix[J + 1] >= cutoff) ++J;
    OffspringDistribution d;
    d.family_ = family;
    d.parameter_ = parameter;
    d.pmf_.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(J + 1));
    d.tail_ = suffix[J + 1];
    d.build_cdf();
    return d;
  }

  void build_cdf() {
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < pmf_.size(); ++j) cdf_[j] = acc += pmf_[j];
  }

  Family family_ = Family::custom;
  double parameter_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double tail_ = 0.0;
};

} // namespace relaxmdim
