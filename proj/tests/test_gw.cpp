#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "relaxmdim/gw.hpp"

using namespace relaxmdim;

namespace {

const double kTable[] = {0.1408, 0.0544, 0.0294, 0.0185, 0.0128, 0.0094, 0.0072, 0.0057, 0.0046, 0.0038};

// Plain summation of the series, independent of the library's Horner loop.
double series(const std::vector<double>& pmf, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) acc += pmf[j] * std::pow(x, static_cast<double>(j));
  return acc;
}

} // namespace

TEST(Offspring, PoissonPmfAndMean) {
  auto xi = OffspringDistribution::poisson(1.0);
  double mass = 0.0;
  for (double p : xi.pmf()) mass += p;
  EXPECT_LE(mass, 1.0 + 1e-15);
  EXPECT_GE(mass, 1.0 - xi.tail_bound() - 1e-15);
  EXPECT_LT(xi.tail_bound(), 1e-12);
  EXPECT_NEAR(xi.pmf()[0], std::exp(-1.0), 1e-16);
  EXPECT_NEAR(xi.pmf()[3], std::exp(-1.0) / 6.0, 1e-16);
  EXPECT_NEAR(xi.mean(), 1.0, 1e-12);
  EXPECT_LT(xi.criticality_gap(), 1e-12);
}

TEST(Offspring, GeometricIsCriticalAtHalf) {
  auto xi = OffspringDistribution::geometric(0.5);
  EXPECT_NEAR(xi.pmf()[0], 0.5, 1e-16);
  EXPECT_NEAR(xi.pmf()[2], 0.125, 1e-16);
  EXPECT_NEAR(xi.mean(), 1.0, 1e-12);
  EXPECT_GT(OffspringDistribution::geometric(0.4).criticality_gap(), 0.4);
}

TEST(Offspring, PgfAndDerivative) {
  auto xi = OffspringDistribution::poisson(1.3);
  for (double x : {0.0, 0.2, 0.7, 1.0}) {
    EXPECT_NEAR(xi.pgf(x), std::exp(1.3 * (x - 1.0)), 1e-14);
    EXPECT_NEAR(xi.pgf_derivative(x), 1.3 * std::exp(1.3 * (x - 1.0)), 1e-13);
  }
}

TEST(Offspring, Parsing) {
  EXPECT_EQ(OffspringDistribution::parse("poisson:3").family(), OffspringDistribution::Family::poisson);
  EXPECT_DOUBLE_EQ(OffspringDistribution::parse("geometric:0.25").parameter(), 0.25);
  EXPECT_THROW(OffspringDistribution::parse("poisson"), ValidationError);
  EXPECT_THROW(OffspringDistribution::parse("poisson:x"), ValidationError);
  EXPECT_THROW(OffspringDistribution::parse("binomial:3"), ValidationError);
  EXPECT_THROW(OffspringDistribution::parse("poisson:-1"), ValidationError);
  EXPECT_THROW(OffspringDistribution::parse("geometric:1.5"), ValidationError);
}

TEST(Offspring, PmfFile) {
  auto path = std::filesystem::temp_directory_path() / "relaxmdim_test_pmf.txt";
  {
    std::ofstream out(path);
    out << "# p0 p1 p2\n0.25 0.5\n0.25\n";
  }
  auto xi = OffspringDistribution::parse("pmf:" + path.string());
  EXPECT_EQ(xi.family(), OffspringDistribution::Family::custom);
  EXPECT_EQ(xi.pmf().size(), 3u);
  EXPECT_NEAR(xi.mean(), 1.0, 1e-15);
  {
    std::ofstream out(path);
    out << "0.5 0.4\n";
  }
  EXPECT_THROW(OffspringDistribution::parse("pmf:" + path.string()), ValidationError);
  {
    std::ofstream out(path);
    out << "0.5 abc\n";
  }
  EXPECT_THROW(OffspringDistribution::parse("pmf:" + path.string()), ValidationError);
  std::filesystem::remove(path);
  EXPECT_THROW(OffspringDistribution::parse("pmf:/nonexistent/pmf.txt"), ValidationError);
}

TEST(GWSequence, PoissonOneMatchesTable) {
  auto g = gw_sequence(OffspringDistribution::poisson(1.0), 9);
  auto c = poisson_closed_form(1.0, 9);
  ASSERT_EQ(g.rows.size(), 10u);
  for (std::size_t r = 0; r < 10; ++r) {
    EXPECT_NEAR(g.rows[r].c, kTable[r], 5e-5) << "r " << r;
    EXPECT_NEAR(c.rows[r].c, kTable[r], 5e-5) << "r " << r;
    EXPECT_NEAR(g.rows[r].c, c.rows[r].c, 1e-10);
    EXPECT_NEAR(g.rows[r].e, c.rows[r].e, 1e-10);
    EXPECT_NEAR(g.rows[r].s, c.rows[r].s, 1e-10);
  }
}

TEST(GWSequence, FirstRowValues) {
  auto c = poisson_closed_form(1.0, 0);
  EXPECT_EQ(c.rows[0].d, 0.0);
  EXPECT_NEAR(c.rows[0].l, 1.0 / std::exp(1.0), 1e-16);
  EXPECT_NEAR(c.rows[0].s, (1.0 / std::exp(1.0)) / (1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(c.rows[0].s, 0.58198, 1e-5);
}

TEST(GWSequence, DepthOneEqualsChildlessProbability) {
  for (auto xi : {OffspringDistribution::poisson(1.0), OffspringDistribution::poisson(2.5),
                  OffspringDistribution::geometric(0.3), OffspringDistribution::from_pmf({0.3, 0.3, 0.4})}) {
    auto g = gw_sequence(xi, 3);
    EXPECT_EQ(g.rows[0].d, 0.0);
    EXPECT_NEAR(g.rows[1].d, xi.pmf()[0], 1e-15);
  }
}

TEST(GWSequence, RecursionIdentities) {
  for (auto xi : {OffspringDistribution::poisson(1.0), OffspringDistribution::geometric(0.5),
                  OffspringDistribution::from_pmf({0.4, 0.3, 0.2, 0.1}), OffspringDistribution::poisson(0.7)}) {
    auto g = gw_sequence(xi, 40);
    for (std::size_t r = 0; r + 1 < g.rows.size(); ++r) {
      const auto& a = g.rows[r];
      const auto& b = g.rows[r + 1];
      EXPECT_LE(a.d, b.d);
      EXPECT_NEAR(a.l, b.d - a.d, 1e-12) << "r " << r;
      EXPECT_NEAR(b.d, series(xi.pmf(), a.d), 1e-13);
    }
    for (const auto& row : g.rows) {
      EXPECT_GE(row.l, 0.0);
      EXPECT_LE(row.l, 1.0);
      EXPECT_GE(row.s, 0.0);
      EXPECT_LE(row.s, 1.0);
      EXPECT_GE(row.c, -1e-15);
      EXPECT_NEAR(row.c, row.l - row.e, 1e-15);
      double e = 1.0 - series(xi.pmf(), 1.0 - row.s) - row.s + row.l;
      EXPECT_NEAR(row.e, e, 1e-12);
    }
  }
}

TEST(GWSequence, PoissonOneApproachesExtinction) {
  auto g = gw_sequence(OffspringDistribution::poisson(1.0), 50);
  EXPECT_GT(g.rows[50].d, 0.95);
  for (std::size_t r = 0; r + 1 < g.rows.size(); ++r) EXPECT_GE(g.rows[r].c, g.rows[r + 1].c);
}

TEST(GWSequence, ClosedFormSpecialisesGeneralE) {
  auto c = poisson_closed_form(1.0, 20);
  for (const auto& row : c.rows) {
    EXPECT_NEAR(row.e, 1.0 - std::exp(-row.s) - (row.s - row.l), 1e-15);
    EXPECT_NEAR(row.c, row.s + std::exp(-row.s) - 1.0, 1e-15);
  }
}

TEST(GWSequence, TruncationRobustness) {
  for (double lambda : {1.0, 0.6, 2.0}) {
    auto base = OffspringDistribution::poisson(lambda);
    auto full = OffspringDistribution::poisson(lambda, 1e-290).pmf();
    ASSERT_GE(full.size(), 2 * base.truncation() + 1);
    full.resize(2 * base.truncation() + 1);
    auto a = gw_sequence(base, 30);
    auto b = gw_sequence(OffspringDistribution::from_pmf(full), 30);
    for (std::size_t r = 0; r <= 30; ++r) {
      EXPECT_LE(std::abs(a.rows[r].d - b.rows[r].d), base.tail_bound());
      EXPECT_LE(std::abs(a.rows[r].l - b.rows[r].l), base.tail_bound());
      EXPECT_LE(std::abs(a.rows[r].s - b.rows[r].s), base.tail_bound());
      EXPECT_LE(std::abs(a.rows[r].e - b.rows[r].e), base.tail_bound());
      EXPECT_LE(std::abs(a.rows[r].c - b.rows[r].c), base.tail_bound());
    }
  }
}

TEST(GWSequence, SingularDenominator) {
  // One child always: d_r stays 0 and pgf'(0) = 1.
  auto xi = OffspringDistribution::from_pmf({0.0, 1.0});
  EXPECT_THROW(gw_sequence(xi, 2), SingularityError);
}

TEST(GWSequence, GeneralLambdaRoutesThroughRecursion) {
  auto a = poisson_closed_form(1.7, 5);
  auto b = gw_sequence(OffspringDistribution::poisson(1.7), 5);
  for (std::size_t r = 0; r <= 5; ++r) EXPECT_EQ(a.rows[r].c, b.rows[r].c);
  EXPECT_GT(a.criticality_gap, 0.69);
}

TEST(MonteCarlo, DeterministicAndSane) {
  auto xi = OffspringDistribution::poisson(1.0);
  auto a = monte_carlo_cr(xi, 0, 300, 6, 99);
  auto b = monte_carlo_cr(xi, 0, 300, 6, 99);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_GT(a.standard_error, 0.0);
  EXPECT_NEAR(a.mean, kTable[0], 0.04);
  // Replicate i is the tree drawn from seed + i.
  auto t = gw_tree_conditioned(300, xi, derive_seed(99, 2));
  EXPECT_DOUBLE_EQ(a.samples[2], static_cast<double>(exact_tree_md(t.graph, 0).md) / 300.0);
}

TEST(MonteCarlo, LargeRadiusContributesZero) {
  auto xi = OffspringDistribution::poisson(1.0);
  auto est = monte_carlo_cr(xi, 500, 50, 3, 1);
  for (double x : est.samples) EXPECT_EQ(x, 0.0);
  EXPECT_THROW(monte_carlo_cr(xi, 0, 50, 0, 1), ValidationError);
}
