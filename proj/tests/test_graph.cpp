#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "srm/errors.hpp"
#include "srm/graph.hpp"
#include "srm/stats.hpp"

using namespace srm;
using namespace srm::graph;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

SignedGraph graph_of(std::size_t n, std::vector<Edge> edges) {
  SignedGraph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({static_cast<double>(i), 1.0});
  g.edges = std::move(edges);
  return g;
}

WeightMeasure two_sided_exponential() {
  const auto h = half_line::exponential(1.0, 1.0);
  return WeightMeasure::density(h, h);
}

}  // namespace

TEST(Generate, ZeroRhoGivesEmptyGraph) {
  const auto g = generate_graph({WeightMeasure(), 50.0, kDefaultEps, 1});
  EXPECT_TRUE(g.graph.nodes.empty());
  EXPECT_TRUE(g.graph.edges.empty());
  EXPECT_TRUE(g.multigraph.counts.empty());
}

TEST(Generate, PositiveRhoHasNoNegativeEdges) {
  const auto rho = WeightMeasure::density(half_line::exponential(2.0, 1.0), nullptr);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_graph({rho, 20.0, kDefaultEps, seed});
    for (const auto& e : g.graph.edges) EXPECT_EQ(e.sign, 1);
    for (const auto& c : g.multigraph.counts) EXPECT_GT(c.n, 0);
  }
}

TEST(Generate, RejectsNonPositiveWindow) {
  EXPECT_EQ(kind_of([] { generate_graph({two_sided_exponential(), 0.0, kDefaultEps, 1}); }), ErrorKind::InvalidAlpha);
  EXPECT_EQ(kind_of([] { generate_graph({two_sided_exponential(), -3.0, kDefaultEps, 1}); }), ErrorKind::InvalidAlpha);
}

TEST(Generate, StructuralInvariants) {
  const auto stable = half_line::stable(1.0, 0.5, 1.0);
  const std::vector<WeightMeasure> rhos{two_sided_exponential(), WeightMeasure::density(stable, stable),
                                        WeightMeasure::finite_discrete({{0.3, 2.0}, {-0.7, 1.0}})};
  for (const auto& rho : rhos) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto out = generate_graph({rho, 30.0, kDefaultEps, seed});
      const auto& nodes = out.multigraph.nodes;
      // Sign coherence.
      for (const auto& c : out.multigraph.counts) {
        ASSERT_NE(c.n, 0);
        const double si = std::copysign(1.0, nodes[c.i].w);
        const double sj = std::copysign(1.0, nodes[c.j].w);
        EXPECT_EQ(si, sj);
        EXPECT_EQ(si, c.n > 0 ? 1.0 : -1.0);
      }
      // Z from the multigraph by the sign-min rule, and its symmetry.
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& e : out.graph.edges) {
        ASSERT_LE(e.i, e.j);
        EXPECT_TRUE(seen.insert({e.i, e.j}).second);
        const long total = e.i == e.j ? out.multigraph.count(e.i, e.i)
                                       : out.multigraph.count(e.i, e.j) + out.multigraph.count(e.j, e.i);
        EXPECT_EQ(e.sign, total > 0 ? 1 : -1);
        EXPECT_EQ(out.graph.z(e.i, e.j), out.graph.z(e.j, e.i));
      }
      for (const auto& c : out.multigraph.counts) {
        const auto key = std::minmax(c.i, c.j);
        const long total = c.i == c.j ? c.n : out.multigraph.count(c.i, c.j) + out.multigraph.count(c.j, c.i);
        if (total != 0) EXPECT_TRUE(seen.count({key.first, key.second}));
      }
      const auto counts = count_observed(out.graph);
      EXPECT_LE(counts.n_edges, counts.n_nodes * (counts.n_nodes + 1) / 2);
      for (const auto& n : nodes) {
        EXPECT_GE(n.theta, 0.0);
        EXPECT_LT(n.theta, 30.0);
      }
    }
  }
}

TEST(Generate, Deterministic) {
  const auto a = generate_graph({two_sided_exponential(), 40.0, kDefaultEps, 99});
  const auto b = generate_graph({two_sided_exponential(), 40.0, kDefaultEps, 99});
  ASSERT_EQ(a.graph.edges.size(), b.graph.edges.size());
  for (std::size_t k = 0; k < a.graph.edges.size(); ++k) {
    EXPECT_EQ(a.graph.edges[k].i, b.graph.edges[k].i);
    EXPECT_EQ(a.graph.edges[k].j, b.graph.edges[k].j);
    EXPECT_EQ(a.graph.edges[k].sign, b.graph.edges[k].sign);
  }
}

TEST(Link, TwoForcedNodesAreBernoulli) {
  const double c = 0.6;
  const int reps = 100000;
  for (double sign : {1.0, -1.0}) {
    RngStream rng(sign > 0 ? 3 : 4);
    int linked = 0;
    int looped = 0;
    for (int r = 0; r < reps; ++r) {
      const auto out = link_nodes({{0.2, sign * c}, {0.7, sign * c}}, rng);
      const int z = out.graph.z(0, 1);
      if (z != 0) {
        ++linked;
        EXPECT_EQ(z, static_cast<int>(sign));
      }
      if (out.graph.z(0, 0) != 0) ++looped;
    }
    const double p = 1.0 - std::exp(-2.0 * c * c);
    EXPECT_NEAR(static_cast<double>(linked) / reps, p, 4.0 * std::sqrt(p * (1.0 - p) / reps));
    const double q = 1.0 - std::exp(-c * c);
    EXPECT_NEAR(static_cast<double>(looped) / reps, q, 4.0 * std::sqrt(q * (1.0 - q) / reps));
  }
}

TEST(Link, OppositeSignsNeverLink) {
  RngStream rng(5);
  for (int r = 0; r < 1000; ++r) {
    const auto out = link_nodes({{0.2, 3.0}, {0.7, -3.0}}, rng);
    EXPECT_EQ(out.graph.z(0, 1), 0);
  }
}

TEST(Link, PointMassFrequencyOverManyPairs) {
  const double c = 0.3;
  const auto rho = WeightMeasure::finite_discrete({{c, 1.0}});
  std::size_t pairs = 0;
  std::size_t linked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out = generate_graph({rho, 40.0, kDefaultEps, seed});
    const std::size_t n = out.graph.nodes.size();
    pairs += n * (n - 1) / 2;
    for (const auto& e : out.graph.edges) linked += e.i != e.j ? 1 : 0;
  }
  const double p = 1.0 - std::exp(-2.0 * c * c);
  const double freq = static_cast<double>(linked) / static_cast<double>(pairs);
  EXPECT_NEAR(freq, p, 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(pairs)));
}

TEST(CountObserved, Examples) {
  const auto empty = count_observed(graph_of(4, {}));
  EXPECT_EQ(empty.n_nodes, 0u);
  EXPECT_EQ(empty.n_edges, 0u);
  const auto loop = count_observed(graph_of(3, {{1, 1, -1}}));
  EXPECT_EQ(loop.n_nodes, 1u);
  EXPECT_EQ(loop.n_edges, 1u);
  const auto triangle = count_observed(graph_of(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}));
  EXPECT_EQ(triangle.n_nodes, 3u);
  EXPECT_EQ(triangle.n_edges, 3u);
}

TEST(Scan, RequiresThreeIncreasingWindows) {
  const auto rho = two_sided_exponential();
  EXPECT_EQ(kind_of([&] { sparsity_scan(rho, {10.0, 20.0}, 2, 1); }), ErrorKind::InsufficientWindows);
  EXPECT_EQ(kind_of([&] { sparsity_scan(rho, {10.0, 30.0, 20.0}, 2, 1); }), ErrorKind::InvalidAlpha);
}

TEST(Scan, DegenerateWhenNothingIsObserved) {
  EXPECT_EQ(kind_of([] { sparsity_scan(WeightMeasure(), {1.0, 2.0, 4.0}, 3, 1); }), ErrorKind::DegenerateScan);
}

TEST(Scan, FiniteActivityIsRoughlyQuadratic) {
  const auto result = sparsity_scan(two_sided_exponential(), {25.0, 50.0, 100.0, 200.0}, 10, 7, kDefaultEps, 4);
  ASSERT_EQ(result.rows.size(), 4u);
  ASSERT_EQ(result.points.size(), 4u);
  for (std::size_t k = 1; k < result.rows.size(); ++k) {
    EXPECT_GT(result.rows[k].mean_nodes, result.rows[k - 1].mean_nodes);
    EXPECT_GT(result.rows[k].mean_edges, result.rows[k - 1].mean_edges);
  }
  // Slope recomputed from the reported points.
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [a, b] : result.points) {
    x.push_back(a);
    y.push_back(b);
  }
  EXPECT_NEAR(result.slope, stats::ols_slope(x, y), 1e-12);
  EXPECT_GT(result.slope, 1.7);
  EXPECT_LT(result.slope, 2.3);
}

TEST(Scan, JobsDoNotChangeResult) {
  const auto a = sparsity_scan(two_sided_exponential(), {10.0, 20.0, 40.0}, 6, 11, kDefaultEps, 1);
  const auto b = sparsity_scan(two_sided_exponential(), {10.0, 20.0, 40.0}, 6, 11, kDefaultEps, 3);
  EXPECT_EQ(a.slope, b.slope);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].mean_nodes, b.rows[k].mean_nodes);
    EXPECT_EQ(a.rows[k].mean_edges, b.rows[k].mean_edges);
  }
}

TEST(Probe, BlockMismatch) {
  const auto perm = make_permutation(Permutation::Identity, 3, 0);
  EXPECT_EQ(kind_of([&] { exchangeability_probe(two_sided_exponential(), 10.0, 3.0, perm, 10, 1); }),
            ErrorKind::BlockMismatch);
}

TEST(Probe, Permutations) {
  EXPECT_EQ(make_permutation(Permutation::Identity, 4, 0), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(make_permutation(Permutation::Reversal, 4, 0), (std::vector<std::size_t>{3, 2, 1, 0}));
  auto r = make_permutation(Permutation::Random, 10, 5);
  EXPECT_EQ(r, make_permutation(Permutation::Random, 10, 5));
  std::sort(r.begin(), r.end());
  for (std::size_t k = 0; k < r.size(); ++k) EXPECT_EQ(r[k], k);
}

TEST(Probe, BlockCountsSumToEdgeMass) {
  const auto g = generate_graph({two_sided_exponential(), 20.0, kDefaultEps, 3}).graph;
  const auto blocks = block_counts(g, 5.0, 4);
  ASSERT_EQ(blocks.size(), 4u);
  double total = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      EXPECT_EQ(blocks[a][b], blocks[b][a]);
      total += blocks[a][b];
    }
  }
  // Off-diagonal edges are seen from both ends, loops once.
  double expected = 0.0;
  for (const auto& e : g.edges) expected += (e.i == e.j ? 1.0 : 2.0) * e.sign;
  EXPECT_DOUBLE_EQ(total, expected);
}

TEST(Probe, IdentityPermutationPasses) {
  const auto perm = make_permutation(Permutation::Identity, 5, 0);
  const auto report = exchangeability_probe(two_sided_exponential(), 10.0, 2.0, perm, 200, 21, kDefaultEps, 4);
  ASSERT_EQ(report.statistics.size(), 3u);
  EXPECT_EQ(report.statistics[0].name, "positive_mass");
  EXPECT_EQ(report.statistics[1].name, "negative_mass");
  EXPECT_EQ(report.statistics[2].name, "offdiagonal_sum");
  for (const auto& s : report.statistics) {
    EXPECT_EQ(s.original.size(), 200u);
    EXPECT_EQ(s.permuted.size(), 200u);
    EXPECT_GT(s.p_value, 1e-3) << s.name;
  }
}

TEST(Probe, RejectsTooFewReps) {
  const auto perm = make_permutation(Permutation::Identity, 5, 0);
  EXPECT_EQ(kind_of([&] { exchangeability_probe(two_sided_exponential(), 10.0, 2.0, perm, 1, 1); }),
            ErrorKind::InvalidArgument);
}
