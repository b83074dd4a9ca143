#pragma once

// Sparse signed random graphs driven by a completely random signed measure.
//
// W = sum_i w_i delta_{theta_i} is drawn on [0, alpha) with Levy measure
// rho(dw) dtheta. Same-sign nodes are linked through Poisson counts:
// n_ii ~ Poisson(w_i^2) and n_ij + n_ji ~ Poisson(2 |w_i w_j|), signed by the
// common sign. Opposite-sign pairs are never linked. The simple graph keeps
// z_ij = sign(n_ij + n_ji) min(|n_ij + n_ji|, 1).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srm/levy.hpp"
#include "srm/rng.hpp"
#include "srm/samplers.hpp"

namespace srm::graph {

struct GraphConfig {
  WeightMeasure rho;
  double alpha = 1.0;
  double eps = kDefaultEps;
  std::uint64_t seed = 0;
};

struct Node {
  double theta = 0.0;
  double w = 0.0;
};

struct Count {
  std::size_t i = 0;
  std::size_t j = 0;
  long n = 0;  // signed directed count
};

struct SignedMultigraph {
  std::vector<Node> nodes;
  std::vector<Count> counts;  // sorted by (i, j), nonzero entries only

  long count(std::size_t i, std::size_t j) const;
};

struct Edge {
  std::size_t i = 0;  // i <= j
  std::size_t j = 0;
  int sign = 0;
};

struct SignedGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;  // one entry per unordered pair, sorted by (i, j)

  // z_ij, symmetric in (i, j).
  int z(std::size_t i, std::size_t j) const;
};

struct GeneratedGraph {
  SignedMultigraph multigraph;
  SignedGraph graph;
  double remainder_bound = 0.0;
};

// Links a given node set.
GeneratedGraph link_nodes(std::vector<Node> nodes, RngStream& rng);

GeneratedGraph generate_graph(const GraphConfig& cfg, RngStream& rng);
GeneratedGraph generate_graph(const GraphConfig& cfg);

struct ObservedCounts {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
};

ObservedCounts count_observed(const SignedGraph& z);

struct ScanRow {
  double alpha = 0.0;
  double mean_nodes = 0.0;
  double mean_edges = 0.0;
};

struct ScanResult {
  double slope = 0.0;
  std::vector<std::pair<double, double>> points;  // (log mean nodes, log mean edges)
  std::vector<ScanRow> rows;
};

ScanResult sparsity_scan(const WeightMeasure& rho, const std::vector<double>& alphas, int reps,
                         std::uint64_t seed, double eps = kDefaultEps, int jobs = 1);

struct ProbeStatistic {
  std::string name;
  double ks_distance = 0.0;
  double p_value = 0.0;
  std::vector<double> original;
  std::vector<double> permuted;
};

struct ProbeReport {
  std::size_t blocks = 0;
  std::vector<std::size_t> permutation;
  std::vector<ProbeStatistic> statistics;  // positive mass, negative mass, off-diagonal sum
};

enum class Permutation { Identity, Reversal, Random };

// Block index of each block A_1..A_n, A_j = [h(j-1), hj), after permuting.
std::vector<std::size_t> make_permutation(Permutation kind, std::size_t blocks, std::uint64_t seed);

// Z-mass of every block pair A_a x A_b.
std::vector<std::vector<double>> block_counts(const SignedGraph& z, double h, std::size_t blocks);

ProbeReport exchangeability_probe(const WeightMeasure& rho, double alpha, double h,
                                  const std::vector<std::size_t>& permutation, int reps,
                                  std::uint64_t seed, double eps = kDefaultEps, int jobs = 1);

}  // namespace srm::graph
