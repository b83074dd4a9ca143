#pragma once

// JSON / JSONL / CSV encodings of measures, specs, priors, posteriors and graphs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "srm/bnp.hpp"
#include "srm/graph.hpp"
#include "srm/levy.hpp"
#include "srm/measure.hpp"
#include "srm/samplers.hpp"

namespace srm::io {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

Json to_json(const SignedAtomicMeasure& mu);
SignedAtomicMeasure measure_from_json(const Json& j);

Json to_json(const BorelSet& b);
BorelSet borel_set_from_json(const Json& j);
std::vector<BorelSet> borel_sets_from_json(const Json& j);

Json to_json(const PiecewiseDensity& d);
PiecewiseDensity density_from_json(const Json& j);

Json to_json(const WeightMeasure& w);
WeightMeasure weight_measure_from_json(const Json& j);

Json to_json(const WeightDistribution& d);
WeightDistribution weight_distribution_from_json(const Json& j);

// Simulation spec: a CRSM characteristic pair with optional fixed atoms, a
// Skellam point process, or a Gaussian random measure on a partition.
struct SimSpec {
  enum class Kind { Crsm, Skellam, Grm };
  Kind kind = Kind::Crsm;
  CharacteristicPair pair;
  std::vector<FixedAtomSpec> fixed_atoms;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double domain_length = 1.0;
  GrmKernelSpec grm;
};

SimSpec sim_spec_from_json(const Json& j);

// Prior and likelihood files. A prior may name the built-in Gaussian example;
// its likelihood file then carries the family "gaussian_example".
bnp::TraitPrior prior_from_json(const Json& j);
bnp::LikelihoodModel likelihood_from_json(const Json& j);
Json to_json(const bnp::TraitPrior& prior);
Json to_json(const bnp::LikelihoodModel& lik);

bnp::Observation observation_from_json(const Json& j);
std::vector<bnp::Observation> read_observations(std::istream& in);

// 2001 uniform points on [-10, 10] without the point at zero.
std::vector<double> theta_grid();

Json to_json(const bnp::PosteriorResult& post, const std::vector<double>& grid);

void write_nodes_csv(std::ostream& out, const std::vector<graph::Node>& nodes);
void write_edges_csv(std::ostream& out, const graph::SignedGraph& z);
void write_scan_csv(std::ostream& out, const std::vector<graph::ScanRow>& rows);

Json parse_json_file(const std::string& path);
std::string read_file(const std::string& path);

// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace srm::io
