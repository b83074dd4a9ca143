#include "srm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "srm/errors.hpp"

namespace srm::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::SpecValidation, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) invalid(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number()) invalid(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* name, double fallback) {
  if (!j.is_object() || !j.contains(name) || j.at(name).is_null()) return fallback;
  return number(j, name);
}

// Infinite bounds are written as null.
Json bound(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Library argument errors raised while building an object from a file are
// reported as spec validation failures.
template <typename F>
auto validated(F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::SupportViolation ||
        e.kind() == ErrorKind::DuplicateLocation) {
      invalid(e.what());
    }
    throw;
  } catch (const nlohmann::json::exception& e) {
    invalid(e.what());
  }
}

HalfLinePtr half_from_family(const std::string& family, const Json& params) {
  if (family == "gamma") return half_line::gamma(number(params, "a"), number(params, "b"));
  if (family == "exponential") {
    return half_line::exponential(number_or(params, "a", 1.0), number_or(params, "b", 1.0));
  }
  if (family == "stable") {
    return half_line::stable(number_or(params, "a", 1.0), number(params, "sigma"),
                             number(params, "w_max"));
  }
  if (family == "power") {
    return half_line::power(number_or(params, "a", 1.0), number(params, "exponent"),
                            number_or(params, "upper", kInf));
  }
  if (family == "bnp_power") {
    // |theta|^{alpha-2}, optionally truncated to |theta| < upper.
    const double alpha = number(params, "alpha");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorKind::InvalidAlpha, "bnp_power needs alpha in (0, 1)");
    }
    return half_line::power(number_or(params, "a", 1.0), alpha - 2.0,
                            number_or(params, "upper", kInf));
  }
  invalid("unknown density family \"" + family + "\"");
}

Json half_to_json(const HalfLineMeasure& half) {
  const auto d = half.descriptor();
  Json j;
  if (d.family == "discrete") {
    j["kind"] = "finite_discrete";
    Json points = Json::array();
    for (const auto& p : d.points) points.push_back({p.weight, p.mass});
    j["points"] = points;
    return j;
  }
  j["kind"] = "density";
  j["family"] = d.family;
  Json params = Json::object();
  for (const auto& [k, v] : d.params) params[k] = bound(v);
  j["params"] = params;
  return j;
}

Json tabulate(const std::function<double(double)>& f, const std::vector<double>& grid) {
  Json values = Json::array();
  for (double t : grid) values.push_back(f(t));
  return values;
}

Json posterior_atom_json(const bnp::PosteriorAtom& atom, const std::vector<double>& grid) {
  Json j;
  j["loc"] = atom.location;
  j["observed"] = atom.observed;
  if (atom.atomic) {
    j["form"] = "atomic";
    j["support"] = atom.support;
    Json probs = Json::array();
    for (double m : atom.masses) probs.push_back(m / atom.normalizer);
    j["probabilities"] = probs;
  } else {
    j["form"] = "tabulated";
    j["normalizer"] = atom.normalizer;
    j["density"] = tabulate([&](double t) { return atom.density(t); }, grid);
  }
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

// ---------------------------------------------------------------------------

Json to_json(const PiecewiseDensity& d) {
  Json j;
  j["breaks"] = d.breaks();
  j["levels"] = d.levels();
  return j;
}

PiecewiseDensity density_from_json(const Json& j) {
  return validated([&] {
    if (j.is_null()) return PiecewiseDensity();
    return PiecewiseDensity(field(j, "breaks").get<std::vector<double>>(),
                            field(j, "levels").get<std::vector<double>>());
  });
}

Json to_json(const SignedAtomicMeasure& mu) {
  Json j;
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    Json atom;
    atom["loc"] = a.location;
    atom["w"] = a.weight;
    atoms.push_back(atom);
  }
  j["atoms"] = atoms;
  j["diffuse"] = to_json(mu.diffuse());
  return j;
}

SignedAtomicMeasure measure_from_json(const Json& j) {
  return validated([&] {
    std::vector<Atom> atoms;
    for (const auto& a : field(j, "atoms")) atoms.push_back({number(a, "loc"), number(a, "w")});
    PiecewiseDensity diffuse;
    if (j.contains("diffuse")) diffuse = density_from_json(j.at("diffuse"));
    return SignedAtomicMeasure(std::move(atoms), std::move(diffuse));
  });
}

Json to_json(const BorelSet& b) {
  Json j = Json::array();
  for (const auto& i : b.intervals()) j.push_back({i.lo, i.hi});
  return j;
}

BorelSet borel_set_from_json(const Json& j) {
  return validated([&] {
    if (!j.is_array()) invalid("a Borel set is a list of [lo, hi] pairs");
    std::vector<Interval> pieces;
    for (const auto& p : j) {
      if (!p.is_array() || p.size() != 2) invalid("interval must be [lo, hi]");
      pieces.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return BorelSet(std::move(pieces));
  });
}

std::vector<BorelSet> borel_sets_from_json(const Json& j) {
  const Json& list = j.is_object() ? field(j, "sets") : j;
  if (!list.is_array()) invalid("sets file must hold a list of Borel sets");
  std::vector<BorelSet> sets;
  for (const auto& s : list) sets.push_back(borel_set_from_json(s));
  return sets;
}

// ---------------------------------------------------------------------------

Json to_json(const WeightMeasure& w) {
  if (w.is_zero()) return Json{{"kind", "finite_discrete"}, {"points", Json::array()}};
  const bool discrete = (!w.positive() || w.positive()->is_discrete()) &&
                        (!w.negative() || w.negative()->is_discrete());
  if (discrete) {
    Json points = Json::array();
    for (const auto& p : w.signed_points()) points.push_back({p.weight, p.mass});
    return Json{{"kind", "finite_discrete"}, {"points", points}};
  }
  Json j;
  j["kind"] = "two_sided_composite";
  j["pos"] = w.positive() ? half_to_json(*w.positive()) : Json(nullptr);
  j["neg"] = w.negative() ? half_to_json(*w.negative()) : Json(nullptr);
  return j;
}

WeightMeasure weight_measure_from_json(const Json& j) {
  return validated([&]() -> WeightMeasure {
    if (j.is_null()) return WeightMeasure();
    const auto kind = field(j, "kind").get<std::string>();
    if (kind == "finite_discrete") {
      std::vector<DiscretePoint> points;
      for (const auto& p : field(j, "points")) {
        if (p.is_array() && p.size() == 2) {
          points.push_back({p[0].get<double>(), p[1].get<double>()});
        } else {
          points.push_back({number(p, "w"), number(p, "mass")});
        }
      }
      return WeightMeasure::finite_discrete(std::move(points));
    }
    if (kind == "density") {
      const auto family = field(j, "family").get<std::string>();
      const Json params = j.contains("params") ? j.at("params") : Json::object();
      const auto sides = j.contains("sides") ? j.at("sides").get<std::string>() : "positive";
      const auto half = half_from_family(family, params);
      if (sides == "positive") return WeightMeasure::density(half, nullptr);
      if (sides == "negative") return WeightMeasure::density(nullptr, half);
      if (sides == "both") return WeightMeasure::density(half, half);
      invalid("sides must be positive, negative or both");
    }
    if (kind == "two_sided_composite") {
      const auto pos = weight_measure_from_json(j.contains("pos") ? j.at("pos") : Json(nullptr));
      const auto neg = weight_measure_from_json(j.contains("neg") ? j.at("neg") : Json(nullptr));
      return compose_two_sided(pos, neg);
    }
    invalid("unknown weight kind \"" + kind + "\"");
  });
}

Json to_json(const WeightDistribution& d) {
  if (d.kind() == WeightDistribution::Kind::Discrete) {
    return Json{{"dist", "discrete"}, {"values", d.values()}, {"probs", d.probs()}};
  }
  return Json{{"dist", "normal"}, {"mean", d.mean()}, {"sd", d.sd()}};
}

WeightDistribution weight_distribution_from_json(const Json& j) {
  return validated([&] {
    const auto dist = field(j, "dist").get<std::string>();
    if (dist == "normal") return WeightDistribution::normal(number(j, "mean"), number_or(j, "sd", 0.0));
    if (dist == "discrete") {
      return WeightDistribution::discrete(field(j, "values").get<std::vector<double>>(),
                                          field(j, "probs").get<std::vector<double>>());
    }
    invalid("unknown weight distribution \"" + dist + "\"");
  });
}

// ---------------------------------------------------------------------------

SimSpec sim_spec_from_json(const Json& j) {
  return validated([&] {
    SimSpec spec;
    const auto kind = j.contains("kind") ? j.at("kind").get<std::string>() : "crsm";
    spec.domain_length = number_or(j, "T", 1.0);
    if (!(spec.domain_length > 0.0) || !std::isfinite(spec.domain_length)) {
      invalid("T must be positive and finite");
    }
    if (kind == "crsm") {
      spec.kind = SimSpec::Kind::Crsm;
      spec.pair.levy.weight = weight_measure_from_json(field(j, "weight"));
      spec.pair.levy.base_rate = number_or(j, "base_rate", 1.0);
      spec.pair.levy.domain_length = spec.domain_length;
      if (!(spec.pair.levy.base_rate > 0.0)) invalid("base_rate must be positive");
      if (j.contains("drift")) spec.pair.drift = density_from_json(j.at("drift"));
      if (j.contains("fixed_atoms")) {
        for (const auto& f : j.at("fixed_atoms")) {
          const double loc = number(f, "loc");
          if (!(loc >= 0.0 && loc < spec.domain_length)) invalid("fixed atom outside [0, T)");
          spec.fixed_atoms.push_back({loc, weight_distribution_from_json(field(f, "weight"))});
        }
      }
      const auto check = check_levy_integrability(spec.pair.levy);
      if (!check.ok) {
        invalid("Levy integrability check failed: integral of min(1,|w|) is " +
                format_double(check.value));
      }
    } else if (kind == "skellam") {
      spec.kind = SimSpec::Kind::Skellam;
      spec.mu1 = number(j, "mu1");
      spec.mu2 = number(j, "mu2");
      if (!(spec.mu1 >= 0.0) || !(spec.mu2 >= 0.0)) invalid("Skellam rates must be >= 0");
    } else if (kind == "grm") {
      spec.kind = SimSpec::Kind::Grm;
      std::vector<Interval> partition;
      if (j.contains("partition")) {
        for (const auto& p : j.at("partition")) {
          partition.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
      } else {
        const auto cells = field(j, "cells").get<std::size_t>();
        partition = uniform_partition(spec.domain_length, cells);
      }
      const auto kernel = j.contains("kernel") ? j.at("kernel").get<std::string>() : "matrix";
      if (kernel == "rank_one") {
        spec.grm = rank_one_kernel(partition, number_or(j, "scale", 1.0));
      } else if (kernel == "white_noise") {
        spec.grm = white_noise_kernel(partition, number_or(j, "scale", 1.0));
      } else if (kernel == "matrix") {
        const auto rows = field(j, "cov").get<std::vector<std::vector<double>>>();
        const auto n = static_cast<Eigen::Index>(rows.size());
        spec.grm.partition = partition;
        spec.grm.cov.resize(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
          if (rows[static_cast<std::size_t>(r)].size() != rows.size()) invalid("cov must be square");
          for (Eigen::Index c = 0; c < n; ++c) {
            spec.grm.cov(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
          }
        }
        if (j.contains("mean_measure")) {
          spec.grm.mean_measure = j.at("mean_measure").get<std::vector<double>>();
        }
      } else {
        invalid("unknown GRM kernel \"" + kernel + "\"");
      }
      spec.grm.bound = number_or(j, "bound", kInf);
      const auto report = check_grm_kernel(spec.grm);
      if (!report.pd) {
        invalid("GRM kernel is not positive semidefinite (min eigenvalue " +
                format_double(report.min_eigenvalue) + ")");
      }
      if (!report.within_bound) {
        invalid("GRM kernel sqrt-diagonal sum " + format_double(report.sqrt_sum) +
                " exceeds the declared bound");
      }
    } else {
      invalid("unknown spec kind \"" + kind + "\"");
    }
    return spec;
  });
}

// ---------------------------------------------------------------------------

bnp::TraitPrior prior_from_json(const Json& j) {
  return validated([&] {
    if (j.contains("example")) {
      if (field(j, "example").get<std::string>() != "gaussian") invalid("unknown prior example");
      std::vector<bnp::GaussianFixedAtom> fixed;
      if (j.contains("fixed")) {
        for (const auto& f : j.at("fixed")) {
          fixed.push_back({number(f, "loc"), number(f, "mean"), number_or(f, "sd", 1.0)});
        }
      }
      return bnp::gaussian_example_prior(number(j, "alpha"), number_or(j, "sigma", 1.0), fixed).first;
    }
    bnp::TraitPrior prior;
    prior.weight_measure = weight_measure_from_json(field(j, "weight_measure"));
    if (j.contains("base")) {
      const auto& b = j.at("base");
      const auto family = field(b, "family").get<std::string>();
      if (family == "uniform") {
        prior.base = bnp::BaseDistribution::uniform(number_or(b, "lo", 0.0), number_or(b, "hi", 1.0));
      } else if (family == "beta") {
        prior.base = bnp::BaseDistribution::beta(number(b, "a"), number(b, "b"),
                                                 number_or(b, "length", 1.0));
      } else {
        invalid("unknown base family \"" + family + "\"");
      }
    }
    if (j.contains("fixed_atoms")) {
      for (const auto& f : j.at("fixed_atoms")) {
        prior.fixed_atoms.push_back(
            {number(f, "loc"), weight_distribution_from_json(field(f, "weight"))});
      }
    }
    return prior;
  });
}

bnp::LikelihoodModel likelihood_from_json(const Json& j) {
  return validated([&] {
    const auto family = field(j, "family").get<std::string>();
    if (family == "signed_poisson") return bnp::LikelihoodModel::signed_poisson(number_or(j, "scale", 1.0));
    if (family == "gaussian_example") {
      return bnp::gaussian_example_prior(number(j, "alpha"), number_or(j, "sigma", 1.0), {}).second;
    }
    invalid("unknown likelihood family \"" + family + "\"");
  });
}

Json to_json(const bnp::TraitPrior& prior) {
  Json j;
  j["weight_measure"] = to_json(prior.weight_measure);
  Json base;
  base["family"] = prior.base.family();
  for (const auto& [k, v] : prior.base.params()) base[k] = v;
  j["base"] = base;
  Json fixed = Json::array();
  for (const auto& f : prior.fixed_atoms) fixed.push_back({{"loc", f.location}, {"weight", to_json(f.weight)}});
  j["fixed_atoms"] = fixed;
  return j;
}

Json to_json(const bnp::LikelihoodModel& lik) {
  Json j;
  j["family"] = lik.family;
  for (const auto& [k, v] : lik.params) j[k] = v;
  return j;
}

bnp::Observation observation_from_json(const Json& j) {
  return validated([&] {
    bnp::Observation obs;
    for (const auto& a : field(j, "atoms")) {
      const double x = a.contains("x") ? number(a, "x") : number(a, "w");
      obs.atoms.emplace_back(number(a, "loc"), x);
    }
    return obs;
  });
}

std::vector<bnp::Observation> read_observations(std::istream& in) {
  std::vector<bnp::Observation> out;
  std::string line;
  std::size_t number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(observation_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      invalid("observation line " + std::to_string(number_of_line) + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> theta_grid() {
  std::vector<double> grid;
  grid.reserve(2000);
  for (int i = 0; i < 2001; ++i) {
    const double t = -10.0 + 20.0 * static_cast<double>(i) / 2000.0;
    if (std::abs(t) < 5e-7) continue;
    grid.push_back(t);
  }
  return grid;
}

Json to_json(const bnp::PosteriorResult& post, const std::vector<double>& grid) {
  Json j;
  j["theta_grid"] = grid;
  Json fixed = Json::array();
  for (const auto& a : post.fixed_updates) fixed.push_back(posterior_atom_json(a, grid));
  j["fixed_updates"] = fixed;
  Json fresh = Json::array();
  for (const auto& a : post.new_atoms) fresh.push_back(posterior_atom_json(a, grid));
  j["new_atoms"] = fresh;

  // The ordinary part is closed form: base measure times the zero
  // probability raised to the number of observations.
  const auto& ord = post.ordinary;
  Json o;
  o["family"] = "thinned";
  o["base"] = to_json(ord.base);
  o["likelihood"] = to_json(ord.likelihood);
  o["power"] = ord.observations;
  if (ord.likelihood.family == "gaussian_example") {
    const auto two_minus = format_double(2.0 - ord.likelihood.params.at("alpha"));
    const auto minus_two = format_double(ord.likelihood.params.at("alpha") - 2.0);
    o["formula"] = "(1-|theta|^" + two_minus + " e^{-theta^2})^" +
                   std::to_string(ord.observations) + " |theta|^" + minus_two;
  } else if (ord.likelihood.family == "signed_poisson") {
    o["formula"] = "nu(dtheta) exp(-" + std::to_string(ord.observations) + " * " +
                   format_double(ord.likelihood.params.at("scale")) + " |theta|)";
  }
  const bool discrete = (!ord.base.positive() || ord.base.positive()->is_discrete()) &&
                        (!ord.base.negative() || ord.base.negative()->is_discrete());
  if (discrete) {
    o["measure"] = to_json(ord.measure());
  } else {
    o["density"] = tabulate([&](double t) { return ord.density(t); }, grid);
  }
  j["ordinary"] = o;
  return j;
}

// ---------------------------------------------------------------------------

void write_nodes_csv(std::ostream& out, const std::vector<graph::Node>& nodes) {
  out << "id,theta,w\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << i << ',' << format_double(nodes[i].theta) << ',' << format_double(nodes[i].w) << '\n';
  }
}

void write_edges_csv(std::ostream& out, const graph::SignedGraph& z) {
  out << "i,j,sign\n";
  for (const auto& e : z.edges) out << e.i << ',' << e.j << ',' << e.sign << '\n';
}

void write_scan_csv(std::ostream& out, const std::vector<graph::ScanRow>& rows) {
  out << "alpha,mean_nodes,mean_edges\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.mean_nodes) << ','
        << format_double(r.mean_edges) << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json_file(const std::string& path) {
  const auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    invalid(path + ": " + e.what());
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace srm::io
