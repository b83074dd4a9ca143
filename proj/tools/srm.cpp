// srm: command-line front end for simulation, posterior updates and graph scans.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "srm/bnp.hpp"
#include "srm/errors.hpp"
#include "srm/graph.hpp"
#include "srm/io.hpp"
#include "srm/parallel.hpp"
#include "srm/samplers.hpp"
#include "srm/stats.hpp"

#ifndef SRM_VERSION
#define SRM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using srm::Error;
using srm::ErrorKind;
using srm::io::Json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kSpec = 2, kTruncation = 3, kAssumption = 4, kGraph = 5 };

struct Options {
  std::string spec;
  std::string prior;
  std::string likelihood;
  std::string obs;
  std::string sets;
  std::string input;
  std::string manifest;
  std::string permutation = "reversal";
  std::vector<double> alphas;
  double eps = srm::kDefaultEps;
  double block_width = 1.0;
  long long reps = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  bool scan = false;
  bool probe = false;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string hex64(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << x;
  return s.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv, const Options& opt)
      : started_(utc_now()) {
    j_["command"] = std::move(command);
    j_["argv"] = std::move(argv);
    Json flags;
    flags["spec"] = opt.spec;
    flags["prior"] = opt.prior;
    flags["likelihood"] = opt.likelihood;
    flags["obs"] = opt.obs;
    flags["sets"] = opt.sets;
    flags["alphas"] = opt.alphas;
    flags["reps"] = opt.reps;
    flags["eps"] = opt.eps;
    flags["jobs"] = opt.jobs;
    flags["out"] = opt.out;
    flags["scan"] = opt.scan;
    flags["probe"] = opt.probe;
    flags["block_width"] = opt.block_width;
    flags["permutation"] = opt.permutation;
    j_["flags"] = flags;
    j_["seed"] = opt.seed;
    j_["version"] = SRM_VERSION;
    j_["inputs"] = Json::object();
    for (const auto* path : {&opt.spec, &opt.prior, &opt.likelihood, &opt.obs, &opt.sets, &opt.input}) {
      if (!path->empty()) {
        j_["inputs"][*path] = hex64(srm::io::fnv1a64(srm::io::read_file(*path)));
      }
    }
    j_["outputs"] = Json::array();
  }

  void add_output(const fs::path& p) { j_["outputs"].push_back(p.filename().string()); }

  void write(const fs::path& path) {
    j_["started_at"] = started_;
    j_["finished_at"] = utc_now();
    auto out = open_out(path);
    out << j_.dump(2) << '\n';
  }

 private:
  Json j_;
  std::string started_;
};

// ---------------------------------------------------------------------------

int cmd_simulate(const Options& opt, Manifest& manifest) {
  if (opt.spec.empty()) throw Error(ErrorKind::InvalidArgument, "simulate needs --spec");
  if (opt.reps < 0) throw Error(ErrorKind::InvalidArgument, "--reps must be >= 0");
  const auto spec = srm::io::sim_spec_from_json(srm::io::parse_json_file(opt.spec));
  std::vector<srm::BorelSet> sets;
  if (!opt.sets.empty()) {
    sets = srm::io::borel_sets_from_json(srm::io::parse_json_file(opt.sets));
  } else if (spec.kind != srm::io::SimSpec::Kind::Grm) {
    sets.push_back(srm::BorelSet::interval(0.0, spec.domain_length));
  }
  const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  ensure_dir(dir);
  auto draws = open_out(dir / "draws.jsonl");
  auto evals = open_out(dir / "evaluations.csv");
  evals << "rep,set_id,value\n";

  std::unique_ptr<srm::GrmSampler> grm;
  if (spec.kind == srm::io::SimSpec::Kind::Grm) grm = std::make_unique<srm::GrmSampler>(spec.grm);

  const srm::RngStream root(opt.seed);
  const auto reps = static_cast<std::size_t>(opt.reps);
  constexpr std::size_t kBatch = 4096;
  std::vector<std::string> lines(std::min(reps, kBatch));
  std::vector<std::string> rows(lines.size());
  double worst_remainder = 0.0;
  std::vector<double> remainders(lines.size(), 0.0);
  for (std::size_t start = 0; start < reps; start += kBatch) {
    const std::size_t count = std::min(kBatch, reps - start);
    srm::parallel_for(count, opt.jobs, [&](std::size_t k) {
      const std::size_t rep = start + k;
      auto rng = root.split(rep);
      std::ostringstream row;
      if (spec.kind == srm::io::SimSpec::Kind::Grm) {
        const auto values = (*grm)(rng);
        Json j;
        j["cells"] = values;
        lines[k] = j.dump();
        if (sets.empty()) {
          for (std::size_t c = 0; c < values.size(); ++c) {
            row << rep << ',' << c << ',' << srm::io::format_double(values[c]) << '\n';
          }
        } else {
          // Cell values summed over the cells lying inside each set.
          for (std::size_t s = 0; s < sets.size(); ++s) {
            double total = 0.0;
            for (std::size_t c = 0; c < values.size(); ++c) {
              const auto& cell = spec.grm.partition[c];
              if (sets[s].contains(cell.lo) && sets[s].contains(std::nextafter(cell.hi, cell.lo))) {
                total += values[c];
              }
            }
            row << rep << ',' << s << ',' << srm::io::format_double(total) << '\n';
          }
        }
        rows[k] = row.str();
        return;
      }
      srm::SignedAtomicMeasure mu;
      remainders[k] = 0.0;
      if (spec.kind == srm::io::SimSpec::Kind::Skellam) {
        mu = srm::sample_skellam_pp(spec.mu1, spec.mu2, rng, spec.domain_length);
      } else {
        auto draw = srm::sample_crsm(spec.pair, spec.fixed_atoms, opt.eps, rng);
        remainders[k] = draw.remainder_bound;
        mu = std::move(draw.measure);
      }
      lines[k] = srm::io::to_json(mu).dump();
      for (std::size_t s = 0; s < sets.size(); ++s) {
        row << rep << ',' << s << ',' << srm::io::format_double(mu.evaluate(sets[s])) << '\n';
      }
      rows[k] = row.str();
    });
    for (std::size_t k = 0; k < count; ++k) {
      draws << lines[k] << '\n';
      evals << rows[k];
      worst_remainder = std::max(worst_remainder, remainders[k]);
    }
  }
  spdlog::info("simulate: {} reps written to {}, largest remainder bound {}", reps, dir.string(),
               worst_remainder);
  manifest.add_output(dir / "draws.jsonl");
  manifest.add_output(dir / "evaluations.csv");
  manifest.write(dir / "manifest.json");
  return kOk;
}

int cmd_posterior(const Options& opt, Manifest& manifest) {
  if (opt.prior.empty() || opt.likelihood.empty()) {
    throw Error(ErrorKind::InvalidArgument, "posterior-update needs --prior and --likelihood");
  }
  const auto prior = srm::io::prior_from_json(srm::io::parse_json_file(opt.prior));
  const auto lik = srm::io::likelihood_from_json(srm::io::parse_json_file(opt.likelihood));
  std::vector<srm::bnp::Observation> obs;
  if (!opt.obs.empty()) {
    std::istringstream in(srm::io::read_file(opt.obs));
    obs = srm::io::read_observations(in);
  }
  const auto post = lik.kind == srm::bnp::LikelihoodModel::Kind::Discrete
                        ? srm::bnp::posterior_update_discrete(prior, lik, obs)
                        : srm::bnp::posterior_update_continuous(prior, lik, obs);
  const auto report = srm::bnp::check_assumptions(prior, lik);

  Json j;
  j["prior"] = srm::io::to_json(prior);
  j["likelihood"] = srm::io::to_json(lik);
  j["observations"] = obs.size();
  Json assumptions;
  assumptions["A0"] = report.a0;
  assumptions["A1"] = report.a1;
  assumptions[report.continuous ? "A2'" : "A2"] = report.a2;
  assumptions["a2_value"] = report.a2_value;
  assumptions["levy_value"] = report.levy_value;
  j["assumptions"] = assumptions;
  j["posterior"] = srm::io::to_json(post, srm::io::theta_grid());

  const fs::path path = opt.out.empty() ? fs::path("posterior.json") : fs::path(opt.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  out.close();
  manifest.add_output(path);
  manifest.write(fs::path(path.string() + ".manifest.json"));
  return kOk;
}

srm::WeightMeasure load_rho(const std::string& path) {
  const auto j = srm::io::parse_json_file(path);
  return srm::io::weight_measure_from_json(j.contains("weight") ? j.at("weight") : j);
}

int cmd_graph(const Options& opt, Manifest& manifest) {
  if (opt.spec.empty()) throw Error(ErrorKind::InvalidArgument, "graph needs --spec");
  if (opt.alphas.empty()) throw Error(ErrorKind::InvalidArgument, "graph needs --alphas");
  if (opt.reps < 0) throw Error(ErrorKind::InvalidArgument, "--reps must be >= 0");
  const auto rho = load_rho(opt.spec);
  const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);

  if (opt.scan) {
    const auto result = srm::graph::sparsity_scan(rho, opt.alphas, static_cast<int>(opt.reps),
                                                  opt.seed, opt.eps, opt.jobs);
    ensure_dir(dir);
    auto csv = open_out(dir / "scan.csv");
    srm::io::write_scan_csv(csv, result.rows);
    Json summary;
    summary["slope"] = result.slope;
    Json points = Json::array();
    for (const auto& [x, y] : result.points) points.push_back({x, y});
    summary["points"] = points;
    auto js = open_out(dir / "scan.json");
    js << summary.dump(2) << '\n';
    manifest.add_output(dir / "scan.csv");
    manifest.add_output(dir / "scan.json");
  } else if (opt.probe) {
    const double alpha = opt.alphas.front();
    const double ratio = alpha / opt.block_width;
    std::size_t blocks = 0;
    if (opt.block_width > 0.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio)) {
      blocks = static_cast<std::size_t>(std::round(ratio));
    }
    srm::graph::Permutation kind = srm::graph::Permutation::Reversal;
    if (opt.permutation == "identity") {
      kind = srm::graph::Permutation::Identity;
    } else if (opt.permutation == "random") {
      kind = srm::graph::Permutation::Random;
    } else if (opt.permutation != "reversal") {
      throw Error(ErrorKind::InvalidArgument, "--permutation must be identity, reversal or random");
    }
    const auto perm = srm::graph::make_permutation(kind, blocks, opt.seed);
    const auto report = srm::graph::exchangeability_probe(
        rho, alpha, opt.block_width, perm, static_cast<int>(opt.reps), opt.seed, opt.eps, opt.jobs);
    ensure_dir(dir);
    Json j;
    j["alpha"] = alpha;
    j["block_width"] = opt.block_width;
    j["blocks"] = report.blocks;
    j["permutation"] = report.permutation;
    Json statistics = Json::array();
    for (const auto& s : report.statistics) {
      statistics.push_back({{"name", s.name}, {"ks_distance", s.ks_distance}, {"p_value", s.p_value}});
    }
    j["statistics"] = statistics;
    auto out = open_out(dir / "probe.json");
    out << j.dump(2) << '\n';
    manifest.add_output(dir / "probe.json");
  } else {
    ensure_dir(dir);
    auto counts = open_out(dir / "counts.csv");
    counts << "alpha,rep,n_nodes,n_edges\n";
    const srm::RngStream root(opt.seed);
    for (std::size_t a = 0; a < opt.alphas.size(); ++a) {
      for (long long r = 0; r < opt.reps; ++r) {
        auto rng = root.split(a).split(static_cast<std::uint64_t>(r));
        const auto g = srm::graph::generate_graph({rho, opt.alphas[a], opt.eps, opt.seed}, rng);
        const std::string stem = "graph_a" + std::to_string(a) + "_r" + std::to_string(r);
        auto nodes = open_out(dir / (stem + "_nodes.csv"));
        srm::io::write_nodes_csv(nodes, g.graph.nodes);
        auto edges = open_out(dir / (stem + "_edges.csv"));
        srm::io::write_edges_csv(edges, g.graph);
        const auto c = srm::graph::count_observed(g.graph);
        counts << srm::io::format_double(opt.alphas[a]) << ',' << r << ',' << c.n_nodes << ','
               << c.n_edges << '\n';
        manifest.add_output(dir / (stem + "_nodes.csv"));
        manifest.add_output(dir / (stem + "_edges.csv"));
      }
    }
    manifest.add_output(dir / "counts.csv");
  }
  manifest.write(dir / "manifest.json");
  return kOk;
}

// Reads evaluations.csv and compares each set's values with the law implied
// by the spec: chi-square against the Skellam pmf, or the Campbell mean.
int cmd_analyze(const Options& opt, Manifest& manifest) {
  if (opt.spec.empty() || opt.input.empty()) {
    throw Error(ErrorKind::InvalidArgument, "analyze needs --spec and --input");
  }
  const auto spec = srm::io::sim_spec_from_json(srm::io::parse_json_file(opt.spec));
  std::vector<srm::BorelSet> sets;
  if (!opt.sets.empty()) {
    sets = srm::io::borel_sets_from_json(srm::io::parse_json_file(opt.sets));
  } else {
    sets.push_back(srm::BorelSet::interval(0.0, spec.domain_length));
  }
  std::map<std::size_t, std::vector<double>> values;
  std::istringstream in(srm::io::read_file(opt.input));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string rep;
    std::string set_id;
    std::string value;
    if (!std::getline(row, rep, ',') || !std::getline(row, set_id, ',') || !std::getline(row, value)) {
      throw Error(ErrorKind::Io, "malformed evaluation row: " + line);
    }
    values[std::stoul(set_id)].push_back(std::stod(value));
  }

  Json report = Json::array();
  for (const auto& [id, xs] : values) {
    Json r;
    r["set_id"] = id;
    r["n"] = xs.size();
    r["mean"] = srm::stats::mean(xs);
    if (xs.size() >= 2) r["variance"] = srm::stats::variance(xs);
    if (id < sets.size()) {
      const double len = sets[id].length();
      if (spec.kind == srm::io::SimSpec::Kind::Skellam) {
        const double mu1 = spec.mu1 * len;
        const double mu2 = spec.mu2 * len;
        std::vector<long> counts;
        counts.reserve(xs.size());
        for (double x : xs) counts.push_back(std::lround(x));
        const auto test = srm::stats::chi_square_gof(
            counts, [&](long k) { return srm::skellam_pmf(k, mu1, mu2); });
        r["test"] = "chi_square_skellam";
        r["statistic"] = test.statistic;
        r["dof"] = test.dof;
        r["p_value"] = test.p_value;
      } else if (spec.kind == srm::io::SimSpec::Kind::Crsm) {
        const auto& w = spec.pair.levy.weight;
        double first = 0.0;
        if (w.positive()) first += w.positive()->first_moment();
        if (w.negative()) first -= w.negative()->first_moment();
        r["campbell_mean"] =
            spec.pair.levy.base_rate * len * first + spec.pair.drift.integral(sets[id]);
      }
    }
    report.push_back(r);
  }
  const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
  ensure_dir(dir);
  auto out = open_out(dir / "analysis.json");
  out << report.dump(2) << '\n';
  manifest.add_output(dir / "analysis.json");
  manifest.write(dir / "manifest.json");
  return kOk;
}

int exit_code_for(ErrorKind kind, const std::string& command) {
  switch (kind) {
    case ErrorKind::SpecValidation:
    case ErrorKind::NotPSD:
    case ErrorKind::SupportViolation:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::UnmatchedLikelihood:
    case ErrorKind::DuplicateLocation:
    case ErrorKind::NonAtomicInput:
      return kSpec;
    case ErrorKind::TruncationTooCoarse:
      return kTruncation;
    case ErrorKind::AssumptionViolated:
      return kAssumption;
    case ErrorKind::InsufficientWindows:
    case ErrorKind::DegenerateScan:
    case ErrorKind::BlockMismatch:
      return kGraph;
    case ErrorKind::InvalidAlpha:
      return command == "graph" ? kGraph : kSpec;
    default:
      return kUsage;
  }
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("srm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SIGNED_MEASURES_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

int run(std::vector<std::string> args);

int cmd_replay(const Options& opt) {
  if (opt.manifest.empty()) throw Error(ErrorKind::InvalidArgument, "replay needs --manifest");
  const auto j = srm::io::parse_json_file(opt.manifest);
  auto argv = j.at("argv").get<std::vector<std::string>>();
  if (!opt.out.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
      if (argv[i] == "--out") {
        argv[i + 1] = opt.out;
        replaced = true;
      }
    }
    if (!replaced) {
      argv.push_back("--out");
      argv.push_back(opt.out);
    }
  }
  spdlog::info("replaying {}", j.at("command").get<std::string>());
  return run(argv);
}

int run(std::vector<std::string> args) {
  CLI::App app{"Random signed measures: simulation, posterior updates and signed graphs", "srm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SRM_VERSION);
  Options opt;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "Root seed for all random streams");
    sub->add_option("--out", opt.out, "Output directory (file for posterior-update)");
    sub->add_option("--jobs", opt.jobs, "Worker threads for replicate loops")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Sample measures from a spec");
  simulate->add_option("--spec", opt.spec, "Spec JSON")->required();
  simulate->add_option("--reps", opt.reps, "Number of draws");
  simulate->add_option("--sets", opt.sets, "Borel sets JSON");
  simulate->add_option("--eps", opt.eps, "Jump-size truncation for infinite activity");
  common(simulate);

  auto* posterior = app.add_subcommand("posterior-update", "Conjugate posterior update");
  posterior->add_option("--prior", opt.prior, "Prior JSON")->required();
  posterior->add_option("--likelihood", opt.likelihood, "Likelihood JSON")->required();
  posterior->add_option("--obs", opt.obs, "Observations JSONL");
  common(posterior);

  auto* graph = app.add_subcommand("graph", "Signed random graphs");
  graph->add_option("--spec", opt.spec, "Weight measure JSON")->required();
  graph->add_option("--alphas", opt.alphas, "Window sizes")->delimiter(',')->required();
  graph->add_option("--reps", opt.reps, "Replicates per window");
  graph->add_option("--eps", opt.eps, "Jump-size truncation");
  graph->add_flag("--scan", opt.scan, "Sparsity scan over the windows");
  graph->add_flag("--probe", opt.probe, "Exchangeability probe on the first window");
  graph->add_option("--block-width", opt.block_width, "Block width h for --probe");
  graph->add_option("--permutation", opt.permutation, "identity, reversal or random");
  common(graph);

  auto* analyze = app.add_subcommand("analyze", "Goodness of fit for simulated evaluations");
  analyze->add_option("--spec", opt.spec, "Spec JSON used for the simulation")->required();
  analyze->add_option("--input", opt.input, "evaluations.csv")->required();
  analyze->add_option("--sets", opt.sets, "Borel sets JSON");
  common(analyze);

  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay->add_option("--manifest", opt.manifest, "manifest.json")->required();
  replay->add_option("--out", opt.out, "Override the output location");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "Usage: " << e.what() << '\n';
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (opt.scan && opt.probe) {
    std::cerr << "Usage: --scan and --probe are exclusive\n";
    return kUsage;
  }
  try {
    if (command == "replay") return cmd_replay(opt);
    Manifest manifest(command, args, opt);
    if (command == "simulate") return cmd_simulate(opt, manifest);
    if (command == "posterior-update") return cmd_posterior(opt, manifest);
    if (command == "graph") return cmd_graph(opt, manifest);
    return cmd_analyze(opt, manifest);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind(), command);
  } catch (const std::exception& e) {
    std::cerr << "Io: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  return run(std::vector<std::string>(argv + 1, argv + argc));
}
