#include "srm/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "srm/errors.hpp"
#include "srm/parallel.hpp"
#include "srm/stats.hpp"

namespace srm::graph {

namespace {

// Directed points of PP(W x W) for the nodes in `members`, all of one sign.
// The total count is Poisson((sum w)^2) and each endpoint is drawn with
// probability proportional to its weight, which gives n_ii ~ Poisson(w_i^2)
// and n_ij + n_ji ~ Poisson(2 w_i w_j) independently over pairs.
void sample_links(const std::vector<Node>& nodes, const std::vector<std::size_t>& members,
                  long sign, RngStream& rng, std::vector<Count>& out) {
  if (members.empty()) return;
  std::vector<double> cumulative(members.size());
  double total = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    total += std::abs(nodes[members[k]].w);
    cumulative[k] = total;
  }
  const auto n_points = rng.poisson(total * total);
  const auto pick = [&]() {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return members[static_cast<std::size_t>(it - cumulative.begin())];
  };
  std::vector<std::pair<std::size_t, std::size_t>> points;
  points.reserve(n_points);
  for (std::uint64_t p = 0; p < n_points; ++p) {
    const auto i = pick();
    const auto j = pick();
    points.emplace_back(i, j);
  }
  std::sort(points.begin(), points.end());
  for (std::size_t a = 0; a < points.size();) {
    std::size_t b = a;
    while (b < points.size() && points[b] == points[a]) ++b;
    out.push_back({points[a].first, points[a].second, sign * static_cast<long>(b - a)});
    a = b;
  }
}

double first_absolute_moment(const WeightMeasure& rho) { return rho.abs_first_moment(); }

}  // namespace

long SignedMultigraph::count(std::size_t i, std::size_t j) const {
  const auto it = std::lower_bound(counts.begin(), counts.end(), std::pair{i, j},
                                   [](const Count& c, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::pair{c.i, c.j} < key;
                                   });
  return (it != counts.end() && it->i == i && it->j == j) ? it->n : 0;
}

int SignedGraph::z(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{i, j},
                                   [](const Edge& e, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::pair{e.i, e.j} < key;
                                   });
  return (it != edges.end() && it->i == i && it->j == j) ? it->sign : 0;
}

GeneratedGraph link_nodes(std::vector<Node> nodes, RngStream& rng) {
  GeneratedGraph out;
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].w > 0.0) positive.push_back(i);
    if (nodes[i].w < 0.0) negative.push_back(i);
  }
  const auto base = rng.fork();
  auto pos_rng = base.split(1);
  auto neg_rng = base.split(2);
  auto& counts = out.multigraph.counts;
  sample_links(nodes, positive, 1, pos_rng, counts);
  sample_links(nodes, negative, -1, neg_rng, counts);
  std::sort(counts.begin(), counts.end(),
            [](const Count& a, const Count& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; });

  // Fold n_ij + n_ji onto the unordered pair.
  std::vector<Count> folded;
  folded.reserve(counts.size());
  for (const auto& c : counts) {
    folded.push_back({std::min(c.i, c.j), std::max(c.i, c.j), c.n});
  }
  std::sort(folded.begin(), folded.end(),
            [](const Count& a, const Count& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; });
  for (std::size_t a = 0; a < folded.size();) {
    std::size_t b = a;
    long total = 0;
    while (b < folded.size() && folded[b].i == folded[a].i && folded[b].j == folded[a].j) {
      total += folded[b].n;
      ++b;
    }
    if (total != 0) {
      out.graph.edges.push_back({folded[a].i, folded[a].j, total > 0 ? 1 : -1});
    }
    a = b;
  }
  out.multigraph.nodes = nodes;
  out.graph.nodes = std::move(nodes);
  return out;
}

GeneratedGraph generate_graph(const GraphConfig& cfg, RngStream& rng) {
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    std::ostringstream msg;
    msg << "window size must be positive and finite, got " << cfg.alpha;
    throw Error(ErrorKind::InvalidAlpha, msg.str());
  }
  CharacteristicPair pair;
  pair.levy = {cfg.rho, 1.0, cfg.alpha};
  const auto base = rng.fork();
  auto w_rng = base.split(0);
  const auto draw = sample_crsm(pair, {}, cfg.eps, w_rng);
  std::vector<Node> nodes;
  nodes.reserve(draw.measure.atoms().size());
  for (const auto& atom : draw.measure.atoms()) nodes.push_back({atom.location, atom.weight});
  auto link_rng = base.split(1);
  auto out = link_nodes(std::move(nodes), link_rng);
  out.remainder_bound = draw.remainder_bound;
  return out;
}

GeneratedGraph generate_graph(const GraphConfig& cfg) {
  RngStream rng(cfg.seed);
  return generate_graph(cfg, rng);
}

ObservedCounts count_observed(const SignedGraph& z) {
  std::vector<std::size_t> touched;
  touched.reserve(2 * z.edges.size());
  for (const auto& e : z.edges) {
    touched.push_back(e.i);
    touched.push_back(e.j);
  }
  std::sort(touched.begin(), touched.end());
  const auto distinct = std::unique(touched.begin(), touched.end()) - touched.begin();
  return {static_cast<std::size_t>(distinct), z.edges.size()};
}

ScanResult sparsity_scan(const WeightMeasure& rho, const std::vector<double>& alphas, int reps,
                         std::uint64_t seed, double eps, int jobs) {
  if (alphas.size() < 3) {
    std::ostringstream msg;
    msg << "sparsity scan needs at least 3 window sizes, got " << alphas.size();
    throw Error(ErrorKind::InsufficientWindows, msg.str());
  }
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (!(alphas[a] > 0.0) || (a > 0 && !(alphas[a] > alphas[a - 1]))) {
      throw Error(ErrorKind::InvalidAlpha, "window sizes must be positive and increasing");
    }
  }
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "sparsity scan needs reps >= 1");
  if (!std::isfinite(first_absolute_moment(rho))) {
    throw Error(ErrorKind::InvalidArgument,
                "sparsity scan needs a weight measure with finite first absolute moment");
  }

  const std::size_t n_reps = static_cast<std::size_t>(reps);
  std::vector<ObservedCounts> counts(alphas.size() * n_reps);
  const RngStream root(seed);
  parallel_for(counts.size(), jobs, [&](std::size_t task) {
    const std::size_t a = task / n_reps;
    const std::size_t r = task % n_reps;
    auto rng = root.split(a).split(r);
    const auto g = generate_graph({rho, alphas[a], eps, seed}, rng);
    counts[task] = count_observed(g.graph);
  });

  ScanResult result;
  std::vector<double> log_nodes;
  std::vector<double> log_edges;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    double nodes = 0.0;
    double edges = 0.0;
    for (std::size_t r = 0; r < n_reps; ++r) {
      nodes += static_cast<double>(counts[a * n_reps + r].n_nodes);
      edges += static_cast<double>(counts[a * n_reps + r].n_edges);
    }
    nodes /= static_cast<double>(n_reps);
    edges /= static_cast<double>(n_reps);
    if (nodes == 0.0 || edges == 0.0) {
      std::ostringstream msg;
      msg << "window alpha=" << alphas[a] << " produced no observed nodes in any replicate";
      throw Error(ErrorKind::DegenerateScan, msg.str());
    }
    result.rows.push_back({alphas[a], nodes, edges});
    result.points.emplace_back(std::log(nodes), std::log(edges));
    log_nodes.push_back(std::log(nodes));
    log_edges.push_back(std::log(edges));
  }
  result.slope = stats::ols_slope(log_nodes, log_edges);
  return result;
}

std::vector<std::size_t> make_permutation(Permutation kind, std::size_t blocks, std::uint64_t seed) {
  std::vector<std::size_t> perm(blocks);
  std::iota(perm.begin(), perm.end(), 0);
  if (kind == Permutation::Reversal) {
    std::reverse(perm.begin(), perm.end());
  } else if (kind == Permutation::Random) {
    RngStream rng(seed);
    for (std::size_t i = blocks; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
      std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
    }
  }
  return perm;
}

std::vector<std::vector<double>> block_counts(const SignedGraph& z, double h, std::size_t blocks) {
  std::vector<std::vector<double>> c(blocks, std::vector<double>(blocks, 0.0));
  const auto block_of = [&](double theta) {
    const auto b = static_cast<std::size_t>(std::floor(theta / h));
    return std::min(b, blocks - 1);
  };
  for (const auto& e : z.edges) {
    const auto a = block_of(z.nodes[e.i].theta);
    const auto b = block_of(z.nodes[e.j].theta);
    c[a][b] += e.sign;
    if (e.i != e.j) c[b][a] += e.sign;
  }
  return c;
}

ProbeReport exchangeability_probe(const WeightMeasure& rho, double alpha, double h,
                                  const std::vector<std::size_t>& permutation, int reps,
                                  std::uint64_t seed, double eps, int jobs) {
  if (!(h > 0.0) || !(alpha > 0.0)) {
    throw Error(ErrorKind::BlockMismatch, "window and block width must be positive");
  }
  const double ratio = alpha / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "window " << alpha << " is not a multiple of block width " << h;
    throw Error(ErrorKind::BlockMismatch, msg.str());
  }
  const auto blocks = static_cast<std::size_t>(rounded);
  if (permutation.size() != blocks) {
    throw Error(ErrorKind::BlockMismatch, "permutation length differs from the block count");
  }
  {
    auto sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < blocks; ++i) {
      if (sorted[i] != i) throw Error(ErrorKind::BlockMismatch, "block map is not a permutation");
    }
  }
  if (reps < 2) throw Error(ErrorKind::InvalidArgument, "probe needs reps >= 2");

  // Totals over the whole grid are permutation invariant, so the statistics
  // are read on the leading half of the blocks along each axis.
  const std::size_t window = (blocks + 1) / 2;
  const auto summarize = [&](const std::vector<std::vector<double>>& c,
                             const std::vector<std::size_t>& perm) {
    std::array<double, 3> s{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < window; ++a) {
      for (std::size_t b = 0; b < window; ++b) {
        const double v = c[perm[a]][perm[b]];
        if (v > 0.0) s[0] += v;
        if (v < 0.0) s[1] -= v;
        if (a != b) s[2] += v;
      }
    }
    return s;
  };
  std::vector<std::size_t> identity(blocks);
  std::iota(identity.begin(), identity.end(), 0);

  const auto n = static_cast<std::size_t>(reps);
  std::vector<std::array<double, 3>> first(n);
  std::vector<std::array<double, 3>> second(n);
  const RngStream root(seed);
  parallel_for(2 * n, jobs, [&](std::size_t task) {
    const std::size_t arm = task / n;
    const std::size_t r = task % n;
    auto rng = root.split(arm).split(r);
    const auto g = generate_graph({rho, alpha, eps, seed}, rng);
    const auto c = block_counts(g.graph, h, blocks);
    if (arm == 0) {
      first[r] = summarize(c, identity);
    } else {
      second[r] = summarize(c, permutation);
    }
  });

  ProbeReport report;
  report.blocks = blocks;
  report.permutation = permutation;
  const char* names[] = {"positive_mass", "negative_mass", "offdiagonal_sum"};
  for (std::size_t s = 0; s < 3; ++s) {
    ProbeStatistic stat;
    stat.name = names[s];
    for (std::size_t r = 0; r < n; ++r) {
      stat.original.push_back(first[r][s]);
      stat.permuted.push_back(second[r][s]);
    }
    const auto ks = stats::ks_two_sample(stat.original, stat.permuted);
    stat.ks_distance = ks.statistic;
    stat.p_value = ks.p_value;
    report.statistics.push_back(std::move(stat));
  }
  return report;
}

}  // namespace srm::graph
