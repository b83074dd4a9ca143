#pragma once

#include <cmath>
#include <vector>

#include "srm/measure.hpp"
#include "srm/rng.hpp"

namespace srm::fixture {

// Atoms at uniform locations with weights in (-3, 3) \ {0}.
inline SignedAtomicMeasure random_atomic(RngStream& rng, int max_atoms, double T = 1.0) {
  const int n = static_cast<int>(rng.uniform() * (max_atoms + 1));
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    while (w == 0.0) w = 6.0 * rng.uniform() - 3.0;
    atoms.push_back({T * rng.uniform(), w});
  }
  return SignedAtomicMeasure(std::move(atoms));
}

inline SignedAtomicMeasure random_measure(RngStream& rng, int max_atoms, double T = 1.0) {
  auto atomic = random_atomic(rng, max_atoms, T);
  const int pieces = 1 + static_cast<int>(rng.uniform() * 4);
  std::vector<double> breaks{0.0};
  for (int i = 1; i < pieces; ++i) breaks.push_back(T * i / pieces);
  breaks.push_back(T);
  std::vector<double> levels;
  for (int i = 0; i < pieces; ++i) levels.push_back(4.0 * rng.uniform() - 2.0);
  return SignedAtomicMeasure(atomic.atoms(), PiecewiseDensity(breaks, levels));
}

// 50 Borel sets: 25 random intervals and 25 random two-piece unions.
inline std::vector<BorelSet> random_sets(RngStream& rng, double T = 1.0) {
  std::vector<BorelSet> sets;
  for (int k = 0; k < 50; ++k) {
    double a = T * rng.uniform();
    double b = T * rng.uniform();
    if (a > b) std::swap(a, b);
    if (k < 25) {
      sets.push_back(BorelSet::interval(a, b));
    } else {
      double c = T * rng.uniform();
      double d = T * rng.uniform();
      if (c > d) std::swap(c, d);
      sets.push_back(BorelSet({Interval(a, b), Interval(c, d)}));
    }
  }
  return sets;
}

// Brute-force evaluation from atoms and the diffuse pieces.
inline double evaluate_oracle(const SignedAtomicMeasure& mu, const BorelSet& b) {
  double total = 0.0;
  for (const auto& a : mu.atoms()) {
    for (const auto& i : b.intervals()) {
      if (i.lo <= a.location && a.location < i.hi) total += a.weight;
    }
  }
  const auto& br = mu.diffuse().breaks();
  const auto& lv = mu.diffuse().levels();
  for (std::size_t p = 0; p < lv.size(); ++p) {
    for (const auto& i : b.intervals()) {
      const double lo = std::max(i.lo, br[p]);
      const double hi = std::min(i.hi, br[p + 1]);
      if (hi > lo) total += lv[p] * (hi - lo);
    }
  }
  return total;
}

}  // namespace srm::fixture
