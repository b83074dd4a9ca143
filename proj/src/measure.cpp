#include "srm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srm/errors.hpp"

namespace srm {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw Error(ErrorKind::InvalidArgument,
                "interval [" + std::to_string(lo) + ", " + std::to_string(hi) + ") is not valid");
  }
}

BorelSet::BorelSet(std::initializer_list<Interval> pieces)
    : BorelSet(std::vector<Interval>(pieces)) {}

BorelSet::BorelSet(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& i) { return i.empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& piece : pieces) {
    if (!intervals_.empty() && piece.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, piece.hi);
    } else {
      intervals_.push_back(piece);
    }
  }
}

bool BorelSet::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& i) { return v < i.lo; });
  return it != intervals_.begin() && std::prev(it)->contains(x);
}

double BorelSet::length() const {
  double total = 0.0;
  for (const auto& i : intervals_) total += i.length();
  return total;
}

// ---------------------------------------------------------------------------

PiecewiseDensity::PiecewiseDensity(std::vector<double> breaks, std::vector<double> levels)
    : breaks_(std::move(breaks)), levels_(std::move(levels)) {
  if (breaks_.empty() && levels_.empty()) return;
  if (breaks_.size() != levels_.size() + 1) {
    throw Error(ErrorKind::InvalidArgument,
                "piecewise density needs exactly one more breakpoint than levels");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!std::isfinite(breaks_[i])) {
      throw Error(ErrorKind::InvalidArgument, "density breakpoints must be finite");
    }
    if (i > 0 && !(breaks_[i - 1] < breaks_[i])) {
      throw Error(ErrorKind::InvalidArgument, "density breakpoints must be strictly increasing");
    }
  }
  for (double l : levels_) {
    if (!std::isfinite(l)) throw Error(ErrorKind::InvalidArgument, "density levels must be finite");
  }
}

PiecewiseDensity PiecewiseDensity::constant(double lo, double hi, double level) {
  return PiecewiseDensity({lo, hi}, {level});
}

bool PiecewiseDensity::is_zero() const {
  return std::all_of(levels_.begin(), levels_.end(), [](double l) { return l == 0.0; });
}

double PiecewiseDensity::value(double x) const {
  if (breaks_.empty() || x < breaks_.front() || x >= breaks_.back()) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return levels_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double PiecewiseDensity::integral(const Interval& b) const {
  if (breaks_.empty() || b.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const double lo = std::max(b.lo, breaks_[i]);
    const double hi = std::min(b.hi, breaks_[i + 1]);
    if (lo < hi) total += levels_[i] * (hi - lo);
  }
  return total;
}

double PiecewiseDensity::integral(const BorelSet& b) const {
  double total = 0.0;
  for (const auto& i : b.intervals()) total += integral(i);
  return total;
}

PiecewiseDensity PiecewiseDensity::positive_part() const {
  auto levels = levels_;
  for (double& l : levels) l = std::max(l, 0.0);
  return PiecewiseDensity(breaks_, std::move(levels));
}

PiecewiseDensity PiecewiseDensity::negative_part() const {
  auto levels = levels_;
  for (double& l : levels) l = std::max(-l, 0.0);
  return PiecewiseDensity(breaks_, std::move(levels));
}

PiecewiseDensity PiecewiseDensity::scaled(double a) const {
  auto levels = levels_;
  for (double& l : levels) l *= a;
  return PiecewiseDensity(breaks_, std::move(levels));
}

PiecewiseDensity PiecewiseDensity::combine(double a, const PiecewiseDensity& x, double b,
                                           const PiecewiseDensity& y) {
  if (x.breaks_.empty()) return y.scaled(b);
  if (y.breaks_.empty()) return x.scaled(a);
  std::vector<double> grid;
  grid.reserve(x.breaks_.size() + y.breaks_.size());
  std::merge(x.breaks_.begin(), x.breaks_.end(), y.breaks_.begin(), y.breaks_.end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> levels(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    // Pieces are constant on each refined cell, so the left endpoint is representative.
    levels[i] = a * x.value(grid[i]) + b * y.value(grid[i]);
  }
  return PiecewiseDensity(std::move(grid), std::move(levels));
}

// ---------------------------------------------------------------------------

SignedAtomicMeasure::SignedAtomicMeasure(std::vector<Atom> atoms, PiecewiseDensity diffuse)
    : diffuse_(std::move(diffuse)) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.location) || !std::isfinite(a.weight)) {
      throw Error(ErrorKind::InvalidArgument, "atom location and weight must be finite");
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& x, const Atom& y) { return x.location < y.location; });
  atoms_.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().location == a.location) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

double SignedAtomicMeasure::atom_sum(const Interval& b) const {
  auto first = std::lower_bound(atoms_.begin(), atoms_.end(), b.lo,
                                [](const Atom& a, double x) { return a.location < x; });
  double total = 0.0;
  for (auto it = first; it != atoms_.end() && it->location < b.hi; ++it) total += it->weight;
  return total;
}

double SignedAtomicMeasure::evaluate(const Interval& b) const {
  if (b.empty()) return 0.0;
  return atom_sum(b) + diffuse_.integral(b);
}

double SignedAtomicMeasure::evaluate(const BorelSet& b) const {
  double total = 0.0;
  for (const auto& i : b.intervals()) total += evaluate(i);
  return total;
}

double evaluate(const SignedAtomicMeasure& mu, const BorelSet& b) { return mu.evaluate(b); }

JordanDecomposition jordan_decompose(const SignedAtomicMeasure& mu) {
  std::vector<Atom> pos;
  std::vector<Atom> neg;
  for (const auto& a : mu.atoms()) {
    if (a.weight > 0.0) {
      pos.push_back(a);
    } else {
      neg.push_back({a.location, -a.weight});
    }
  }
  return {SignedAtomicMeasure(std::move(pos), mu.diffuse().positive_part()),
          SignedAtomicMeasure(std::move(neg), mu.diffuse().negative_part())};
}

double total_variation(const SignedAtomicMeasure& mu, const BorelSet& b) {
  const auto parts = jordan_decompose(mu);
  return parts.positive.evaluate(b) + parts.negative.evaluate(b);
}

MarkedPointPattern to_marked_point_pattern(const SignedAtomicMeasure& mu) {
  if (!mu.is_purely_atomic()) {
    throw Error(ErrorKind::NonAtomicInput,
                "marked point pattern requires a purely atomic measure (diffuse part is nonzero)");
  }
  MarkedPointPattern pattern;
  pattern.points.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) pattern.points.push_back({a.location, a.weight});
  return pattern;
}

SignedAtomicMeasure from_marked_point_pattern(const MarkedPointPattern& pattern) {
  std::vector<Atom> atoms;
  atoms.reserve(pattern.points.size());
  for (const auto& p : pattern.points) {
    if (p.mark == 0.0) throw Error(ErrorKind::InvalidArgument, "marks must be nonzero");
    atoms.push_back({p.location, p.mark});
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].location == atoms[i - 1].location) {
      throw Error(ErrorKind::DuplicateLocation,
                  "two points share location " + std::to_string(atoms[i].location));
    }
  }
  return SignedAtomicMeasure(std::move(atoms));
}

SignedAtomicMeasure linear_combine(double a, const SignedAtomicMeasure& mu, double b,
                                   const SignedAtomicMeasure& nu) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size() + nu.atoms().size());
  if (a != 0.0) {
    for (const auto& x : mu.atoms()) atoms.push_back({x.location, a * x.weight});
  }
  if (b != 0.0) {
    for (const auto& x : nu.atoms()) atoms.push_back({x.location, b * x.weight});
  }
  auto diffuse = PiecewiseDensity::combine(a, mu.diffuse(), b, nu.diffuse());
  if (diffuse.is_zero()) diffuse = PiecewiseDensity();
  return SignedAtomicMeasure(std::move(atoms), std::move(diffuse));
}

}  // namespace srm
