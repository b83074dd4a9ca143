#pragma once

// Finitely supported signed measures with piecewise-constant diffuse parts.
//
// A SignedAtomicMeasure is
//
//     mu = diffuse(x) dx + sum_k w_k delta_{s_k}
//
// with distinct atom locations s_k and nonzero weights w_k. Sets are finite
// unions of half-open intervals [lo, hi), so every evaluation is a finite sum.

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace srm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_);

  double length() const { return hi - lo; }
  bool empty() const { return !(lo < hi); }
  bool contains(double x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Canonical finite union of disjoint half-open intervals. Construction sorts,
// drops empty pieces and merges overlapping or touching ones.
class BorelSet {
 public:
  BorelSet() = default;
  BorelSet(std::initializer_list<Interval> pieces);
  explicit BorelSet(std::vector<Interval> pieces);

  static BorelSet interval(double lo, double hi) { return BorelSet({Interval(lo, hi)}); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool contains(double x) const;
  double length() const;

  friend bool operator==(const BorelSet&, const BorelSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Signed density, constant on [breaks[i], breaks[i+1]) and zero outside
// [breaks.front(), breaks.back()). An empty breakpoint list is the zero density.
class PiecewiseDensity {
 public:
  PiecewiseDensity() = default;
  PiecewiseDensity(std::vector<double> breaks, std::vector<double> levels);

  static PiecewiseDensity constant(double lo, double hi, double level);

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& levels() const { return levels_; }

  bool is_zero() const;
  double value(double x) const;
  double integral(const Interval& b) const;
  double integral(const BorelSet& b) const;

  PiecewiseDensity positive_part() const;
  PiecewiseDensity negative_part() const;
  PiecewiseDensity scaled(double a) const;

  // Density of a*this + b*other on the union of both breakpoint grids.
  static PiecewiseDensity combine(double a, const PiecewiseDensity& x, double b,
                                  const PiecewiseDensity& y);

  friend bool operator==(const PiecewiseDensity&, const PiecewiseDensity&) = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

class SignedAtomicMeasure {
 public:
  SignedAtomicMeasure() = default;
  // Atoms sharing a location are merged by summing weights; zero weights are
  // dropped. Locations compare by exact equality.
  explicit SignedAtomicMeasure(std::vector<Atom> atoms, PiecewiseDensity diffuse = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  const PiecewiseDensity& diffuse() const { return diffuse_; }

  bool is_zero() const { return atoms_.empty() && diffuse_.is_zero(); }
  bool is_purely_atomic() const { return diffuse_.is_zero(); }

  double evaluate(const BorelSet& b) const;
  double evaluate(const Interval& b) const;

  friend bool operator==(const SignedAtomicMeasure&, const SignedAtomicMeasure&) = default;

 private:
  double atom_sum(const Interval& b) const;

  std::vector<Atom> atoms_;  // sorted by location
  PiecewiseDensity diffuse_;
};

struct MarkedPoint {
  double location = 0.0;
  double mark = 0.0;

  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

struct MarkedPointPattern {
  std::vector<MarkedPoint> points;

  friend bool operator==(const MarkedPointPattern&, const MarkedPointPattern&) = default;
};

struct JordanDecomposition {
  SignedAtomicMeasure positive;
  SignedAtomicMeasure negative;
};

double evaluate(const SignedAtomicMeasure& mu, const BorelSet& b);

// Unique split mu = positive - negative into mutually singular nonnegative parts.
JordanDecomposition jordan_decompose(const SignedAtomicMeasure& mu);

double total_variation(const SignedAtomicMeasure& mu, const BorelSet& b);

// Throws NonAtomicInput when mu has a nonzero diffuse part.
MarkedPointPattern to_marked_point_pattern(const SignedAtomicMeasure& mu);

// Throws DuplicateLocation if two points share a location.
SignedAtomicMeasure from_marked_point_pattern(const MarkedPointPattern& pattern);

SignedAtomicMeasure linear_combine(double a, const SignedAtomicMeasure& mu, double b,
                                   const SignedAtomicMeasure& nu);

}  // namespace srm
