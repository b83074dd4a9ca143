#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/special_functions/expint.hpp>

#include "srm/errors.hpp"
#include "srm/levy.hpp"
#include "srm/quadrature.hpp"
#include "srm/samplers.hpp"

using namespace srm;
using cd = std::complex<double>;

namespace {

LevySpec spec_of(WeightMeasure w, double rate = 1.0, double T = 1.0) { return {std::move(w), rate, T}; }

WeightMeasure both(HalfLinePtr h) { return WeightMeasure::density(h, h); }

// Built-in families next to the same density handed to the generic
// quadrature path.
struct FamilyCase {
  const char* name;
  HalfLinePtr builtin;
  HalfLinePtr custom;
};

std::vector<FamilyCase> family_cases() {
  return {
      {"gamma", half_line::gamma(1.5, 2.0),
       half_line::custom([](double x) { return 1.5 * std::exp(-2.0 * x) / x; }, -1.0,
                         HalfLineMeasure::kInfinity)},
      {"stable", half_line::stable(0.7, 0.5, 3.0),
       half_line::custom([](double x) { return 0.7 * std::pow(x, -1.5); }, -1.5, 3.0)},
      {"power", half_line::power(1.0, -1.5, HalfLineMeasure::kInfinity),
       half_line::custom([](double x) { return std::pow(x, -1.5); }, -1.5, HalfLineMeasure::kInfinity)},
      {"exponential", half_line::exponential(2.0, 0.5),
       half_line::custom([](double x) { return 2.0 * std::exp(-0.5 * x); }, 0.0,
                         HalfLineMeasure::kInfinity)},
  };
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(Integrability, DiscreteUnitJump) {
  const auto r = check_levy_integrability(spec_of(WeightMeasure::finite_discrete({{1.0, 2.0}})));
  EXPECT_TRUE(r.ok);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
}

TEST(Integrability, InverseSquareDivergesAtZero) {
  const auto r = check_levy_integrability(
      spec_of(WeightMeasure::density(half_line::power(1.0, -2.0, 1.0), nullptr)));
  EXPECT_FALSE(r.ok);
}

TEST(Integrability, TruncatedBnpPower) {
  const double alpha = 0.5;
  const auto h = half_line::power(1.0, alpha - 2.0, 1.0);
  const auto r = check_levy_integrability(spec_of(both(h)));
  EXPECT_TRUE(r.ok);
  EXPECT_NEAR(r.value, 2.0 / alpha, 1e-12);
  // Same value by quadrature of |w| * |w|^{alpha-2} on (0, 1), twice.
  const double q = 2.0 * quad::integrate_from_zero([&](double w) { return std::pow(w, alpha - 1.0); },
                                                   1.0, alpha - 1.0);
  EXPECT_NEAR(q, 4.0, 4.0 * 1e-8);
  const auto custom = half_line::custom([&](double w) { return std::pow(w, alpha - 2.0); }, alpha - 2.0, 1.0);
  EXPECT_NEAR(check_levy_integrability(spec_of(both(custom))).value, 4.0, 4.0 * 1e-8);
}

TEST(Integrability, ScalesWithRateAndLength) {
  const auto r = check_levy_integrability(spec_of(WeightMeasure::finite_discrete({{0.5, 2.0}}), 3.0, 2.0));
  EXPECT_DOUBLE_EQ(r.value, 0.5 * 2.0 * 6.0);
}

TEST(Integrability, BuiltinFamiliesAgreeWithClosedForms) {
  // Hand-derived integral of min(1, x) against each density.
  const double gamma_cf = 1.5 * (1.0 - std::exp(-2.0)) / 2.0 + 1.5 * boost::math::expint(1, 2.0);
  const double stable_cf = 0.7 * (1.0 / 0.5) + 0.7 * (1.0 - std::pow(3.0, -0.5)) / 0.5;
  const double power_cf = 2.0 + 2.0;
  const double expo_cf = 2.0 * (1.0 - 1.5 * std::exp(-0.5)) / 0.25 + 2.0 * std::exp(-0.5) / 0.5;
  const double closed[] = {gamma_cf, stable_cf, power_cf, expo_cf};
  const auto cases = family_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    SCOPED_TRACE(cases[i].name);
    const double builtin = cases[i].builtin->one_wedge_integral();
    const double custom = cases[i].custom->one_wedge_integral();
    EXPECT_NEAR(builtin / closed[i], 1.0, 1e-6);
    EXPECT_NEAR(custom / closed[i], 1.0, 1e-6);
  }
}

TEST(Activity, DiscreteMass) {
  const auto a = activity(spec_of(WeightMeasure::finite_discrete({{1.0, 2.0}, {-1.0, 3.0}})));
  EXPECT_TRUE(a.finite);
  EXPECT_DOUBLE_EQ(a.mass, 5.0);
}

TEST(Activity, BnpPowerIsInfinite) {
  const auto a = activity(spec_of(both(half_line::power(1.0, -1.5, 1.0))));
  EXPECT_FALSE(a.finite);
  EXPECT_TRUE(std::isinf(a.mass));
}

TEST(Activity, TwoSidedExponential) {
  const auto a = activity(spec_of(both(half_line::exponential(1.0, 1.0))));
  EXPECT_TRUE(a.finite);
  EXPECT_NEAR(a.mass, 2.0, 1e-14);
  const auto c = half_line::custom([](double x) { return std::exp(-x); }, 0.0, HalfLineMeasure::kInfinity);
  EXPECT_NEAR(activity(spec_of(both(c))).mass, 2.0, 2e-8);
}

TEST(Activity, InfiniteForGammaAndStable) {
  EXPECT_FALSE(activity(spec_of(both(half_line::gamma(1.0, 1.0)))).finite);
  EXPECT_FALSE(activity(spec_of(both(half_line::stable(1.0, 0.5, 1.0)))).finite);
}

TEST(Compose, DiscreteExample) {
  const auto f1 = WeightMeasure::finite_discrete({{2.0, 1.0}});
  const auto f2 = WeightMeasure::finite_discrete({{3.0, 0.5}});
  const auto r = compose_two_sided(f1, f2);
  const auto pts = r.signed_points();
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].weight, 2.0);
  EXPECT_EQ(pts[0].mass, 1.0);
  EXPECT_EQ(pts[1].weight, -3.0);
  EXPECT_EQ(pts[1].mass, 0.5);
}

TEST(Compose, ZeroNegativeSide) {
  const auto f1 = WeightMeasure::finite_discrete({{2.0, 1.0}, {0.5, 4.0}});
  const auto r = compose_two_sided(f1, WeightMeasure());
  EXPECT_FALSE(r.has_negative_support());
  EXPECT_DOUBLE_EQ(r.total_mass(), f1.total_mass());
  EXPECT_DOUBLE_EQ(r.mass_between(0.0, 1.0), 4.0);
}

TEST(Compose, IntervalMasses) {
  const auto f1 = WeightMeasure::finite_discrete({{2.0, 1.0}, {0.5, 4.0}, {3.5, 0.25}});
  const auto f2 = WeightMeasure::finite_discrete({{1.5, 2.0}, {5.0, 1.0}});
  const auto r = compose_two_sided(f1, f2);
  const double bounds[][2] = {{1.0, 4.0}, {0.1, 0.6}, {0.0, 10.0}, {2.5, 3.0}};
  for (const auto& b : bounds) {
    EXPECT_DOUBLE_EQ(r.mass_between(b[0], b[1]), f1.mass_between(b[0], b[1]));
    EXPECT_DOUBLE_EQ(r.mass_between(-b[1], -b[0]), f2.mass_between(b[0], b[1]));
  }
  EXPECT_DOUBLE_EQ(r.mass_between(1.0, 4.0), 1.25);
  EXPECT_DOUBLE_EQ(r.mass_between(-4.0, -1.0), 2.0);
}

TEST(Compose, DensityHalvesRestrictExactly) {
  const auto f1 = WeightMeasure::density(half_line::gamma(1.0, 2.0), nullptr);
  const auto f2 = WeightMeasure::density(half_line::exponential(3.0, 1.0), nullptr);
  const auto r = compose_two_sided(f1, f2);
  EXPECT_EQ(r.mass_between(0.5, 2.0), f1.mass_between(0.5, 2.0));
  EXPECT_EQ(r.mass_between(-2.0, -0.5), f2.mass_between(0.5, 2.0));
}

TEST(Compose, RejectsNegativeSupport) {
  const auto neg = WeightMeasure::finite_discrete({{-1.0, 1.0}});
  const auto pos = WeightMeasure::finite_discrete({{1.0, 1.0}});
  EXPECT_EQ(kind_of([&] { compose_two_sided(neg, pos); }), ErrorKind::SupportViolation);
  EXPECT_EQ(kind_of([&] { compose_two_sided(pos, neg); }), ErrorKind::SupportViolation);
}

TEST(CharFn, ZeroArgument) {
  CharacteristicPair pair{spec_of(both(half_line::gamma(1.0, 1.0))), PiecewiseDensity::constant(0.0, 1.0, 2.0)};
  EXPECT_EQ(char_fn(pair, 0.0, BorelSet::interval(0.1, 0.8)), cd(1.0, 0.0));
}

TEST(CharFn, PureDrift) {
  CharacteristicPair pair{spec_of(WeightMeasure()), PiecewiseDensity::constant(0.0, 1.0, 1.5)};
  const auto b = BorelSet::interval(0.2, 0.6);
  for (double t : {0.3, 1.0, 2.5}) {
    const auto v = char_fn(pair, t, b);
    EXPECT_NEAR(std::abs(v - std::exp(cd(0.0, t * 1.5 * 0.4))), 0.0, 1e-14);
  }
}

TEST(CharFn, SkellamMatchesFourierSumOfPmf) {
  const double mu1 = 1.3;
  const double mu2 = 0.8;
  CharacteristicPair pair{spec_of(WeightMeasure::finite_discrete({{1.0, mu1}, {-1.0, mu2}})), {}};
  for (int k = 1; k <= 30; ++k) {
    const double t = 0.1 * k;
    cd fourier{0.0, 0.0};
    for (long n = -60; n <= 60; ++n) fourier += skellam_pmf(n, mu1, mu2) * std::exp(cd(0.0, t * n));
    const auto v = char_fn(pair, t, BorelSet::interval(0.0, 1.0));
    EXPECT_NEAR(v.real(), fourier.real(), 1e-10);
    EXPECT_NEAR(v.imag(), fourier.imag(), 1e-10);
  }
}

TEST(CharFn, GammaClosedForm) {
  // Gamma-type Levy measure: exp(-a |B| log(1 - i t / b)).
  CharacteristicPair pair{spec_of(WeightMeasure::density(half_line::gamma(2.0, 3.0), nullptr)), {}};
  const auto b = BorelSet::interval(0.0, 0.5);
  for (double t : {0.5, 1.0, 4.0}) {
    const cd expected = std::pow(cd(1.0, -t / 3.0), -2.0 * 0.5);
    EXPECT_NEAR(std::abs(char_fn(pair, t, b) - expected), 0.0, 1e-12);
  }
}

TEST(CharFn, BuiltinExponentsMatchQuadrature) {
  for (const auto& c : family_cases()) {
    SCOPED_TRACE(c.name);
    for (double t : {-2.0, 0.5, 1.0, 3.0}) {
      const auto a = c.builtin->char_exponent(t);
      const auto b = c.custom->char_exponent(t);
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-6 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(CharFn, BoundedAndConjugateSymmetric) {
  std::vector<CharacteristicPair> pairs;
  for (const auto& c : family_cases()) pairs.push_back({spec_of(both(c.builtin)), {}});
  pairs.push_back({spec_of(WeightMeasure::density(half_line::gamma(1.0, 1.0), half_line::stable(1.0, 0.3, 2.0))),
                   PiecewiseDensity::constant(0.0, 1.0, -0.7)});
  pairs.push_back({spec_of(WeightMeasure::finite_discrete({{1.0, 3.0}, {-2.0, 1.0}})), {}});
  const auto b = BorelSet({Interval(0.1, 0.3), Interval(0.5, 0.9)});
  for (const auto& pair : pairs) {
    for (int k = 0; k < 100; ++k) {
      const double t = -10.0 + 0.2 * k;
      const auto v = char_fn(pair, t, b);
      EXPECT_LE(std::abs(v), 1.0 + 1e-12);
      const auto w = char_fn(pair, -t, b);
      EXPECT_NEAR(std::abs(w - std::conj(v)), 0.0, 1e-12);
    }
  }
}

TEST(HalfLine, InverseTailInvertsTail) {
  for (const auto& c : family_cases()) {
    SCOPED_TRACE(c.name);
    for (double x : {1e-5, 0.01, 0.3, 1.0, 2.5}) {
      for (const auto& h : {c.builtin, c.custom}) {
        const double y = h->tail(x);
        if (!(y > 0.0)) continue;
        EXPECT_NEAR(h->inverse_tail(y) / x, 1.0, 1e-6);
      }
    }
    const double total = c.builtin->total_mass();
    if (std::isfinite(total)) EXPECT_EQ(c.builtin->inverse_tail(2.0 * total + 1.0), 0.0);
  }
}

TEST(HalfLine, TailMatchesClosedForms) {
  const auto g = half_line::gamma(1.5, 2.0);
  EXPECT_NEAR(g->tail(0.7), 1.5 * boost::math::expint(1, 1.4), 1e-13);
  const auto s = half_line::stable(0.7, 0.5, 3.0);
  EXPECT_NEAR(s->tail(0.25), 0.7 * (std::pow(0.25, -0.5) - std::pow(3.0, -0.5)) / 0.5, 1e-13);
  EXPECT_EQ(s->tail(4.0), 0.0);
}

TEST(HalfLine, DiscreteQueries) {
  const auto d = half_line::discrete({{2.0, 1.0}, {0.5, 3.0}});
  EXPECT_DOUBLE_EQ(d->tail(0.5), 4.0);
  EXPECT_DOUBLE_EQ(d->tail(0.6), 1.0);
  EXPECT_DOUBLE_EQ(d->moment_between(0.0, 10.0), 3.5);
  EXPECT_DOUBLE_EQ(d->inverse_tail(0.5), 2.0);
  EXPECT_DOUBLE_EQ(d->inverse_tail(2.0), 0.5);
  EXPECT_DOUBLE_EQ(d->inverse_tail(4.5), 0.0);
}

TEST(WeightMeasure, RejectsInvalidDiscreteInput) {
  EXPECT_EQ(kind_of([] { WeightMeasure::finite_discrete({{0.0, 1.0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { WeightMeasure::finite_discrete({{1.0, -1.0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { half_line::stable(1.0, 1.5, 1.0); }), ErrorKind::InvalidArgument);
}

TEST(Quadrature, SingularEndpoint) {
  EXPECT_NEAR(quad::integrate_from_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0, -0.5), 2.0, 2e-8);
  EXPECT_NEAR(quad::integrate_from_zero([](double x) { return std::pow(x, -0.9); }, 4.0, -0.9),
              10.0 * std::pow(4.0, 0.1), 1e-7);
  EXPECT_NEAR(quad::integrate([](double x) { return std::pow(x, -1.5); }, 1.0, quad::kInf), 2.0, 2e-8);
  EXPECT_NEAR(quad::integrate([](double x) { return std::exp(-x * x); }, -quad::kInf, quad::kInf),
              std::sqrt(std::numbers::pi), 1e-8);
}

TEST(Quadrature, FailuresAreReported) {
  EXPECT_EQ(kind_of([] { quad::integrate_from_zero([](double x) { return 1.0 / x; }, 1.0, -1.0); }),
            ErrorKind::QuadratureFailure);
  EXPECT_EQ(kind_of([] {
              quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0);
            }),
            ErrorKind::QuadratureFailure);
}
