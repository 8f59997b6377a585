#include <doctest.h>

#include <cmath>
#include <random>

#include "lpq/hardy.hpp"
#include "oracles.hpp"

using namespace lpq;

namespace {

const Tolerances kTol{};

HardyProblem problem(double p, double q, Interval iv, const SymFun& v0, const SymFun& v1) {
  return {make_exponents(p, q), iv, v0, v1};
}

SymFun mono(double c, double a, double d, Interval dom) {
  return SymFun::symbolic({{c, a, 0, d}}, dom);
}

}  // namespace

TEST_CASE("profile examples") {
  const Interval unit(0, 1);
  auto pr = problem(2, 2, unit, SymFun::constant(1, unit), SymFun::constant(1, unit));
  CHECK(profile(pr, 0.5).value() == doctest::Approx(0.5).epsilon(1e-10));

  const Interval half(0, kInf);
  auto classical = problem(2, 2, half, mono(1, -1, 0, half), SymFun::constant(1, half));
  CHECK(profile(classical, 1.0).value() == doctest::Approx(1.0).epsilon(1e-9));

  auto flat = problem(2, 2, half, SymFun::constant(1, half), SymFun::constant(1, half));
  CHECK(profile(flat, 1.0).is_divergent());

  auto lower = problem(2, 3, half, SymFun::constant(1, half), SymFun::constant(1, half));
  CHECK_THROWS_AS(profile(lower, 1.0), RegimeError);
  CHECK_THROWS_AS(profile(pr, 0.0), DomainError);
}

TEST_CASE("Hardy constant examples") {
  const Interval unit(0, 1);
  auto r = hardy_constant(problem(2, 2, unit, SymFun::constant(1, unit), SymFun::constant(1, unit)));
  CHECK(r.regime == Regime::SupForm);
  REQUIRE(r.chi.is_finite());
  CHECK(r.chi.value() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.argmax.kind == Argmax::Kind::Interior);
  CHECK(r.argmax.tau == doctest::Approx(0.5).epsilon(1e-5));

  const Interval half(0, kInf);
  for (double p : {2.0, 3.0, 4.0}) {
    CAPTURE(p);
    auto c = hardy_constant(problem(p, p, half, mono(1, -1, 0, half), SymFun::constant(1, half)));
    REQUIRE(c.chi.is_finite());
    CHECK(c.chi.value() == doctest::Approx(std::pow(p - 1, -1 / p)).epsilon(1e-8));
  }

  auto lower = hardy_constant(
      problem(2, 4, half, mono(1, 0, -1, half), SymFun::constant(1, half)));
  CHECK(lower.regime == Regime::IntegralForm);
  REQUIRE(lower.chi.is_finite());
  CHECK(lower.chi.value() == doctest::Approx(std::pow(128.0, -0.25)).epsilon(1e-7));

  auto flat = hardy_constant(
      problem(2, 2, half, SymFun::constant(1, half), SymFun::constant(1, half)));
  CHECK(flat.chi.is_divergent());
  CHECK(flat.decided_by == IntegralResult::DecidedBy::Symbolic);
}

namespace {

struct Draw {
  double p, q, a, b;
};

Draw draw(std::mt19937& rng, bool sup_form, double lo_ab, double hi_ab) {
  std::uniform_real_distribution<double> ex(1.1, 4.0), w(lo_ab, hi_ab);
  double p = ex(rng), q = ex(rng);
  if ((p >= q) != sup_form) std::swap(p, q);
  if (p == q && !sup_form) q += 0.5;
  return {p, q, w(rng), w(rng)};
}

bool tag_finite(const HardyProblem& pr, FinitenessMode mode = FinitenessMode::Auto) {
  return hardy_constant(pr, kTol, mode).chi.is_finite();
}

}  // namespace

TEST_CASE("finiteness matches the hand-derived oracle (exact mode)") {
  std::mt19937 rng(2024);
  int checked = 0;
  for (bool sup : {true, false}) {
    for (int i = 0; i < 30; ++i) {
      const Draw d = draw(rng, sup, -3, 3);
      CAPTURE(d.p);
      CAPTURE(d.q);
      CAPTURE(d.a);
      CAPTURE(d.b);
      const Interval one(1, kInf), unit(0, 1), half(0, kInf);
      CHECK(tag_finite(problem(d.p, d.q, one, mono(1, d.a, 0, one), mono(1, d.b, 0, one))) ==
            oracle::power_from_one(d.p, d.q, d.a, d.b));
      CHECK(tag_finite(problem(d.p, d.q, unit, mono(1, d.a, 0, unit), mono(1, d.b, 0, unit))) ==
            oracle::power_unit(d.p, d.q, d.a, d.b));
      CHECK(tag_finite(problem(d.p, d.q, half, mono(1, 0, d.a, half), mono(1, 0, d.b, half))) ==
            oracle::exp_half_line(d.p, d.q, d.a, d.b));
      // Balanced power weights on (0, inf): finite exactly in the sup form.
      const double qc = oracle::conj(d.q);
      const double a = -1 / d.p - 0.2 - std::abs(d.a) / 3;
      const double b = a + 1 / d.p + 1 / qc;
      auto pr = problem(d.p, d.q, half, mono(1, a, 0, half), mono(1, b, 0, half));
      const bool expect = oracle::power_half_line(d.p, d.q, a, b);
      CHECK(tag_finite(pr) == expect);
      if (expect)
        CHECK(hardy_constant(pr).chi.value() ==
              doctest::Approx(oracle::power_half_line_value(d.p, d.q, a, b)).epsilon(1e-8));
      CHECK(tag_finite(problem(d.p, d.q, half, mono(1, a, 0, half), mono(1, b + 0.3, 0, half))) ==
            false);
      checked += 6;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("numeric evidence agrees with the oracle away from borderlines") {
  std::mt19937 rng(99);
  int checked = 0;
  for (bool sup : {true, false}) {
    for (int tries = 0; tries < 400 && checked < (sup ? 60 : 120); ++tries) {
      const Draw d = draw(rng, sup, -2, 2);
      const double qc = oracle::conj(d.q);
      const Interval half(0, kInf);
      // Exponential rates entering the decision must be clearly nonzero.
      const double r = d.q / (d.q - d.p);
      const double critical[] = {d.a, d.b, d.a - d.b,
                                 ((d.p - 1) * std::max(-d.b * qc, 0.0) + d.a * d.p) * r - d.b * qc};
      bool clear = true;
      for (double c : critical) clear &= std::abs(c) >= 0.25;
      if (!clear) continue;
      CAPTURE(d.p);
      CAPTURE(d.q);
      CAPTURE(d.a);
      CAPTURE(d.b);
      auto pr = problem(d.p, d.q, half, mono(1, 0, d.a, half).as_numeric().without_asymptotes(),
                        mono(1, 0, d.b, half).as_numeric().without_asymptotes());
      CHECK(tag_finite(pr, FinitenessMode::NumericEvidence) ==
            oracle::exp_half_line(d.p, d.q, d.a, d.b));
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("numeric evidence on power weights over [1, inf) away from borderlines") {
  std::mt19937 rng(5);
  int checked = 0;
  for (bool sup : {true, false}) {
    for (int tries = 0; tries < 600 && checked < (sup ? 30 : 60); ++tries) {
      const Draw d = draw(rng, sup, -3, 3);
      const double qc = oracle::conj(d.q), bq = d.b * qc;
      const double r = d.q / (d.q - d.p);
      const double critical[] = {d.a * d.p + 1, bq - 1, d.a + 1 / d.p - d.b + 1 / qc,
                                 ((d.p - 1) * (1 - bq) + d.a * d.p + 1) * r - bq + 1};
      bool clear = true;
      for (double c : critical) clear &= std::abs(c) >= 0.25;
      if (!clear) continue;
      CAPTURE(d.p);
      CAPTURE(d.q);
      CAPTURE(d.a);
      CAPTURE(d.b);
      const Interval one(1, kInf);
      auto pr = problem(d.p, d.q, one, mono(1, d.a, 0, one).without_asymptotes(),
                        mono(1, d.b, 0, one).without_asymptotes());
      CHECK(tag_finite(pr, FinitenessMode::NumericEvidence) ==
            oracle::power_from_one(d.p, d.q, d.a, d.b));
      ++checked;
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("homogeneity in the weight coefficients") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> co(0.1, 10);
  const Interval half(0, kInf), unit(0, 1);
  const HardyProblem bases[] = {
      problem(2, 2, half, mono(1, -1, 0, half), SymFun::constant(1, half)),
      problem(2, 4, half, mono(1, 0, -1, half), SymFun::constant(1, half)),
      problem(3, 2, unit, mono(1, 0.5, 0, unit), mono(1, -0.2, 0, unit)),
      problem(1.5, 2.5, unit, SymFun::parse("1 + t^2", unit), mono(1, 0.3, 0, unit)),
  };
  for (const auto& base : bases) {
    const double chi = hardy_constant(base).chi.value();
    for (int i = 0; i < 13; ++i) {
      const double c0 = co(rng), c1 = co(rng);
      HardyProblem scaled = base;
      scaled.v0 = base.v0.scaled(c0);
      scaled.v1 = base.v1.scaled(c1);
      CHECK(hardy_constant(scaled).chi.value() == doctest::Approx(c0 / c1 * chi).epsilon(1e-8));
    }
  }
}

TEST_CASE("profile samples stay below chi and extremal ratio dominates the profile") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ex(1.2, 4.0), u(0.02, 0.98);
  int pairs = 0;
  for (int i = 0; i < 25; ++i) {
    double p = ex(rng), q = ex(rng);
    if (p < q) std::swap(p, q);
    const Interval unit(0, 1);
    const double a = -0.9 / p * u(rng), b = 0.9 / oracle::conj(q) * u(rng);
    auto pr = problem(p, q, unit, mono(1 + u(rng), a, 0, unit), mono(1, b, 0.3, unit));
    auto res = hardy_constant(pr);
    REQUIRE(res.chi.is_finite());
    for (std::size_t j = 0; j < res.profile.size(); j += 37) {
      const double t = res.profile[j].first;
      CHECK(profile(pr, t).value() <= res.chi.value() + res.chi.error_bound());
    }
    for (int k = 0; k < 2; ++k) {
      const double t = u(rng);
      const double prof = profile(pr, t).value();
      CHECK(extremal_ratio(pr, t) >= prof - 1e-8);
      ++pairs;
    }
  }
  CHECK(pairs >= 50);
}

TEST_CASE("extremal ratio examples and degenerate input") {
  const Interval unit(0, 1), half(0, kInf);
  auto pr = problem(2, 2, unit, SymFun::constant(1, unit), SymFun::constant(1, unit));
  CHECK(extremal_ratio(pr, 0.5) >= 0.5);
  auto classical = problem(2, 2, half, mono(1, -1, 0, half), SymFun::constant(1, half));
  CHECK(extremal_ratio(classical, 1.0) >= 1.0 - 1e-8);
  CHECK_THROWS_AS(extremal_ratio(pr, 0.0), DegenerateTestFunction);
  auto lower = problem(2, 3, unit, SymFun::constant(1, unit), SymFun::constant(1, unit));
  CHECK_THROWS_AS(extremal_ratio(lower, 0.5), RegimeError);
}

TEST_CASE("reversed orientation equals forward with reflected weights") {
  const Interval unit(0, 1);
  const SymFun v0 = SymFun::parse("1 + t^2", unit), v1 = mono(1, 0.3, 0, unit);
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.5}, std::pair{1.5, 3.0}}) {
    CAPTURE(p);
    CAPTURE(q);
    auto rev = problem(p, q, unit.with_orientation(Orientation::Reversed), v0, v1);
    auto fwd = problem(p, q, unit, v0.reflected(), v1.reflected());
    const auto a = hardy_constant(rev), b = hardy_constant(fwd);
    REQUIRE(a.chi.is_finite());
    REQUIRE(b.chi.is_finite());
    CHECK(a.chi.value() == doctest::Approx(b.chi.value()).epsilon(1e-7));
  }
}

TEST_CASE("divergence witnesses") {
  const Interval one(1, kInf);
  auto unit_w = problem(2, 2, one, SymFun::constant(1, one), SymFun::constant(1, one));
  auto w = divergence_witness(unit_w);
  CHECK(w.s == -1);
  CHECK(w.m == 0);
  CHECK(w.rhs_integral == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(w.lhs_divergence_evidence.empty());

  auto heavy = problem(2, 2, one, SymFun::constant(1, one), mono(1, 1, 0, one));
  auto w2 = divergence_witness(heavy);
  CHECK(w2.s == -2);
  CHECK(w2.m == 0);

  const Interval half(0, kInf);
  auto classical = problem(2, 2, half, mono(1, -1, 0, half), SymFun::constant(1, half));
  CHECK_THROWS_AS(divergence_witness(classical), WitnessNotFound);
}
