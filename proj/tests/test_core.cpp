#include <doctest.h>

#include <cmath>
#include <random>

#include "lpq/core.hpp"

using namespace lpq;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("make_exponents examples") {
  auto e = make_exponents(2, 2);
  CHECK(e.p() == 2);
  CHECK(e.q() == 2);
  CHECK(e.p_conj() == doctest::Approx(2));
  CHECK(e.q_conj() == doctest::Approx(2));
  CHECK(make_exponents(3, 3).q_conj() == doctest::Approx(1.5));
  CHECK(make_exponents(2, 4.0 / 3).q_conj() == doctest::Approx(4));
}

TEST_CASE("make_exponents rejects out-of-scope exponents") {
  CHECK_THROWS_AS(make_exponents(1, 2), OutOfScope);
  CHECK_THROWS_AS(make_exponents(2, 1), OutOfScope);
  CHECK_THROWS_AS(make_exponents(0.5, 2), OutOfScope);
  CHECK_THROWS_AS(make_exponents(kInf, 2), OutOfScope);
  CHECK_THROWS_AS(make_exponents(2, kInf), OutOfScope);
  CHECK_THROWS_AS(make_exponents(std::nan(""), 2), OutOfScope);
}

TEST_CASE("conjugate identities and round trip") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(1.01, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double p = d(rng), q = d(rng);
    CAPTURE(p);
    CAPTURE(q);
    const auto e = make_exponents(p, q);
    CHECK(std::abs(1 / e.p() + 1 / e.p_conj() - 1) <= 1e-14);
    CHECK(std::abs(1 / e.q() + 1 / e.q_conj() - 1) <= 1e-14);
    const auto back = make_exponents(e.p_conj(), q);
    CHECK(back.p_conj() == doctest::Approx(p).epsilon(1e-8));
  }
}

TEST_CASE("interval invariants") {
  const Interval iv(0, kInf);
  CHECK(iv.infinite());
  CHECK(iv.orientation() == Orientation::Forward);
  CHECK(iv.reversed().orientation() == Orientation::Reversed);
  CHECK(iv.reversed().reversed() == iv);
  CHECK(iv.contains_interior(5));
  CHECK_FALSE(iv.contains_interior(0));
  CHECK_THROWS_AS(Interval(1, 1), DomainError);
  CHECK_THROWS_AS(Interval(2, 1), DomainError);
  CHECK_THROWS_AS(Interval(-kInf, 1), DomainError);
  CHECK_THROWS_AS(Interval(0, -kInf), DomainError);
}

TEST_CASE("extended values") {
  auto f = ExtendedValue::finite(0.5, 1e-9);
  CHECK(f.is_finite());
  CHECK(f.value() == 0.5);
  CHECK(f.error_bound() == 1e-9);
  CHECK(f.as_double() == 0.5);
  auto d = ExtendedValue::divergent();
  CHECK(d.is_divergent());
  CHECK(d.as_double() == kInf);
  CHECK_THROWS_AS(d.value(), std::logic_error);
  CHECK_THROWS(ExtendedValue::finite(-1));
  CHECK_THROWS(ExtendedValue::finite(1, -1));
  CHECK(describe(d) == "Divergent");
  CHECK(describe(f) == "0.5");
}

TEST_CASE("verdict helpers") {
  auto v = Verdict::nontrivial("rule-a").with("k", "v");
  CHECK(v.status == Status::Nontrivial);
  CHECK(v.rule == "rule-a");
  REQUIRE(v.evidence.size() == 1);
  CHECK(v.evidence[0].first == "k");
  CHECK(std::string(to_string(Status::Unknown)) == "Unknown");
}

TEST_CASE("tolerances validation") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.max_doublings = 7;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = {};
  t.rel_tol = 0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = {};
  t.abs_tol = -1;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}

TEST_CASE("sphere volumes") {
  CHECK(sphere_volume(1) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(sphere_volume(2) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(19.73920880).epsilon(1e-9));
  for (int n = 3; n <= 30; ++n) {
    CAPTURE(n);
    CHECK(sphere_volume(n) == doctest::Approx(2 * kPi * sphere_volume(n - 2) / (n - 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sphere_volume(0), DomainError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3) == "0.333333333333");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
}
