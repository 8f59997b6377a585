#include "lpq/core.hpp"

#include <cstdio>
#include <numbers>

namespace lpq {

Exponents make_exponents(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q))
    throw OutOfScope("exponents must be finite (the ess-sup case p or q = inf is not supported)");
  if (p <= 1.0 || q <= 1.0)
    throw OutOfScope("exponents must satisfy 1 < p, q < inf (got p=" + format_number(p) +
                     ", q=" + format_number(q) + ")");
  return Exponents(p, q);
}

Interval::Interval(double lo, double hi, Orientation orientation)
    : lo_(lo), hi_(hi), orientation_(orientation) {
  if (!std::isfinite(lo)) throw DomainError("interval: lower endpoint must be finite");
  if (std::isnan(hi) || (std::isinf(hi) && hi < 0)) throw DomainError("interval: bad upper endpoint");
  if (!(lo < hi)) throw DomainError("interval: need lo < hi");
}

Interval Interval::reversed() const {
  return Interval(lo_, hi_,
                  orientation_ == Orientation::Forward ? Orientation::Reversed : Orientation::Forward);
}

ExtendedValue ExtendedValue::finite(double value, double error_bound) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::invalid_argument("ExtendedValue: finite value must be a nonnegative real");
  if (!(error_bound >= 0.0)) throw std::invalid_argument("ExtendedValue: negative error bound");
  return ExtendedValue(Tag::Finite, value, error_bound);
}

double ExtendedValue::value() const {
  if (!is_finite()) throw std::logic_error("ExtendedValue: value of a divergent quantity");
  return value_;
}

double ExtendedValue::error_bound() const {
  if (!is_finite()) throw std::logic_error("ExtendedValue: error bound of a divergent quantity");
  return error_;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Trivial: return "Trivial";
    case Status::Nontrivial: return "Nontrivial";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(ExtendedValue::Tag t) {
  return t == ExtendedValue::Tag::Finite ? "Finite" : "Divergent";
}

const char* to_string(Orientation o) { return o == Orientation::Forward ? "forward" : "reversed"; }

void Tolerances::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(divergence_growth > 0))
    throw ValidationError("tolerances must be strictly positive");
  if (max_doublings < 8) throw ValidationError("max_doublings must be at least 8");
  if (sup_grid_points < 3) throw ValidationError("sup_grid_points must be at least 3");
}

double sphere_volume(int n) {
  if (n < 1) throw DomainError("sphere_volume: n must be >= 1");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string describe(const ExtendedValue& v) {
  return v.is_finite() ? format_number(v.value()) : "Divergent";
}

}  // namespace lpq
