#ifndef LPQ_CORE_HPP
#define LPQ_CORE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. Every failure mode the library reports is a distinct type so
// callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OutOfScope : public Error {
public:
  using Error::Error;
};
class DomainError : public Error {
public:
  using Error::Error;
};
class ValidationError : public Error {
public:
  using Error::Error;
};
class MissingDerivative : public Error {
public:
  using Error::Error;
};
class MultiTermPower : public Error {
public:
  using Error::Error;
};
class RegimeError : public Error {
public:
  using Error::Error;
};
class WitnessNotFound : public Error {
public:
  using Error::Error;
};
class DegenerateTestFunction : public Error {
public:
  using Error::Error;
};
class BracketFailure : public Error {
public:
  using Error::Error;
};
class InconsistencyError : public Error {
public:
  using Error::Error;
};

/// (cutoff, partial value) pairs recorded while pushing an integral toward an endpoint.
using CutoffHistory = std::vector<std::pair<double, double>>;

/// Adaptive refinement could not reach the requested tolerance.
class TolFailure : public Error {
public:
  TolFailure(const std::string& what, CutoffHistory evidence = {})
      : Error(what), evidence_(std::move(evidence)) {}
  const CutoffHistory& evidence() const noexcept { return evidence_; }

private:
  CutoffHistory evidence_;
};

/// Validated exponent pair 1 < p, q < inf with conjugates.
class Exponents {
public:
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double p_conj() const noexcept { return p_conj_; }
  double q_conj() const noexcept { return q_conj_; }

  friend Exponents make_exponents(double p, double q);

private:
  Exponents(double p, double q)
      : p_(p), q_(q), p_conj_(p / (p - 1.0)), q_conj_(q / (q - 1.0)) {}
  double p_, q_, p_conj_, q_conj_;
};

/// Rejects p <= 1, q <= 1, non-finite input (the ess-sup variant is not supported).
Exponents make_exponents(double p, double q);

enum class Orientation { Forward, Reversed };

/// Interval with finite lo and lo < hi <= +inf. Reversed means the Hardy
/// functional is taken from hi to lo.
class Interval {
public:
  Interval(double lo, double hi, Orientation orientation = Orientation::Forward);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  Orientation orientation() const noexcept { return orientation_; }
  bool infinite() const noexcept { return std::isinf(hi_); }
  bool contains_interior(double t) const noexcept { return t > lo_ && t < hi_; }
  Interval reversed() const;
  Interval with_orientation(Orientation o) const { return Interval(lo_, hi_, o); }

  friend bool operator==(const Interval&, const Interval&) = default;

private:
  double lo_, hi_;
  Orientation orientation_;
};

/// Finite nonnegative value with error bound, or Divergent (+inf).
class ExtendedValue {
public:
  enum class Tag { Finite, Divergent };

  static ExtendedValue finite(double value, double error_bound = 0.0);
  static ExtendedValue divergent() { return ExtendedValue(Tag::Divergent, 0.0, 0.0); }

  Tag tag() const noexcept { return tag_; }
  bool is_finite() const noexcept { return tag_ == Tag::Finite; }
  bool is_divergent() const noexcept { return tag_ == Tag::Divergent; }
  /// Throws std::logic_error when Divergent.
  double value() const;
  double error_bound() const;
  /// +inf for Divergent.
  double as_double() const noexcept { return is_finite() ? value_ : kInf; }

private:
  ExtendedValue(Tag t, double v, double e) : tag_(t), value_(v), error_(e) {}
  Tag tag_;
  double value_;
  double error_;
};

enum class Status { Trivial, Nontrivial, Unknown };

const char* to_string(Status s);
const char* to_string(ExtendedValue::Tag t);
const char* to_string(Orientation o);

/// Classification result. `rule` names the decision rule applied; `evidence`
/// echoes the quantities the rule consumed.
struct Verdict {
  Status status = Status::Unknown;
  std::string rule;
  std::vector<std::pair<std::string, std::string>> evidence;

  static Verdict trivial(std::string rule) { return {Status::Trivial, std::move(rule), {}}; }
  static Verdict nontrivial(std::string rule) { return {Status::Nontrivial, std::move(rule), {}}; }
  static Verdict unknown(std::string rule) { return {Status::Unknown, std::move(rule), {}}; }

  Verdict& with(std::string key, std::string value) {
    evidence.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

struct Tolerances {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_doublings = 40;
  double divergence_growth = 1e6;
  int sup_grid_points = 256;

  /// Throws ValidationError if a field is out of range.
  void validate() const;
};

/// Surface measure of the unit n-sphere in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

/// Fixed 12-significant-digit rendering used in reports.
std::string format_number(double x);

/// "Divergent" or the formatted value.
std::string describe(const ExtendedValue& v);

}  // namespace lpq

#endif  // LPQ_CORE_HPP
