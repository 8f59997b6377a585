#ifndef LPQ_SYMFUN_HPP
#define LPQ_SYMFUN_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpq/asymptotics.hpp"
#include "lpq/core.hpp"

namespace lpq {

/// c * t^alpha * (ln t)^gamma * exp(delta * t), c > 0.
///
/// When used to *declare* the behaviour of a numeric function near a finite
/// endpoint e, the same fields read as c * |t - e|^alpha * (ln 1/|t - e|)^gamma.
struct AsymptoticMonomial {
  double coeff = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  double evaluate(double t) const;
  friend bool operator==(const AsymptoticMonomial&, const AsymptoticMonomial&) = default;
};

enum class EndpointSide { Left, Right };

/// Leading term declared at infinity, in the local variable u = t.
LeadingTerm leading_at_infinity(const AsymptoticMonomial& m);
/// Leading term declared near a finite endpoint, in the local variable u = 1/|t - e|.
LeadingTerm leading_near_point(const AsymptoticMonomial& m);
/// Inverse of the two conversions above.
AsymptoticMonomial monomial_of(const LeadingTerm& t, EndpointKind kind);

/// A real-valued (possibly signed) function together with the leading terms of
/// its absolute value at both endpoints. Derivatives are represented this way.
struct SignedFunction {
  std::function<double(double)> eval;
  std::optional<LeadingTerm> abs_left;
  std::optional<LeadingTerm> abs_right;

  double operator()(double t) const { return eval(t); }
};

/// Positive function on an interval: either a finite sum of asymptotic
/// monomials (Symbolic) or a callback with optionally declared endpoint
/// asymptotics. Copies share the immutable callback state.
class SymFun {
public:
  enum class Kind { Symbolic, NumericWithDeclaredAsymptotics };

  /// Throws ValidationError on non-positive coefficients or a term that is not
  /// positive on the interior of `domain` (powers of t need lo >= 0, powers of
  /// ln t need lo >= 1).
  static SymFun symbolic(std::vector<AsymptoticMonomial> terms, Interval domain);
  static SymFun constant(double c, Interval domain);
  /// Leading terms are given in the local endpoint variable (see asymptotics.hpp);
  /// leave them empty when unknown, which routes decisions to numeric evidence.
  static SymFun numeric(std::function<double(double)> eval, Interval domain,
                        std::optional<LeadingTerm> left, std::optional<LeadingTerm> right,
                        std::optional<SignedFunction> derivative = std::nullopt);
  /// Parses `c * t^a * (ln t)^g * exp(d*t) + ...`.
  static SymFun parse(std::string_view text, Interval domain);

  Kind kind() const noexcept { return kind_; }
  bool is_symbolic() const noexcept { return kind_ == Kind::Symbolic; }
  const std::vector<AsymptoticMonomial>& terms() const noexcept { return terms_; }
  const Interval& domain() const noexcept { return domain_; }

  /// Unchecked evaluation, usable inside integrands.
  double operator()(double t) const;

  /// Leading term at an endpoint in its local variable; nullopt if undeclared.
  std::optional<LeadingTerm> asymptote(EndpointSide side) const;
  bool has_asymptotes() const noexcept { return left_.has_value() && right_.has_value(); }
  EndpointKind endpoint_kind(EndpointSide side) const noexcept;

  /// Canonical textual form (symbolic only; numeric functions render as "<numeric>").
  std::string to_string() const;

  SymFun scaled(double c) const;
  /// Pointwise product; symbolic * symbolic stays symbolic. Domains must match.
  SymFun times(const SymFun& other) const;
  /// g(t) = f(lo + hi - t) on the same (finite) domain, endpoint behaviour swapped.
  SymFun reflected() const;
  /// Same function, forgotten as symbolic. Drops nothing but the term list.
  SymFun as_numeric() const;
  /// Same function on a sub-interval.
  SymFun restricted(const Interval& sub) const;
  /// Drop declared asymptotics (forces heuristic decisions).
  SymFun without_asymptotes() const;

  const std::optional<SignedFunction>& derivative_callback() const noexcept { return derivative_; }

private:
  SymFun() : domain_(0.0, 1.0) {}
  Kind kind_ = Kind::Symbolic;
  std::vector<AsymptoticMonomial> terms_;
  Interval domain_;
  std::shared_ptr<const std::function<double(double)>> eval_;
  std::optional<LeadingTerm> left_, right_;
  std::optional<SignedFunction> derivative_;

  void compute_symbolic_asymptotes();
};

struct ConvergenceDecision {
  enum class Tag { Converges, Diverges };
  Tag tag;
  AsymptoticMonomial dominant_term;
  std::string reason;
};

/// Checked evaluation on the closed domain; DomainError outside it or if the
/// value is not finite and positive there.
double evaluate(const SymFun& f, double t);

/// f' with termwise asymptotics; MissingDerivative for numeric functions without a callback.
SignedFunction derivative(const SymFun& f);

/// Pointwise s-th power. MultiTermPower for a symbolic sum unless s is a
/// nonnegative integer.
SymFun power(const SymFun& f, double s);

/// Exact convergence of int f near an endpoint, from the dominant term.
/// Numeric functions need declared asymptotics (std::invalid_argument otherwise).
ConvergenceDecision integral_converges(const SymFun& f, EndpointSide at);

const char* to_string(ConvergenceDecision::Tag t);

/// Shortest decimal rendering that parses back to the same double.
std::string exact_number(double x);

}  // namespace lpq

#endif  // LPQ_SYMFUN_HPP
