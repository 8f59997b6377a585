#ifndef LPQ_HARDY_HPP
#define LPQ_HARDY_HPP

#include <string>
#include <utility>
#include <vector>

#include "lpq/core.hpp"
#include "lpq/quad.hpp"
#include "lpq/symfun.hpp"

namespace lpq {

/// Weighted Hardy problem on an interval. Forward orientation integrates the
/// test function from lo (alpha = lo, beta = hi); Reversed swaps the roles.
/// v0 and v1 must be defined on (a superset of) the interval.
struct HardyProblem {
  Exponents exps;
  Interval interval;
  SymFun v0;
  SymFun v1;
};

enum class Regime { SupForm, IntegralForm };
const char* to_string(Regime r);

/// Where the supremum of the profile is attained.
struct Argmax {
  enum class Kind { None, Interior, LeftLimit, RightLimit };
  Kind kind = Kind::None;
  double tau = 0;  // meaningful for Interior only
};
const char* to_string(Argmax::Kind k);

struct HardyResult {
  ExtendedValue chi = ExtendedValue::divergent();
  Regime regime = Regime::SupForm;
  /// (tau, profile value) grid samples; SupForm only, empty when the profile is
  /// infinite everywhere.
  std::vector<std::pair<double, double>> profile;
  Argmax argmax;
  IntegralResult::DecidedBy decided_by = IntegralResult::DecidedBy::Symbolic;
  /// Short explanation of the finiteness decision.
  std::string reason;
  /// Numeric evidence (cutoff, partial value) behind a heuristic decision.
  CutoffHistory evidence;
};

struct DivergenceWitness {
  SymFun h;
  /// Support of h; h vanishes outside it.
  Interval support;
  double s = 0;
  double m = 0;
  /// Endpoint the candidate concentrates at (lo or hi, may be +inf).
  double concentrated_at = 0;
  double rhs_integral = 0;
  CutoffHistory lhs_divergence_evidence;
};

/// Sup-form integrand A(tau)^(1/p) B(tau)^(1/q'). Divergent when either
/// factor is infinite. RegimeError if p < q; DomainError unless tau is interior.
ExtendedValue profile(const HardyProblem& problem, double tau, const Tolerances& tol = {});

/// The Hardy constant. Divergence is decided from the weights' asymptotics
/// (Auto, when available) or from numeric evidence.
HardyResult hardy_constant(const HardyProblem& problem, const Tolerances& tol = {},
                           FinitenessMode mode = FinitenessMode::Auto);

/// Grid over (s, m) for the witness search.
struct WitnessGrid {
  std::vector<double> m_values{0, -1, 1, -2};
  double s_max = 0;
  double s_min = -3;
  double s_step = 0.5;
};

/// Searches h = t^s (ln t)^m near +inf, or |t - e|^s (ln 1/|t - e|)^m near a
/// finite endpoint e. WitnessNotFound if chi is finite or no candidate verifies.
DivergenceWitness divergence_witness(const HardyProblem& problem, const Tolerances& tol = {},
                                     const WitnessGrid& grid = {});

/// LHS/RHS of the Hardy inequality for g = v1^(-q') on the part of the
/// interval between alpha and tau. Lower-bounds the best constant.
/// DegenerateTestFunction if that test function is zero or not integrable.
double extremal_ratio(const HardyProblem& problem, double tau, const Tolerances& tol = {});

}  // namespace lpq

#endif  // LPQ_HARDY_HPP
