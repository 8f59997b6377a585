#ifndef LPQ_CYLINDER_HPP
#define LPQ_CYLINDER_HPP

#include <optional>

#include "lpq/core.hpp"
#include "lpq/hardy.hpp"
#include "lpq/symfun.hpp"

namespace lpq {

/// Warped cylinder [a, b) x_f Y in degree j. The fiber enters only through its
/// dimension and the pairing hypothesis: some closed (j-1)-form that is both p-
/// and q-integrable on Y pairs nontrivially with a closed compactly supported
/// form.
struct CylinderSpec {
  SymFun warp;
  Interval interval;
  int fiber_dim = 1;
  int degree = 1;
  Exponents exps;
  bool fiber_pairing_nontrivial = false;
};

struct CylinderReport {
  SymFun weight0;  // f^(n/p - j + 1)
  SymFun weight1;  // f^(n/q - j + 1)
  double exponent0 = 0;
  double exponent1 = 0;
  std::optional<HardyResult> chi_forward, chi_backward;
  /// Cohomology relative to the fiber over a.
  Verdict hj_relative;
  Verdict torsion;
  bool hj_dim_infinite = false;
};

namespace rules {
inline constexpr const char* kCylinderRelative = "warped-cylinder:forward-hardy-infinite-gives-relative-hj";
inline constexpr const char* kCylinderTorsion = "warped-cylinder:both-hardy-infinite-gives-torsion";
inline constexpr const char* kCylinderNoConverse = "warped-cylinder:no-converse";
inline constexpr const char* kCylinderNoHypothesis = "warped-cylinder:pairing-hypothesis-not-asserted";
}  // namespace rules

/// Throws ValidationError for n < 1 or j outside [1, n+1], MultiTermPower for a
/// multi-term warp raised to a non-integer power.
std::pair<SymFun, SymFun> cylinder_weights(const CylinderSpec& spec);

/// Sufficient conditions only: a finite forward constant leaves both verdicts Unknown.
CylinderReport classify_cylinder(const CylinderSpec& spec, const Tolerances& tol = {});

}  // namespace lpq

#endif  // LPQ_CYLINDER_HPP
