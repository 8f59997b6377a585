#ifndef LPQ_INTERVAL_COHOM_HPP
#define LPQ_INTERVAL_COHOM_HPP

#include <optional>

#include "lpq/core.hpp"
#include "lpq/hardy.hpp"

namespace lpq {

// Triviality of the first L_{p,q}-cohomology of a half-interval [a, b) with
// weights v0 (on 0-forms) and v1 (on 1-forms). "Relative" means relative to
// the endpoint a. The problem's orientation is ignored: the forward constant
// chi(a, b) and the backward constant chi(b, a) are both computed.

struct H1Verdicts {
  Verdict relative;
  Verdict absolute;
};

struct ReducedVerdicts {
  Verdict absolute;
  Verdict relative;
  /// Set when the relative reduced space is nonzero; it is then one-dimensional.
  bool relative_dim_one = false;
};

struct TorsionVerdicts {
  Verdict absolute;
  Verdict relative;
};

struct IntervalReport {
  Verdict h1_relative, h1_absolute;
  Verdict h1bar_absolute, h1bar_relative;
  Verdict torsion_absolute, torsion_relative;
  bool relative_dim_one = false;
  /// Empty when the computation failed; the failure is recorded in the verdicts.
  std::optional<HardyResult> chi_forward, chi_backward;
  /// Integrals of v1^(-q') and v0^p over [a, b).
  std::optional<ExtendedValue> v1_conj_integral, v0_p_integral;
};

namespace rules {
inline constexpr const char* kRelativeH1 = "half-interval:relative-h1-iff-forward-hardy-finite";
inline constexpr const char* kAbsoluteH1 = "half-interval:absolute-h1-iff-some-hardy-finite";
inline constexpr const char* kAbsoluteReduced = "half-interval:absolute-reduced-h1-vanishes";
inline constexpr const char* kRelativeReduced = "half-interval:relative-reduced-h1-integral-test";
inline constexpr const char* kRelativeReducedDim = "half-interval:relative-reduced-h1-one-dimensional";
inline constexpr const char* kAbsoluteTorsion = "half-interval:absolute-torsion-equals-h1";
inline constexpr const char* kRelativeTorsion = "half-interval:relative-torsion-from-h1-and-reduced";
}  // namespace rules

H1Verdicts classify_h1(const HardyProblem& problem, const Tolerances& tol = {});
ReducedVerdicts classify_reduced(const HardyProblem& problem, const Tolerances& tol = {});
TorsionVerdicts classify_torsion(const HardyProblem& problem, const Tolerances& tol = {});

/// All six verdicts plus the quantities they were decided from.
IntervalReport classify_interval(const HardyProblem& problem, const Tolerances& tol = {});

}  // namespace lpq

#endif  // LPQ_INTERVAL_COHOM_HPP
