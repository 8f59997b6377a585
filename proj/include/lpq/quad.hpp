#ifndef LPQ_QUAD_HPP
#define LPQ_QUAD_HPP

#include "lpq/core.hpp"
#include "lpq/symfun.hpp"

namespace lpq {

/// How finiteness of an improper integral is decided.
///  Auto: exact decision from asymptotics when the integrand has them, numeric
///        evidence otherwise.
///  NumericEvidence: always the cutoff-doubling heuristic (used to cross-check).
enum class FinitenessMode { Auto, NumericEvidence };

struct IntegralResult {
  enum class DecidedBy { Symbolic, NumericEvidence };

  ExtendedValue outcome = ExtendedValue::divergent();
  long evaluations = 0;
  /// (cutoff, partial value) pairs from the endpoint approach sequences.
  CutoffHistory cutoff_history;
  DecidedBy decided_by = DecidedBy::Symbolic;
  /// False when a NumericEvidence-mode Finite result stopped short of rel_tol.
  bool tolerance_met = true;
};

/// Integral of f over `interval` (a sub-interval of f's domain; orientation is
/// ignored). Endpoints shared with f's domain use f's declared asymptotics;
/// other endpoints are interior points and hence regular.
/// Throws TolFailure if a convergent integral cannot be resolved to tolerance.
IntegralResult improper_integral(const SymFun& f, const Interval& interval, const Tolerances& tol,
                                 FinitenessMode mode = FinitenessMode::Auto);

struct PartialIntegral {
  double value = 0;
  double error = 0;
  long evaluations = 0;
};

/// Adaptive Gauss-Kronrod integral over a finite [lo, hi] inside f's domain.
/// Integrable endpoint singularities at domain endpoints are removed by the
/// substitution t = a + u^m.
PartialIntegral partial_integral_detailed(const SymFun& f, double lo, double hi,
                                          const Tolerances& tol);

inline double partial_integral(const SymFun& f, double lo, double hi, const Tolerances& tol) {
  return partial_integral_detailed(f, lo, hi, tol).value;
}

/// Plain adaptive rule on a finite panel for an arbitrary callable.
PartialIntegral integrate_panel(const std::function<double(double)>& g, double a, double b,
                                const Tolerances& tol);

/// Running integral of w from one endpoint of `interval`, tabulated on a
/// sorted mesh of interior points. Lookups add one partial panel to the
/// nearest tabulated value; points beyond the mesh fall back to a direct
/// improper integral.
class CumulativeIntegral {
public:
  CumulativeIntegral(const SymFun& w, const Interval& interval, EndpointSide anchor,
                     std::vector<double> mesh, const Tolerances& tol,
                     FinitenessMode mode = FinitenessMode::Auto);

  /// Integral between the anchor endpoint and tau; +inf if it diverges.
  double at(double tau) const;
  /// Total over the whole interval (+inf if divergent); computed on first use.
  double total() const;
  bool anchor_divergent() const noexcept { return divergent_; }
  const std::vector<double>& mesh() const noexcept { return mesh_; }
  const std::vector<double>& values() const noexcept { return values_; }

private:
  SymFun w_;
  Interval iv_;
  EndpointSide anchor_;
  std::vector<double> mesh_, values_;
  Tolerances tol_;
  FinitenessMode mode_;
  bool divergent_ = false;
  mutable std::optional<double> total_;

  double direct(double a, double b) const;
  double panel(double a, double b) const;
};

}  // namespace lpq

#endif  // LPQ_QUAD_HPP
