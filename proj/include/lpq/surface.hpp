#ifndef LPQ_SURFACE_HPP
#define LPQ_SURFACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "lpq/core.hpp"
#include "lpq/hardy.hpp"
#include "lpq/symfun.hpp"

namespace lpq {

/// Surface of revolution f(x1)^2 = x2^2 + ... + x_{n+2}^2, x1 >= 0: the warped
/// product [0, inf) x S^n in the x1-parametrization. The profile must be
/// defined on [0, inf) and have a derivative (symbolic, or a numeric callback)
/// that stays bounded at 0.
struct SurfaceSpec {
  SymFun profile;
  int fiber_dim = 1;
  int degree = 1;
  Exponents exps;
};

/// Throws ValidationError / MissingDerivative for specs outside the contract.
void validate(const SurfaceSpec& spec);

/// 1/q - 1/p < 1/(n+1), the standing hypothesis of the surface results.
bool hypothesis_holds(const SurfaceSpec& spec);

/// Which Hardy constant of the profile weights F^(n/p-k), F^(n/q-k), k = j-1.
///  AtInfinity: chi^0 = chi(0, inf), test functions pinned at 0.
///  AtZero:     chi^inf = chi(inf, 0), test functions pinned at infinity.
enum class Direction { AtInfinity, AtZero };
const char* to_string(Direction d);

enum class FLimit { Zero, FinitePositive, Infinite, Unknown };
const char* to_string(FLimit l);

struct SurfaceReport {
  bool hypothesis = false;
  std::optional<HardyResult> chi0, chi_inf;
  std::optional<ExtendedValue> volume;
  FLimit f_limit = FLimit::Unknown;
  /// Rule ids of the shortcuts and consequences that fired.
  std::vector<std::string> fired_rules;
  /// Degrees 1 and n+1 only; Unknown with a scope note otherwise.
  Verdict torsion_j;
  Verdict torsion_all_degrees;
};

namespace rules {
inline constexpr const char* kChiZeroForced = "surface:chi0-infinite-when-n-over-p-at-most-k";
inline constexpr const char* kChiInfForced = "surface:chi-inf-infinite-when-n-over-q-at-least-k";
inline constexpr const char* kFiniteChiForcesDecay = "surface:finite-hardy-forces-profile-to-zero";
inline constexpr const char* kTorsionNecessary = "surface:zero-torsion-needs-decay-and-finite-volume";
inline constexpr const char* kTorsionUnbounded = "surface:unbounded-profile-gives-torsion-all-degrees";
inline constexpr const char* kNoSufficiency = "surface:no-sufficiency";
inline constexpr const char* kHypothesisFails = "surface:hypothesis-not-satisfied";
inline constexpr const char* kDegreeScope = "surface:degree-outside-1-and-n-plus-1";
}  // namespace rules

/// sqrt(1 + f'^2) on [0, inf) with endpoint asymptotics taken from f'.
SymFun arc_length_density(const SurfaceSpec& spec);

/// G(x) = integral over [0, x] of sqrt(1 + f'^2).
double arc_length(const SurfaceSpec& spec, double x, const Tolerances& tol = {});

/// H(s) with G(H(s)) = s, by bracket doubling and TOMS 748. BracketFailure
/// when s is not reached within max_doublings doublings.
double arc_length_inverse(const SurfaceSpec& spec, double s, const Tolerances& tol = {});

/// Tabulated G on a uniform grid with smooth lookups (one short quadrature
/// from the nearest node) and Newton-refined inverse. Used to build the
/// arc-length parametrized profile.
class ArcLengthTable {
public:
  explicit ArcLengthTable(const SurfaceSpec& spec, const Tolerances& tol = {});

  double G(double x) const;
  double H(double s) const;
  /// lim G(x) - x when f' -> 0 square-integrably, else nullopt.
  std::optional<double> offset_at_infinity() const { return offset_; }

private:
  SymFun density_;
  Tolerances tol_;
  double step_;
  std::vector<double> cumulative_;
  std::optional<double> offset_;

  double from_node(std::size_t i, double x) const;
};

/// F = f o H on [0, inf), with declared asymptotics when they follow from f's.
SymFun arc_length_profile(const SurfaceSpec& spec, const Tolerances& tol = {});

/// Hardy problem for chi^0 / chi^inf in the x-parametrization: weights
/// f^(n/p-k) w^(1/p) and f^(n/q-k) w^(-1/q'), w = sqrt(1 + f'^2).
HardyProblem surface_hardy_problem(const SurfaceSpec& spec, Direction d);
/// Same constant in the arc-length parametrization: weights F^(n/p-k), F^(n/q-k).
HardyProblem arc_length_hardy_problem(const SurfaceSpec& spec, Direction d, const Tolerances& tol = {});

HardyResult chi_surface(const SurfaceSpec& spec, Direction d, const Tolerances& tol = {});

/// s_n times the integral of f^n sqrt(1 + f'^2) over [0, inf).
ExtendedValue surface_volume(const SurfaceSpec& spec, const Tolerances& tol = {});

/// Limit class of f at infinity from its leading term.
FLimit profile_limit(const SurfaceSpec& spec);

/// Throws InconsistencyError if a finite constant comes with a profile that
/// does not tend to zero.
SurfaceReport classify_surface(const SurfaceSpec& spec, const Tolerances& tol = {});

/// (1 + t)^alpha on [0, inf) with derivative and asymptotics, for sweeps.
SymFun power_law_profile(double alpha);

}  // namespace lpq

#endif  // LPQ_SURFACE_HPP
