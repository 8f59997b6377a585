#ifndef LPQ_HARDY_DETAIL_HPP
#define LPQ_HARDY_DETAIL_HPP

// Shared between the Hardy constant, witness search and extremal ratio.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpq/hardy.hpp"

namespace lpq::detail {

/// Problem with the weights raised to their Hardy powers: w0 = v0^p, w1 = v1^(-q').
struct Setup {
  double p, q, qc;
  Interval iv;  // forward-normalized
  bool forward;
  SymFun w0, w1;

  EndpointSide alpha_side() const { return forward ? EndpointSide::Left : EndpointSide::Right; }
  EndpointSide beta_side() const { return forward ? EndpointSide::Right : EndpointSide::Left; }
};

/// Power that falls back to a numeric function for real powers of sums.
SymFun safe_power(const SymFun& f, double s);
Setup make_setup(const HardyProblem& pr);

double side_point(const Interval& iv, EndpointSide side);

/// Log-type coordinate: logistic on finite intervals, lo + L e^z on [lo, inf).
double tau_of_z(const Interval& iv, double z);

struct Mesh {
  std::vector<double> z, tau;
};
Mesh make_mesh(const Interval& iv, int n, double zlo, double zhi);

struct EndFiniteness {
  bool finite;
  bool exact;
  CutoffHistory evidence;
};
/// Whether w is integrable at one end of iv.
EndFiniteness end_integrable(const SymFun& w, EndpointSide side, const Interval& iv,
                             const Tolerances& tol, FinitenessMode mode);

/// Leading term of the integral of w taken toward `side` (a convergent tail).
std::optional<LeadingTerm> toward_term(const SymFun& w, EndpointSide side);
/// Leading term, as tau approaches `side`, of the integral from the other end.
std::optional<LeadingTerm> away_term(const SymFun& w, EndpointSide side,
                                     const CumulativeIntegral& cum);
/// Leading terms of (A, B) at an endpoint; nullopt if asymptotics are missing.
std::optional<std::pair<LeadingTerm, LeadingTerm>> factor_terms(const Setup& s, EndpointSide side,
                                                                const CumulativeIntegral& A,
                                                                const CumulativeIntegral& B);

std::string end_name(const Interval& iv, EndpointSide side);

}  // namespace lpq::detail

#endif  // LPQ_HARDY_DETAIL_HPP
