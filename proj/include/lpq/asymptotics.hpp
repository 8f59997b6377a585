#ifndef LPQ_ASYMPTOTICS_HPP
#define LPQ_ASYMPTOTICS_HPP

#include <string>

namespace lpq {

/// Exponent comparisons treat |x| < kExponentEps as zero.
inline constexpr double kExponentEps = 1e-9;

// Asymptotic scale u^alpha (ln u)^gamma (ln ln u)^eta e^{delta u} as u -> inf.
//
// Every endpoint is analysed in a local variable u that tends to +inf:
// u = t at t -> +inf, u = 1/|t - e| at a finite endpoint e. The class is closed
// under products, real powers and integration of the kind needed by the Hardy
// functional (one extra iterated logarithm, eta, covers the borderline
// integral of 1/(u ln u)).
struct Scale {
  double delta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double eta = 0.0;

  bool is_constant() const;
  friend Scale operator*(const Scale& a, const Scale& b) {
    return {a.delta + b.delta, a.alpha + b.alpha, a.gamma + b.gamma, a.eta + b.eta};
  }
};

Scale pow(const Scale& s, double exponent);

/// -1 if the scale tends to 0, 0 if it is bounded away from 0 and inf, +1 if it tends to inf.
int trend(const Scale& s);

/// Whether int^inf of the scale du converges (lexicographically below (0,-1,-1,-1)).
bool integrable(const Scale& integrand_du);

enum class EndpointKind { Finite, Infinite };

/// Leading term c * scale of a positive function near an endpoint (ratio -> 1).
struct LeadingTerm {
  double coeff = 1.0;
  Scale scale;

  friend LeadingTerm operator*(const LeadingTerm& a, const LeadingTerm& b) {
    return {a.coeff * b.coeff, a.scale * b.scale};
  }
};

LeadingTerm pow(const LeadingTerm& t, double exponent);

/// Attach the dt measure: dt = du at infinity, |dt| = u^{-2} du at a finite endpoint.
LeadingTerm with_measure(const LeadingTerm& integrand, EndpointKind kind);

/// Leading term of U -> int_U^inf g du (g integrable) or of U -> int^U g du
/// (g not integrable). Throws DomainError when the result would leave the
/// scale class (a triple-log head integral).
LeadingTerm integral_leading_term(const LeadingTerm& integrand_du);

/// Limit of a leading term: 0, coeff or +inf.
double limit_value(const LeadingTerm& t);

std::string describe(const Scale& s);

}  // namespace lpq

#endif  // LPQ_ASYMPTOTICS_HPP
