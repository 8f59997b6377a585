// Divergence witnesses and the extremal test-function ratio.

#include <cmath>
#include <memory>

#include "hardy_detail.hpp"
#include "lpq/hardy.hpp"

namespace lpq {

using namespace detail;

namespace {

constexpr int kSupportMeshPoints = 241;
constexpr double kSupportMeshZ = 30.0;
// Leading term standing for "identically zero near the endpoint".
const LeadingTerm kZeroNear{0.0, Scale{-1.0, 0, 0, 0}};

struct Candidate {
  SymFun h;
  Interval support;
  double at;
};

std::optional<Candidate> make_candidate(const Interval& iv, EndpointSide side, double s, double m) {
  if (side == EndpointSide::Right && iv.infinite()) {
    const double c = m == 0 ? (iv.lo() > 0 ? iv.lo() : 1.0) : std::max(iv.lo(), std::exp(1.0));
    const Interval sup(c, kInf);
    return Candidate{SymFun::symbolic({{1.0, s, m, 0.0}}, sup), sup, kInf};
  }
  const double e = side_point(iv, side);
  const double d = std::min(0.5, 0.5 * (iv.hi() - iv.lo()));
  const bool left = side == EndpointSide::Left;
  const Interval sup = left ? Interval(e, e + d) : Interval(e - d, e);
  if (left && e == 0.0 && m == 0.0) return Candidate{SymFun::symbolic({{1.0, s, 0, 0}}, sup), sup, e};
  auto eval = [e, s, m](double t) {
    const double x = std::abs(t - e);
    return std::pow(x, s) * (m == 0 ? 1.0 : std::pow(-std::log(x), m));
  };
  const LeadingTerm near{1.0, Scale{0.0, -s, m, 0.0}};
  const LeadingTerm far{eval(left ? sup.hi() : sup.lo()), Scale{}};
  return Candidate{SymFun::numeric(eval, sup, left ? std::optional(near) : std::optional(far),
                                   left ? std::optional(far) : std::optional(near)),
                   sup, e};
}

std::optional<DivergenceWitness> verify(const Setup& st, const SymFun& v1, const Candidate& c,
                                        double s, double m, const Tolerances& tol) {
  // RHS: integral of v1^q h^q over the support must converge.
  const SymFun rhs_integrand = safe_power(v1.restricted(c.support), st.q).times(safe_power(c.h, st.q));
  const IntegralResult rhs = improper_integral(rhs_integrand, c.support, tol);
  if (rhs.outcome.is_divergent()) return std::nullopt;

  // H(tau) = integral of h between alpha and tau; must be finite inside.
  const EndpointSide a_side = st.alpha_side();
  const Mesh mesh = make_mesh(c.support, kSupportMeshPoints, -kSupportMeshZ, kSupportMeshZ);
  auto H = std::make_shared<const CumulativeIntegral>(c.h, c.support, a_side, mesh.tau, tol);
  if (H->anchor_divergent()) return std::nullopt;

  const Interval sup = c.support;
  const bool fwd = st.forward;
  auto H_at = [H, sup, fwd](double t) {
    if (t >= sup.lo() && t <= sup.hi()) return H->at(t);
    const bool before_alpha_side = fwd ? t < sup.lo() : t > sup.hi();
    return before_alpha_side ? 0.0 : H->total();
  };

  std::optional<LeadingTerm> G_lt[2];
  for (EndpointSide x : {EndpointSide::Left, EndpointSide::Right}) {
    const double xp = side_point(st.iv, x);
    const bool in_support = xp == side_point(sup, x);
    std::optional<LeadingTerm> H_lt;
    if (!in_support) {
      H_lt = x == a_side ? kZeroNear : LeadingTerm{H->total(), Scale{}};
    } else if (x == a_side) {
      H_lt = toward_term(c.h, x);
    } else if (auto lt = c.h.asymptote(x)) {
      const LeadingTerm g = with_measure(*lt, c.h.endpoint_kind(x));
      H_lt = integrable(g.scale) ? LeadingTerm{H->total(), Scale{}} : integral_leading_term(g);
    }
    auto w0_lt = st.w0.asymptote(x);
    if (!H_lt || !w0_lt) return std::nullopt;
    G_lt[x == EndpointSide::Left ? 0 : 1] =
        H_lt->coeff == 0 ? kZeroNear : *w0_lt * pow(*H_lt, st.p);
  }
  bool exact_divergent = false;
  for (int i = 0; i < 2; ++i) {
    const EndpointKind kind =
        i == 1 && st.iv.infinite() ? EndpointKind::Infinite : EndpointKind::Finite;
    exact_divergent |= !integrable(with_measure(*G_lt[i], kind).scale);
  }
  if (!exact_divergent) return std::nullopt;

  const SymFun w0 = st.w0;
  const double p = st.p;
  const SymFun G = SymFun::numeric([w0, H_at, p](double t) { return w0(t) * std::pow(H_at(t), p); },
                                   st.iv, std::nullopt, std::nullopt);
  const IntegralResult lhs = improper_integral(G, st.iv, tol, FinitenessMode::NumericEvidence);
  if (lhs.outcome.is_finite()) return std::nullopt;

  return DivergenceWitness{c.h, c.support, s, m, c.at, rhs.outcome.value(), lhs.cutoff_history};
}

}  // namespace

DivergenceWitness divergence_witness(const HardyProblem& problem, const Tolerances& tol,
                                     const WitnessGrid& grid) {
  if (!(grid.s_step > 0)) throw ValidationError("witness grid step must be positive");
  const HardyResult hr = hardy_constant(problem, tol);
  if (hr.chi.is_finite())
    throw WitnessNotFound("the Hardy constant is finite (" + format_number(hr.chi.value()) +
                          "), so no divergence witness exists");
  const Setup st = make_setup(problem);
  const Interval iv = st.iv;
  const SymFun v1 = problem.v1.domain() == iv ? problem.v1 : problem.v1.restricted(iv);

  for (EndpointSide side : {st.beta_side(), st.alpha_side()}) {
    for (double m : grid.m_values) {
      const int steps = static_cast<int>(std::floor((grid.s_max - grid.s_min) / grid.s_step + 1e-9));
      for (int i = 0; i <= steps; ++i) {
        const double s = grid.s_max - i * grid.s_step;
        try {
          auto c = make_candidate(iv, side, s, m);
          if (!c) continue;
          if (auto w = verify(st, v1, *c, s, m, tol)) return *w;
        } catch (const Error&) {
          // candidate outside what the quadrature can certify; try the next one
        }
      }
    }
  }
  throw WitnessNotFound("no candidate t^s (ln t)^m in the search grid verified both conditions");
}

double extremal_ratio(const HardyProblem& problem, double tau, const Tolerances& tol) {
  if (problem.exps.p() < problem.exps.q())
    throw RegimeError("the extremal test function is used for p >= q only");
  const Setup st = make_setup(problem);
  const Interval& iv = st.iv;
  if (tau < iv.lo() || tau > iv.hi()) throw DomainError("tau outside the interval");
  const double alpha = side_point(iv, st.alpha_side());
  if (tau == alpha) throw DegenerateTestFunction("tau at alpha: the test function vanishes");
  if (std::isinf(tau)) throw DomainError("tau must be finite");

  const Interval head = st.forward ? Interval(iv.lo(), tau) : Interval(tau, iv.hi());
  const Interval tail = st.forward ? Interval(tau, iv.hi()) : Interval(iv.lo(), tau);
  const IntegralResult b = improper_integral(st.w1, head, tol);
  if (b.outcome.is_divergent())
    throw DegenerateTestFunction("v1^(-q') is not integrable between alpha and tau");
  const double Bt = b.outcome.value();
  if (!(Bt > 0)) throw DegenerateTestFunction("the test function has zero mass");

  double At = 0;
  if (tau != side_point(iv, st.beta_side())) {
    const IntegralResult a = improper_integral(st.w0, tail, tol);
    if (a.outcome.is_divergent()) return kInf;
    At = a.outcome.value();
  }

  // J = integral over the head of w0(s) B(s)^p, where B(s) runs from alpha.
  const SymFun w0h = st.w0.restricted(head), w1h = st.w1.restricted(head);
  const Mesh mesh = make_mesh(head, kSupportMeshPoints, -kSupportMeshZ, kSupportMeshZ);
  auto B = std::make_shared<const CumulativeIntegral>(w1h, head, st.alpha_side(), mesh.tau, tol);
  const double p = st.p;
  std::optional<LeadingTerm> ends[2];
  for (EndpointSide x : {EndpointSide::Left, EndpointSide::Right}) {
    auto lt0 = w0h.asymptote(x);
    if (!lt0) continue;
    std::optional<LeadingTerm> lb;
    if (x == st.alpha_side())
      lb = toward_term(w1h, x);
    else
      lb = LeadingTerm{Bt, Scale{}};
    if (lb) ends[x == EndpointSide::Left ? 0 : 1] = *lt0 * pow(*lb, p);
  }
  const SymFun J_integrand = SymFun::numeric(
      [w0h, B, p](double s) { return w0h(s) * std::pow(B->at(s), p); }, head, ends[0], ends[1]);
  const IntegralResult J = improper_integral(J_integrand, head, tol);
  if (J.outcome.is_divergent()) return kInf;

  const double lhs = std::pow(J.outcome.value() + std::pow(Bt, p) * At, 1 / p);
  const double rhs = std::pow(Bt, 1 / st.q);
  return lhs / rhs;
}

}  // namespace lpq
