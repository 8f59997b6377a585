#include "lpq/surface.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <boost/math/tools/roots.hpp>

#include "lpq/quad.hpp"

namespace lpq {

namespace {

constexpr double kTableStep = 1.0 / 16;
constexpr std::size_t kTableNodes = 1024;
constexpr int kNewtonIterations = 60;
constexpr std::uintmax_t kRootIterations = 200;

SymFun safe_power(const SymFun& f, double s) {
  try {
    return power(f, s);
  } catch (const MultiTermPower&) {
    return power(f.as_numeric(), s);
  }
}

double k_of(const SurfaceSpec& spec) { return spec.degree - 1.0; }

std::pair<double, double> weight_exponents(const SurfaceSpec& spec) {
  const double n = spec.fiber_dim, k = k_of(spec);
  return {n / spec.exps.p() - k, n / spec.exps.q() - k};
}

// Leading term of sqrt(1 + g^2) given that of |g|.
std::optional<LeadingTerm> density_term(const std::optional<LeadingTerm>& g) {
  if (!g) return std::nullopt;
  if (g->coeff == 0 || trend(g->scale) < 0) return LeadingTerm{1.0, Scale{}};
  if (trend(g->scale) == 0) return LeadingTerm{std::hypot(1.0, g->coeff), Scale{}};
  return g;
}

HardyResult forced_divergent(const SurfaceSpec& spec, const std::string& why) {
  HardyResult r;
  r.chi = ExtendedValue::divergent();
  r.regime = spec.exps.p() >= spec.exps.q() ? Regime::SupForm : Regime::IntegralForm;
  r.reason = why;
  return r;
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::AtInfinity ? "chi0" : "chi_inf"; }

const char* to_string(FLimit l) {
  switch (l) {
    case FLimit::Zero:
      return "Zero";
    case FLimit::FinitePositive:
      return "FinitePositive";
    case FLimit::Infinite:
      return "Infinite";
    case FLimit::Unknown:
      break;
  }
  return "Unknown";
}

void validate(const SurfaceSpec& spec) {
  if (spec.fiber_dim < 1) throw ValidationError("fiber_dim must be at least 1");
  if (spec.degree < 1 || spec.degree > spec.fiber_dim + 1)
    throw ValidationError("degree must satisfy 1 <= j <= n+1");
  const Interval& dom = spec.profile.domain();
  if (dom.lo() != 0.0 || !dom.infinite())
    throw ValidationError("the profile must be defined on [0, inf)");
  const SignedFunction d = derivative(spec.profile);
  if (d.abs_left && d.abs_left->coeff != 0 && trend(d.abs_left->scale) > 0)
    throw ValidationError("the profile's derivative is unbounded at 0");
}

bool hypothesis_holds(const SurfaceSpec& spec) {
  return 1 / spec.exps.q() - 1 / spec.exps.p() < 1.0 / (spec.fiber_dim + 1);
}

SymFun arc_length_density(const SurfaceSpec& spec) {
  validate(spec);
  const SignedFunction d = derivative(spec.profile);
  auto ev = d.eval;
  return SymFun::numeric([ev](double t) { return std::hypot(1.0, ev(t)); }, spec.profile.domain(),
                         density_term(d.abs_left), density_term(d.abs_right));
}

double arc_length(const SurfaceSpec& spec, double x, const Tolerances& tol) {
  if (!(x >= 0) || std::isinf(x)) throw DomainError("arc length needs a finite x >= 0");
  if (x == 0) return 0;
  return partial_integral(arc_length_density(spec), 0, x, tol);
}

double arc_length_inverse(const SurfaceSpec& spec, double s, const Tolerances& tol) {
  if (!(s >= 0) || std::isinf(s)) throw DomainError("arc length inverse needs a finite s >= 0");
  if (s == 0) return 0;
  const SymFun w = arc_length_density(spec);
  auto g = [&](double x) { return x == 0 ? -s : partial_integral(w, 0, x, tol) - s; };
  // G(x) >= x, so hi = s is normally enough; doubling covers quadrature slack.
  double hi = s, ghi = g(hi);
  for (int k = 0; ghi < 0; ++k) {
    if (k >= tol.max_doublings)
      throw BracketFailure("arc length " + format_number(s) + " not reached by x = " + format_number(hi));
    hi *= 2;
    ghi = g(hi);
  }
  if (ghi == 0) return hi;
  std::uintmax_t iters = kRootIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(
      g, 0.0, hi, -s, ghi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

ArcLengthTable::ArcLengthTable(const SurfaceSpec& spec, const Tolerances& tol)
    : density_(arc_length_density(spec)), tol_(tol), step_(kTableStep) {
  cumulative_.reserve(kTableNodes + 1);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < kTableNodes; ++i)
    cumulative_.push_back(cumulative_.back() + integrate_panel(density_, i * step_, (i + 1) * step_, tol_).value);

  const SignedFunction d = derivative(spec.profile);
  const auto& r = d.abs_right;
  if (r && (r->coeff == 0 || (trend(r->scale) < 0 && integrable(pow(*r, 2).scale)))) {
    // w - 1 = f'^2 / (1 + w), written to avoid cancellation.
    auto ev = d.eval;
    const SymFun excess = SymFun::numeric(
        [ev](double t) {
          const double g = ev(t);
          return g * g / (1 + std::hypot(1.0, g));
        },
        density_.domain(), LeadingTerm{std::hypot(1.0, ev(0.0)) - 1, Scale{}},
        r->coeff == 0 ? LeadingTerm{0.0, Scale{}} : LeadingTerm{0.5 * r->coeff * r->coeff, pow(*r, 2).scale});
    try {
      const IntegralResult ir = improper_integral(excess, density_.domain(), tol_);
      if (ir.outcome.is_finite()) offset_ = ir.outcome.value();
    } catch (const TolFailure&) {
    }
  }
}

double ArcLengthTable::from_node(std::size_t i, double x) const {
  const double xi = i * step_;
  return x > xi ? cumulative_[i] + integrate_panel(density_, xi, x, tol_).value : cumulative_[i];
}

double ArcLengthTable::G(double x) const {
  if (!(x >= 0)) throw DomainError("arc length needs x >= 0");
  const std::size_t i = std::min(static_cast<std::size_t>(x / step_), kTableNodes);
  return from_node(i, x);
}

double ArcLengthTable::H(double s) const {
  if (!(s >= 0)) throw DomainError("arc length inverse needs s >= 0");
  if (s == 0) return 0;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double xi = i * step_;
  const bool inside = i < kTableNodes;
  double x = inside ? xi + step_ * (s - cumulative_[i]) / (cumulative_[i + 1] - cumulative_[i])
                    : xi + (s - cumulative_[i]) / density_(xi);
  for (int k = 0; k < kNewtonIterations; ++k) {
    const double dx = (from_node(i, x) - s) / density_(x);
    double next = std::max(x - dx, xi);
    if (inside) next = std::min(next, xi + step_);
    if (std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

SymFun arc_length_profile(const SurfaceSpec& spec, const Tolerances& tol) {
  auto table = std::make_shared<const ArcLengthTable>(spec, tol);
  const SymFun f = spec.profile;
  const SignedFunction d = derivative(f);

  // Near 0, H(s) ~ s / w(0): a local power t^a picks up the factor w(0)^(-a).
  std::optional<LeadingTerm> left;
  if (auto lt = f.asymptote(EndpointSide::Left)) {
    const double w0 = std::hypot(1.0, d.eval(0.0));
    left = LeadingTerm{lt->coeff * std::pow(w0, lt->scale.alpha), lt->scale};
  }
  // Near infinity, H(s) = s - offset + o(1) when f' decays square-integrably,
  // and H(s) ~ s / W when f' tends to a nonzero constant with W = sqrt(1 + c^2).
  std::optional<LeadingTerm> right;
  const auto lt = f.asymptote(EndpointSide::Right);
  const auto& dr = d.abs_right;
  if (lt && dr) {
    if (auto off = table->offset_at_infinity()) {
      right = LeadingTerm{lt->coeff * std::exp(-lt->scale.delta * *off), lt->scale};
    } else if (dr->coeff != 0 && trend(dr->scale) == 0 && lt->scale.delta == 0) {
      right = LeadingTerm{lt->coeff * std::pow(std::hypot(1.0, dr->coeff), -lt->scale.alpha), lt->scale};
    }
  }
  return SymFun::numeric([f, table](double s) { return f(table->H(s)); }, f.domain(), left, right);
}

HardyProblem surface_hardy_problem(const SurfaceSpec& spec, Direction d) {
  const SymFun w = arc_length_density(spec);
  const auto [e0, e1] = weight_exponents(spec);
  const double p = spec.exps.p(), qc = spec.exps.q_conj();
  const SymFun v0 = safe_power(spec.profile, e0).times(power(w, 1 / p));
  const SymFun v1 = safe_power(spec.profile, e1).times(power(w, -1 / qc));
  const Orientation o = d == Direction::AtInfinity ? Orientation::Forward : Orientation::Reversed;
  return {spec.exps, Interval(0, kInf, o), v0, v1};
}

HardyProblem arc_length_hardy_problem(const SurfaceSpec& spec, Direction d, const Tolerances& tol) {
  const SymFun F = arc_length_profile(spec, tol);
  const auto [e0, e1] = weight_exponents(spec);
  const Orientation o = d == Direction::AtInfinity ? Orientation::Forward : Orientation::Reversed;
  return {spec.exps, Interval(0, kInf, o), power(F, e0), power(F, e1)};
}

HardyResult chi_surface(const SurfaceSpec& spec, Direction d, const Tolerances& tol) {
  return hardy_constant(surface_hardy_problem(spec, d), tol);
}

ExtendedValue surface_volume(const SurfaceSpec& spec, const Tolerances& tol) {
  const SymFun w = arc_length_density(spec);
  const SymFun integrand = safe_power(spec.profile, spec.fiber_dim).times(w);
  const IntegralResult ir = improper_integral(integrand, w.domain(), tol);
  if (ir.outcome.is_divergent()) return ir.outcome;
  const double sn = sphere_volume(spec.fiber_dim);
  return ExtendedValue::finite(sn * ir.outcome.value(), sn * ir.outcome.error_bound());
}

FLimit profile_limit(const SurfaceSpec& spec) {
  const auto lt = spec.profile.asymptote(EndpointSide::Right);
  if (!lt || !(lt->coeff > 0)) return FLimit::Unknown;
  const int tr = trend(lt->scale);
  return tr < 0 ? FLimit::Zero : tr == 0 ? FLimit::FinitePositive : FLimit::Infinite;
}

SurfaceReport classify_surface(const SurfaceSpec& spec, const Tolerances& tol) {
  validate(spec);
  SurfaceReport rep;
  rep.hypothesis = hypothesis_holds(spec);
  rep.f_limit = profile_limit(spec);
  const auto [e0, e1] = weight_exponents(spec);

  auto compute = [&](Direction d) -> std::optional<HardyResult> {
    try {
      return chi_surface(spec, d, tol);
    } catch (const TolFailure&) {
      return std::nullopt;
    }
  };
  if (rep.hypothesis && e0 <= kExponentEps) {
    rep.chi0 = forced_divergent(spec, "forced: n/p - k <= 0");
    rep.fired_rules.emplace_back(rules::kChiZeroForced);
  } else {
    rep.chi0 = compute(Direction::AtInfinity);
  }
  if (rep.hypothesis && e1 >= -kExponentEps) {
    rep.chi_inf = forced_divergent(spec, "forced: n/q - k >= 0");
    rep.fired_rules.emplace_back(rules::kChiInfForced);
  } else {
    rep.chi_inf = compute(Direction::AtZero);
  }
  try {
    rep.volume = surface_volume(spec, tol);
  } catch (const TolFailure&) {
  }

  const bool some_finite = (rep.chi0 && rep.chi0->chi.is_finite()) ||
                           (rep.chi_inf && rep.chi_inf->chi.is_finite());
  if (rep.hypothesis && some_finite) {
    rep.fired_rules.emplace_back(rules::kFiniteChiForcesDecay);
    if (rep.f_limit == FLimit::FinitePositive || rep.f_limit == FLimit::Infinite)
      throw InconsistencyError(std::string("finite Hardy constant but the profile tends to ") +
                               to_string(rep.f_limit) + " (" + rules::kFiniteChiForcesDecay + ")");
  }

  const std::string vol = rep.volume ? describe(*rep.volume) : "failed";
  const bool unbounded = rep.f_limit == FLimit::Infinite;

  if (!rep.hypothesis) {
    rep.torsion_all_degrees = Verdict::unknown(rules::kHypothesisFails);
  } else if (unbounded) {
    rep.torsion_all_degrees = Verdict::nontrivial(rules::kTorsionUnbounded);
  } else {
    rep.torsion_all_degrees = Verdict::unknown(rules::kTorsionUnbounded);
  }
  rep.torsion_all_degrees.with("f_limit", to_string(rep.f_limit));

  const bool edge_degree = spec.degree == 1 || spec.degree == spec.fiber_dim + 1;
  if (!rep.hypothesis) {
    rep.torsion_j = Verdict::unknown(rules::kHypothesisFails);
  } else if (unbounded) {
    rep.torsion_j = Verdict::nontrivial(rules::kTorsionUnbounded);
  } else if (!edge_degree) {
    rep.torsion_j = Verdict::unknown(rules::kDegreeScope);
  } else if (rep.f_limit == FLimit::FinitePositive || (rep.volume && rep.volume->is_divergent())) {
    rep.torsion_j = Verdict::nontrivial(rules::kTorsionNecessary);
  } else if (rep.f_limit == FLimit::Zero && rep.volume && rep.volume->is_finite()) {
    rep.torsion_j = Verdict::unknown(rules::kNoSufficiency);
  } else {
    rep.torsion_j = Verdict::unknown(rules::kTorsionNecessary);
  }
  rep.torsion_j.with("f_limit", to_string(rep.f_limit)).with("volume", vol);
  if (!rep.hypothesis)
    rep.torsion_j.with("reason", "1/q - 1/p < 1/(n+1) fails");
  return rep;
}

SymFun power_law_profile(double alpha) {
  const Interval dom(0, kInf);
  SignedFunction d;
  d.eval = [alpha](double t) { return alpha * std::pow(1 + t, alpha - 1); };
  d.abs_left = LeadingTerm{std::abs(alpha), Scale{}};
  d.abs_right = alpha == 0 ? LeadingTerm{0.0, Scale{}}
                           : LeadingTerm{std::abs(alpha), Scale{0, alpha - 1, 0, 0}};
  return SymFun::numeric([alpha](double t) { return std::pow(1 + t, alpha); }, dom,
                         LeadingTerm{1.0, Scale{}}, LeadingTerm{1.0, Scale{0, alpha, 0, 0}}, d);
}

}  // namespace lpq
