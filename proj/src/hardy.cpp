#include "lpq/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hardy_detail.hpp"

namespace lpq {

const char* to_string(Regime r) { return r == Regime::SupForm ? "SupForm" : "IntegralForm"; }

const char* to_string(Argmax::Kind k) {
  switch (k) {
    case Argmax::Kind::Interior: return "interior";
    case Argmax::Kind::LeftLimit: return "left-limit";
    case Argmax::Kind::RightLimit: return "right-limit";
    default: return "none";
  }
}

namespace detail {

namespace {
constexpr double kMinRelOffset = 1e-9;
}

SymFun safe_power(const SymFun& f, double s) {
  try {
    return power(f, s);
  } catch (const MultiTermPower&) {
    return power(f.as_numeric(), s);
  }
}

Setup make_setup(const HardyProblem& pr) {
  const Interval iv = pr.interval.with_orientation(Orientation::Forward);
  auto restrict = [&](const SymFun& v, const char* name) {
    if (iv.lo() < v.domain().lo() || iv.hi() > v.domain().hi())
      throw DomainError(std::string(name) + " is not defined on the whole interval");
    return v.domain() == iv ? v : v.restricted(iv);
  };
  Setup s{pr.exps.p(), pr.exps.q(), pr.exps.q_conj(), iv,
          pr.interval.orientation() == Orientation::Forward,
          safe_power(restrict(pr.v0, "v0"), pr.exps.p()),
          safe_power(restrict(pr.v1, "v1"), -pr.exps.q_conj())};
  return s;
}

double side_point(const Interval& iv, EndpointSide side) {
  return side == EndpointSide::Left ? iv.lo() : iv.hi();
}

double tau_of_z(const Interval& iv, double z) {
  if (iv.infinite()) return iv.lo() + std::max(1.0, std::abs(iv.lo())) * std::exp(z);
  const double w = iv.hi() - iv.lo();
  return z >= 0 ? iv.hi() - w / (1 + std::exp(z)) : iv.lo() + w / (1 + std::exp(-z));
}

Mesh make_mesh(const Interval& iv, int n, double zlo, double zhi) {
  Mesh m;
  for (int i = 0; i < n; ++i) {
    const double z = zlo + (zhi - zlo) * i / (n - 1);
    const double t = tau_of_z(iv, z);
    if (!(t > iv.lo() && t < iv.hi())) continue;
    // Stay clear of the floating-point resolution around nonzero endpoints.
    if (t - iv.lo() < kMinRelOffset * std::abs(iv.lo())) continue;
    if (!iv.infinite() && iv.hi() - t < kMinRelOffset * std::abs(iv.hi())) continue;
    if (!m.tau.empty() && !(t > m.tau.back())) continue;
    m.z.push_back(z);
    m.tau.push_back(t);
  }
  if (m.tau.empty()) throw DomainError("interval too narrow to sample");
  return m;
}

EndFiniteness end_integrable(const SymFun& w, EndpointSide side, const Interval& iv,
                             const Tolerances& tol, FinitenessMode mode) {
  auto lt = w.asymptote(side);
  if (mode == FinitenessMode::Auto && lt)
    return {integrable(with_measure(*lt, w.endpoint_kind(side)).scale), true, {}};
  const double mid =
      iv.infinite() ? iv.lo() + std::max(1.0, std::abs(iv.lo())) : iv.lo() + 0.5 * (iv.hi() - iv.lo());
  const Interval half =
      side == EndpointSide::Left ? Interval(iv.lo(), mid) : Interval(mid, iv.hi());
  IntegralResult r = improper_integral(w, half, tol, FinitenessMode::NumericEvidence);
  return {r.outcome.is_finite(), false, std::move(r.cutoff_history)};
}

std::optional<LeadingTerm> toward_term(const SymFun& w, EndpointSide side) {
  auto lt = w.asymptote(side);
  if (!lt) return std::nullopt;
  return integral_leading_term(with_measure(*lt, w.endpoint_kind(side)));
}

std::optional<LeadingTerm> away_term(const SymFun& w, EndpointSide side,
                                     const CumulativeIntegral& cum) {
  auto lt = w.asymptote(side);
  if (!lt) return std::nullopt;
  const LeadingTerm g = with_measure(*lt, w.endpoint_kind(side));
  if (integrable(g.scale)) return LeadingTerm{cum.total(), Scale{}};
  return integral_leading_term(g);
}

std::optional<std::pair<LeadingTerm, LeadingTerm>> factor_terms(const Setup& s, EndpointSide side,
                                                                const CumulativeIntegral& A,
                                                                const CumulativeIntegral& B) {
  auto a = side == s.beta_side() ? toward_term(s.w0, side) : away_term(s.w0, side, A);
  auto b = side == s.alpha_side() ? toward_term(s.w1, side) : away_term(s.w1, side, B);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

std::string end_name(const Interval& iv, EndpointSide side) {
  return std::string(side == EndpointSide::Left ? "left" : "right") + " end (t = " +
         format_number(side_point(iv, side)) + ")";
}

}  // namespace detail

using namespace detail;

namespace {

constexpr double kSupZ = 20.0;
constexpr double kMeshZ = 30.0;
constexpr int kIntegralMeshPoints = 481;
constexpr int kGoldenIterations = 100;
// Relative margin by which an endpoint limit must beat the interior maximum to
// be reported as the argmax.
constexpr double kArgmaxMargin = 1e-9;

struct EndLimit {
  bool divergent = false;
  double value = 0;
  bool exact = false;
  std::string note;
  CutoffHistory evidence;
};

// An underflowed factor wins over an overflowed one: both only happen far out
// along exponential weights, where a growing product is caught by the growth test first.
// Both factors are finite inside the interval once precheck passed, so an
// infinite factor means it overflowed; the sample is then unresolved (NaN).
double profile_of(const Setup& s, double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::quiet_NaN();
  if (a == 0 || b == 0) return 0.0;
  return std::pow(a, 1 / s.p) * std::pow(b, 1 / s.qc);
}

// Profile along tau approaching the endpoint, for weights without usable
// asymptotics. Starts at a moderate tau and stops once a factor saturates in
// floating point (exponential weights), judging growth on what was collected.
EndLimit numeric_end_limit(const Setup& s, EndpointSide side, const CumulativeIntegral& A,
                           const CumulativeIntegral& B, const Tolerances& tol) {
  EndLimit out;
  const double e = side_point(s.iv, side);
  const double start = tau_of_z(s.iv, 0.0);
  std::vector<double> seq;
  for (int k = 0; k < tol.max_doublings; ++k) {
    double t = std::isinf(e) ? s.iv.lo() + (start - s.iv.lo()) * std::ldexp(1.0, k)
                             : e + (start - e) * std::ldexp(1.0, -k);
    if (!(t > s.iv.lo() && t < s.iv.hi())) break;
    if (!out.evidence.empty() && t == out.evidence.back().first) break;
    const double a = A.at(t), b = B.at(t);
    // Positive weights never give an exact zero: it means the factor underflowed.
    if (a == 0 || b == 0 || std::isinf(a) || std::isinf(b)) break;
    const double v = profile_of(s, a, b);
    out.evidence.emplace_back(t, v);
    if (std::isinf(v)) {
      out.divergent = true;
      out.note = "profile overflows approaching the " + end_name(s.iv, side);
      return out;
    }
    seq.push_back(v);
  }
  if (seq.empty()) return out;
  const double first = seq.front(), last = seq.back();
  const double peak = *std::max_element(seq.begin(), seq.end());
  const double mid = seq[seq.size() / 2];
  bool monotone = true;
  for (std::size_t i = seq.size() / 2 + 1; i < seq.size(); ++i) monotone &= seq[i] >= seq[i - 1];
  if (monotone && seq.size() >= 4 &&
      ((first > 0 && last > tol.divergence_growth * first) ||
       (mid > 0 && std::log(last / mid) > 0.05))) {
    out.divergent = true;
    out.note = "profile keeps growing approaching the " + end_name(s.iv, side) +
               " (numeric evidence)";
    return out;
  }
  out.value = peak;
  out.note = "numeric profile limit at the " + end_name(s.iv, side);
  return out;
}

EndLimit end_limit(const Setup& s, EndpointSide side, const CumulativeIntegral& A, const CumulativeIntegral& B,
                   const Tolerances& tol, FinitenessMode mode) {
  if (mode == FinitenessMode::Auto) {
    if (auto ab = factor_terms(s, side, A, B)) {
      const LeadingTerm prof = pow(ab->first, 1 / s.p) * pow(ab->second, 1 / s.qc);
      EndLimit out;
      out.exact = true;
      out.note = "profile ~ " + format_number(prof.coeff) + " * " + describe(prof.scale) +
                 " at the " + end_name(s.iv, side);
      if (trend(prof.scale) > 0)
        out.divergent = true;
      else
        out.value = limit_value(prof);
      return out;
    }
  }
  return numeric_end_limit(s, side, A, B, tol);
}

HardyResult precheck(const Setup& s, const Tolerances& tol, FinitenessMode mode, bool& ok) {
  HardyResult res;
  res.regime = s.p >= s.q ? Regime::SupForm : Regime::IntegralForm;
  const EndFiniteness fa = end_integrable(s.w0, s.beta_side(), s.iv, tol, mode);
  const EndFiniteness fb = end_integrable(s.w1, s.alpha_side(), s.iv, tol, mode);
  res.decided_by = fa.exact && fb.exact ? IntegralResult::DecidedBy::Symbolic
                                        : IntegralResult::DecidedBy::NumericEvidence;
  ok = fa.finite && fb.finite;
  if (!fa.finite) {
    res.reason = "v0^p is not integrable at the beta " + end_name(s.iv, s.beta_side());
    res.evidence = fa.evidence;
  } else if (!fb.finite) {
    res.reason = "v1^(-q') is not integrable at the alpha " + end_name(s.iv, s.alpha_side());
    res.evidence = fb.evidence;
  }
  return res;
}

HardyResult sup_form(const Setup& s, const Tolerances& tol, FinitenessMode mode) {
  bool ok = false;
  HardyResult res = precheck(s, tol, mode, ok);
  if (!ok) return res;

  const Mesh mesh = make_mesh(s.iv, tol.sup_grid_points, -kSupZ, kSupZ);
  const CumulativeIntegral A(s.w0, s.iv, s.beta_side(), mesh.tau, tol, mode);
  const CumulativeIntegral B(s.w1, s.iv, s.alpha_side(), mesh.tau, tol, mode);

  std::size_t best = 0;
  double best_val = -kInf;
  for (std::size_t j = 0; j < mesh.tau.size(); ++j) {
    const double v = profile_of(s, A.values()[j], B.values()[j]);
    if (std::isnan(v)) continue;
    res.profile.emplace_back(mesh.tau[j], v);
    if (v > best_val) {
      best = j;
      best_val = v;
    }
  }
  if (res.profile.empty()) throw TolFailure("profile overflows at every sample point");
  double best_tau = mesh.tau[best];

  // Golden-section refinement in the log coordinate around the best sample.
  if (best > 0 && best + 1 < mesh.tau.size()) {
    auto f = [&](double z) {
      const double t = tau_of_z(s.iv, z);
      const double v = profile_of(s, A.at(t), B.at(t));
      return std::isnan(v) ? -kInf : v;
    };
    const double g = (std::sqrt(5.0) - 1) / 2;
    double lo = mesh.z[best - 1], hi = mesh.z[best + 1];
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < kGoldenIterations && hi - lo > 1e-12; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      }
    }
    const double z = f1 > f2 ? x1 : x2;
    const double v = std::max(f1, f2);
    if (v > best_val) {
      best_val = v;
      best_tau = tau_of_z(s.iv, z);
    }
  }

  const EndLimit left = end_limit(s, EndpointSide::Left, A, B, tol, mode);
  const EndLimit right = end_limit(s, EndpointSide::Right, A, B, tol, mode);
  if (!(left.exact && right.exact)) res.decided_by = IntegralResult::DecidedBy::NumericEvidence;
  for (const EndLimit* l : {&left, &right}) {
    if (l->divergent) {
      res.chi = ExtendedValue::divergent();
      res.reason = l->note;
      res.evidence = l->evidence;
      return res;
    }
  }

  double chi = best_val;
  res.argmax = {Argmax::Kind::Interior, best_tau};
  res.reason = "sup attained in the interior";
  for (auto [l, kind] : {std::pair{&left, Argmax::Kind::LeftLimit},
                         std::pair{&right, Argmax::Kind::RightLimit}}) {
    if (l->value > chi * (1 + kArgmaxMargin) && l->value > best_val * (1 + kArgmaxMargin)) {
      chi = l->value;
      res.argmax = {kind, 0.0};
      res.reason = "sup is an endpoint limit; " + l->note;
    }
  }
  chi = std::max({chi, left.value, right.value});
  res.chi = ExtendedValue::finite(chi, std::max(tol.abs_tol, 10 * tol.rel_tol * chi));
  return res;
}

HardyResult integral_form(const Setup& s, const Tolerances& tol, FinitenessMode mode) {
  bool ok = false;
  HardyResult res = precheck(s, tol, mode, ok);
  if (!ok) return res;

  const Mesh mesh = make_mesh(s.iv, kIntegralMeshPoints, -kMeshZ, kMeshZ);
  auto A = std::make_shared<const CumulativeIntegral>(s.w0, s.iv, s.beta_side(), mesh.tau, tol, mode);
  auto B = std::make_shared<const CumulativeIntegral>(s.w1, s.iv, s.alpha_side(), mesh.tau, tol, mode);
  const double p = s.p, r = s.q / (s.q - s.p);
  const SymFun w1 = s.w1;

  std::optional<LeadingTerm> ends[2];
  if (mode == FinitenessMode::Auto) {
    for (EndpointSide side : {EndpointSide::Left, EndpointSide::Right}) {
      auto ab = factor_terms(s, side, *A, *B);
      auto lt1 = w1.asymptote(side);
      if (ab && lt1)
        ends[side == EndpointSide::Left ? 0 : 1] =
            pow(pow(ab->second, p - 1) * ab->first, r) * *lt1;
    }
  }
  const SymFun outer = SymFun::numeric(
      [A, B, w1, p, r](double t) {
        const double a = A->at(t), b = B->at(t);
        if (a == 0 || b == 0) return 0.0;
        return std::pow(std::pow(b, p - 1) * a, r) * w1(t);
      },
      s.iv, ends[0], ends[1]);
  IntegralResult ir = improper_integral(outer, s.iv, tol, mode);
  res.decided_by = res.decided_by == IntegralResult::DecidedBy::Symbolic ? ir.decided_by
                                                                          : res.decided_by;
  res.evidence = ir.cutoff_history;
  if (ir.outcome.is_divergent()) {
    res.chi = ExtendedValue::divergent();
    res.reason = "outer integral diverges";
    if (ends[0] && !integrable(with_measure(*ends[0], EndpointKind::Finite).scale))
      res.reason += " at the " + end_name(s.iv, EndpointSide::Left);
    else if (ends[1] &&
             !integrable(with_measure(*ends[1], outer.endpoint_kind(EndpointSide::Right)).scale))
      res.reason += " at the " + end_name(s.iv, EndpointSide::Right);
    return res;
  }
  const double e = (s.q - s.p) / (s.p * s.q);
  const double I = ir.outcome.value();
  const double chi = std::pow(I, e);
  const double err = I > 0 ? chi * e * ir.outcome.error_bound() / I : 0.0;
  res.chi = ExtendedValue::finite(chi, std::max({err, tol.abs_tol, tol.rel_tol * chi}));
  res.reason = "outer integral converges";
  return res;
}

}  // namespace

ExtendedValue profile(const HardyProblem& problem, double tau, const Tolerances& tol) {
  if (problem.exps.p() < problem.exps.q())
    throw RegimeError("profile is defined for p >= q only");
  const Setup s = make_setup(problem);
  if (!(tau > s.iv.lo() && tau < s.iv.hi())) throw DomainError("tau must be an interior point");
  const bool fwd = s.forward;
  const IntegralResult a =
      improper_integral(s.w0, fwd ? Interval(tau, s.iv.hi()) : Interval(s.iv.lo(), tau), tol);
  const IntegralResult b =
      improper_integral(s.w1, fwd ? Interval(s.iv.lo(), tau) : Interval(tau, s.iv.hi()), tol);
  if (a.outcome.is_divergent() || b.outcome.is_divergent()) return ExtendedValue::divergent();
  const double av = a.outcome.value(), bv = b.outcome.value();
  const double v = profile_of(s, av, bv);
  double rel = 0;
  if (av > 0) rel += a.outcome.error_bound() / (s.p * av);
  if (bv > 0) rel += b.outcome.error_bound() / (s.qc * bv);
  return ExtendedValue::finite(v, v * rel);
}

HardyResult hardy_constant(const HardyProblem& problem, const Tolerances& tol,
                           FinitenessMode mode) {
  tol.validate();
  const Setup s = make_setup(problem);
  return s.p >= s.q ? sup_form(s, tol, mode) : integral_form(s, tol, mode);
}

}  // namespace lpq
