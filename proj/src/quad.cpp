#include "lpq/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace lpq {
namespace {

constexpr std::size_t kMaxSegments = 4000;
// Substitution order cap; steeper singularities fall back to panel halving.
constexpr int kMaxSubstitutionOrder = 16;
// Smallest endpoint offset, relative to |e|, that t = e +- h still resolves well.
constexpr double kResolvedOffset = 1e-7;
// Panels used to gather evidence after an exact divergence decision.
constexpr int kEvidencePanels = 12;
// Divergence by growth needs this many non-decreasing increments in a row ...
constexpr int kSustainedPanels = 4;
// ... and at least this many panels in total.
constexpr int kMinGrowthPanels = 10;

// Acceptance test of the public contract.
bool within_tol(double err, double value, const Tolerances& tol) {
  return err <= std::max(tol.abs_tol, tol.rel_tol * std::abs(value));
}

// Refinement target. Purely relative, since Hardy profiles multiply integrals
// of very different magnitudes and an absolute floor would swamp small ones.
bool within_rel(double err, double value, const Tolerances& tol) {
  return err <= tol.rel_tol * std::abs(value);
}

struct Approach {
  enum class Verdict { Converged, Diverged, Undecided };
  Verdict verdict = Verdict::Undecided;
  double value = 0;
  double error = kInf;
  long evaluations = 0;
  CutoffHistory history;
};

// Integrates from `anchor` toward `endpoint` over geometrically shrinking
// (finite endpoint) or doubling (infinite endpoint) panels, extrapolating the
// tail of the partial sums as a geometric series.
Approach approach(const std::function<double(double)>& f, double anchor, double endpoint,
                  const Tolerances& tol, int max_panels) {
  Approach out;
  const bool infinite = std::isinf(endpoint);
  const double len = infinite ? std::max(1.0, std::abs(anchor)) : 0.0;
  auto cut = [&](int k) {
    if (infinite) return anchor + len * (std::ldexp(1.0, k) - 1.0);
    return endpoint + (anchor - endpoint) * std::ldexp(1.0, -k);
  };

  double sum = 0, first = 0, prev_inc = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double est = 0, prev_est = std::numeric_limits<double>::quiet_NaN();
  int stable = 0, zero_run = 0, rising = 0;
  bool resolution_limited = false;
  for (int k = 0; k < max_panels; ++k) {
    double a = cut(k), b = cut(k + 1);
    if (a > b) std::swap(a, b);
    if (!(b > a)) {  // panels below floating-point resolution
      resolution_limited = true;
      break;
    }
    PartialIntegral p = integrate_panel(f, a, b, tol);
    out.evaluations += p.evaluations;
    if (!std::isfinite(p.value)) {
      out.history.emplace_back(cut(k + 1), kInf);
      out.verdict = Approach::Verdict::Diverged;
      return out;
    }
    const double inc = p.value;
    sum += inc;
    if (k == 0) first = inc;
    out.history.emplace_back(cut(k + 1), sum);

    est = sum;
    if (k > 0 && prev_inc > 0) {
      ratio = inc / prev_inc;
      if (ratio > 0 && ratio < 1) est = sum + inc * ratio / (1 - ratio);
      rising = inc >= prev_inc ? rising + 1 : 0;
    }

    // Growth only counts once sustained, so a sharp bump away from the anchor
    // is not mistaken for divergence.
    if (first > 0 && sum > tol.divergence_growth * first && rising >= kSustainedPanels &&
        k >= kMinGrowthPanels) {
      out.verdict = Approach::Verdict::Diverged;
      return out;
    }
    zero_run = inc == 0 ? zero_run + 1 : 0;
    if (zero_run >= 2) {
      out.verdict = Approach::Verdict::Converged;
      out.value = sum;
      out.error = 0;
      return out;
    }
    if (k > 0 && ratio < 1 && within_rel(std::abs(est - prev_est), est, tol))
      ++stable;
    else
      stable = 0;
    if (stable >= 2 && k >= 3) {
      out.verdict = Approach::Verdict::Converged;
      out.value = est;
      out.error = std::abs(est - prev_est);
      return out;
    }
    prev_est = est;
    prev_inc = inc;
  }
  out.value = est;
  out.error = std::isnan(prev_est) ? kInf : std::abs(est - prev_est);
  if (!resolution_limited && (ratio >= 1 || rising >= kSustainedPanels)) out.verdict = Approach::Verdict::Diverged;
  return out;
}

// Leading term of f at a finite endpoint where f is unbounded; nullopt when f
// stays bounded there.
std::optional<LeadingTerm> singular_term(const SymFun& f, EndpointSide side) {
  if (f.endpoint_kind(side) != EndpointKind::Finite) return std::nullopt;
  auto lt = f.asymptote(side);
  if (!lt || trend(lt->scale) <= 0) return std::nullopt;
  if (!integrable(with_measure(*lt, EndpointKind::Finite).scale))
    throw DomainError("integrand is not integrable at a finite endpoint");
  return lt;
}

// Integral of the leading term over offsets (0, h), rescaled so the term
// matches f at offset h. With x = |t - e| and L = ln(1/x) the term is
// c x^a L^g (ln L)^n; for n = 0 the integral is c Gamma(g+1, (a+1)L) / (a+1)^(g+1).
double endpoint_tail(const SymFun& f, const LeadingTerm& lt, double e, double h, bool at_left) {
  const Scale& sc = lt.scale;
  const double a = -sc.alpha, L = -std::log(h);
  const double term = lt.coeff * std::pow(h, a) * std::pow(L, sc.gamma) *
                      (sc.eta == 0 ? 1.0 : std::pow(std::log(L), sc.eta));
  const double fh = f(at_left ? e + h : e - h);
  const double match = term != 0 && std::isfinite(fh) ? fh / term : 1.0;
  double integral;
  if (sc.eta == 0 && sc.gamma > -1) {
    integral = lt.coeff * boost::math::tgamma(sc.gamma + 1, (a + 1) * L) / std::pow(a + 1, sc.gamma + 1);
  } else {
    const LeadingTerm it = integral_leading_term(with_measure(lt, EndpointKind::Finite));
    const double u = 1 / h;
    integral = it.coeff * std::pow(u, it.scale.alpha) * std::pow(std::log(u), it.scale.gamma) *
               std::pow(std::log(std::log(u)), it.scale.eta);
  }
  return match * integral;
}

PartialIntegral singular_panel(const SymFun& f, double a, double b, const LeadingTerm& lt,
                               bool at_left, const Tolerances& tol) {
  const double kappa = -lt.scale.alpha;
  const double e = at_left ? a : b;
  if (e != 0.0) {
    // Offsets below h0 are not resolved by t itself: take the tail from the
    // leading term there and integrate dyadic panels above it.
    const double width = b - a;
    const double h0 = std::min(width, kResolvedOffset * std::abs(e));
    PartialIntegral out{endpoint_tail(f, lt, e, h0, at_left), 0.0, 1};
    auto g = [&f](double t) { return f(t); };
    for (double h = h0; h < width; h *= 2) {
      const double h2 = std::min(2 * h, width);
      const PartialIntegral p = at_left ? integrate_panel(g, e + h, e + h2, tol)
                                        : integrate_panel(g, e - h2, e - h, tol);
      out.value += p.value;
      out.error += p.error;
      out.evaluations += p.evaluations;
    }
    return out;
  }
  // Transformed integrand behaves like u^(m(kappa+1) - 1); make that at least u^3.
  const double order = std::ceil(4.0 / (kappa + 1.0));
  if (order > kMaxSubstitutionOrder) {
    Approach ap = approach([&f](double t) { return f(t); }, at_left ? b : a, e, tol,
                           4 * tol.max_doublings);
    if (ap.verdict != Approach::Verdict::Converged)
      throw TolFailure("singular endpoint integral did not converge to tolerance", ap.history);
    return {ap.value, ap.error, ap.evaluations};
  }
  const int m = std::max(2, static_cast<int>(order));
  const double umax = std::pow(b - a, 1.0 / m);
  auto g = [&](double u) {
    const double h = std::pow(u, m);
    const double t = at_left ? e + h : e - h;
    if (t == e || h == 0) return 0.0;
    return m * std::pow(u, m - 1) * f(t);
  };
  return integrate_panel(g, 0.0, umax, tol);
}

}  // namespace

PartialIntegral integrate_panel(const std::function<double(double)>& g, double a, double b,
                                const Tolerances& tol) {
  // Global adaptive bisection. Each segment is mapped onto [-1, 1] before the
  // Kronrod rule is applied so that its error estimate is in absolute units.
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  PartialIntegral out;
  struct Seg {
    double a, b, value, error;
    bool operator<(const Seg& o) const { return error < o.error; }
  };
  auto eval = [&](double lo, double hi) {
    const double h = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double err = 0;
    const double v = Rule::integrate(
        [&](double x) {
          ++out.evaluations;
          return h * g(mid + h * x);
        },
        -1.0, 1.0, 0, 0.0, &err);
    return Seg{lo, hi, v, err};
  };
  std::vector<Seg> heap;
  double total = 0, err = 0;
  try {
    heap.push_back(eval(a, b));
    total = heap.front().value;
    err = heap.front().error;
    while (std::isfinite(total) && err > 0.5 * tol.rel_tol * std::abs(total) &&
           heap.size() < kMaxSegments) {
      std::pop_heap(heap.begin(), heap.end());
      const Seg worst = heap.back();
      heap.pop_back();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {  // cannot split further
        heap.push_back(worst);
        std::push_heap(heap.begin(), heap.end());
        break;
      }
      const Seg l = eval(worst.a, mid), r = eval(mid, worst.b);
      total += l.value + r.value - worst.value;
      err += l.error + r.error - worst.error;
      for (const Seg& s : {l, r}) {
        heap.push_back(s);
        std::push_heap(heap.begin(), heap.end());
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    total = std::numeric_limits<double>::quiet_NaN();
  }
  // Re-sum to shed the drift of incremental updates.
  if (std::isfinite(total)) {
    std::sort(heap.begin(), heap.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    total = 0;
    err = 0;
    for (const Seg& s : heap) {
      total += s.value;
      err += s.error;
    }
  }
  out.value = total;
  out.error = err;
  return out;
}

PartialIntegral partial_integral_detailed(const SymFun& f, double lo, double hi,
                                          const Tolerances& tol) {
  const Interval& dom = f.domain();
  if (!(lo < hi) || lo < dom.lo() || hi > dom.hi() || std::isinf(hi))
    throw DomainError("partial_integral needs a finite sub-interval of the domain");
  std::optional<LeadingTerm> kl, kr;
  if (lo == dom.lo()) kl = singular_term(f, EndpointSide::Left);
  if (hi == dom.hi()) kr = singular_term(f, EndpointSide::Right);

  PartialIntegral out;
  auto add = [&](const PartialIntegral& p) {
    out.value += p.value;
    out.error += p.error;
    out.evaluations += p.evaluations;
  };
  if (kl && kr) {
    const double mid = lo + 0.5 * (hi - lo);
    add(singular_panel(f, lo, mid, *kl, true, tol));
    add(singular_panel(f, mid, hi, *kr, false, tol));
  } else if (kl) {
    add(singular_panel(f, lo, hi, *kl, true, tol));
  } else if (kr) {
    add(singular_panel(f, lo, hi, *kr, false, tol));
  } else {
    add(integrate_panel([&f](double t) { return f(t); }, lo, hi, tol));
  }
  if (!std::isfinite(out.value) || !within_tol(out.error, out.value, tol))
    throw TolFailure("finite-interval quadrature missed its tolerance (error " +
                         format_number(out.error) + " on value " + format_number(out.value) + ")",
                     {{hi, out.value}});
  return out;
}

IntegralResult improper_integral(const SymFun& f0, const Interval& interval, const Tolerances& tol,
                                 FinitenessMode mode) {
  tol.validate();
  const Interval& dom = f0.domain();
  if (interval.lo() < dom.lo() || interval.hi() > dom.hi())
    throw DomainError("integration interval must lie inside the function's domain");
  const Interval iv = interval.with_orientation(Orientation::Forward);
  const SymFun f = (iv == dom.with_orientation(Orientation::Forward)) ? f0 : f0.restricted(iv);
  const auto eval = [&f](double t) { return f(t); };

  IntegralResult res;
  const double lo = iv.lo(), hi = iv.hi();
  const double anchor = iv.infinite() ? lo + std::max(1.0, std::abs(lo)) : lo + 0.5 * (hi - lo);

  struct Side {
    EndpointSide side;
    double endpoint;
    std::optional<bool> exact;  // exact convergence decision, if used
  };
  Side sides[2] = {{EndpointSide::Left, lo, {}}, {EndpointSide::Right, hi, {}}};
  for (Side& s : sides) {
    auto lt = f.asymptote(s.side);
    if (mode == FinitenessMode::Auto && lt)
      s.exact = integrable(with_measure(*lt, f.endpoint_kind(s.side)).scale);
  }
  const bool all_exact = sides[0].exact && sides[1].exact;
  res.decided_by = all_exact ? IntegralResult::DecidedBy::Symbolic
                             : IntegralResult::DecidedBy::NumericEvidence;

  // Exact divergence wins; collect a short evidence trail at the offending end.
  for (const Side& s : sides) {
    if (s.exact && !*s.exact) {
      try {
        Approach ap = approach(eval, anchor, s.endpoint, tol, kEvidencePanels);
        res.evaluations += ap.evaluations;
        res.cutoff_history = std::move(ap.history);
      } catch (const std::exception&) {
      }
      res.outcome = ExtendedValue::divergent();
      return res;
    }
  }

  double total = 0, err = 0;
  bool met = true;
  for (const Side& s : sides) {
    const bool left = s.side == EndpointSide::Left;
    const double a = left ? lo : anchor, b = left ? anchor : hi;
    if (s.exact && !std::isinf(s.endpoint)) {
      PartialIntegral p = partial_integral_detailed(f, a, b, tol);
      total += p.value;
      err += p.error;
      res.evaluations += p.evaluations;
      continue;
    }
    Approach ap = approach(eval, anchor, s.endpoint, tol, tol.max_doublings);
    res.evaluations += ap.evaluations;
    res.cutoff_history.insert(res.cutoff_history.end(), ap.history.begin(), ap.history.end());
    if (s.exact) {
      if (ap.verdict != Approach::Verdict::Converged)
        throw TolFailure("convergent tail did not settle within " +
                             std::to_string(tol.max_doublings) + " cutoff doublings",
                         res.cutoff_history);
    } else if (ap.verdict == Approach::Verdict::Diverged) {
      res.outcome = ExtendedValue::divergent();
      return res;
    } else if (ap.verdict == Approach::Verdict::Undecided) {
      met = false;
    }
    total += ap.value;
    err += ap.error;
  }
  if (!std::isfinite(total) || !std::isfinite(err)) {
    if (all_exact) throw TolFailure("non-finite quadrature value", res.cutoff_history);
    res.outcome = ExtendedValue::divergent();
    return res;
  }
  res.outcome = ExtendedValue::finite(total, err);
  res.tolerance_met = met;
  return res;
}

}  // namespace lpq

namespace lpq {

CumulativeIntegral::CumulativeIntegral(const SymFun& w, const Interval& interval,
                                       EndpointSide anchor, std::vector<double> mesh,
                                       const Tolerances& tol, FinitenessMode mode)
    : w_(w), iv_(interval.with_orientation(Orientation::Forward)), anchor_(anchor),
      mesh_(std::move(mesh)), tol_(tol), mode_(mode) {
  if (mesh_.empty()) throw std::invalid_argument("CumulativeIntegral needs a non-empty mesh");
  if (!std::is_sorted(mesh_.begin(), mesh_.end()) || !(mesh_.front() > iv_.lo()) ||
      !(mesh_.back() < iv_.hi()))
    throw DomainError("cumulative mesh must be sorted and inside the open interval");
  const std::size_t n = mesh_.size();
  values_.assign(n, 0.0);
  const bool left = anchor_ == EndpointSide::Left;
  const double first = left ? direct(iv_.lo(), mesh_.front()) : direct(mesh_.back(), iv_.hi());
  if (std::isinf(first)) {
    divergent_ = true;
    values_.assign(n, kInf);
    return;
  }
  if (left) {
    values_[0] = first;
    for (std::size_t j = 1; j < n; ++j) values_[j] = values_[j - 1] + panel(mesh_[j - 1], mesh_[j]);
  } else {
    values_[n - 1] = first;
    for (std::size_t j = n - 1; j-- > 0;) values_[j] = values_[j + 1] + panel(mesh_[j], mesh_[j + 1]);
  }
}

double CumulativeIntegral::panel(double a, double b) const {
  if (!(b > a)) return 0.0;
  // Overflow of the integrand saturates to +inf rather than failing.
  const PartialIntegral p = integrate_panel([this](double t) { return w_(t); }, a, b, tol_);
  if (!std::isfinite(p.value)) return kInf;
  if (!within_tol(p.error, p.value, tol_))
    throw TolFailure("cumulative panel missed its tolerance", {{b, p.value}});
  return p.value;
}

double CumulativeIntegral::direct(double a, double b) const {
  if (!(a < b)) return 0.0;
  IntegralResult r = improper_integral(w_, Interval(a, b), tol_, mode_);
  return r.outcome.as_double();
}

double CumulativeIntegral::at(double tau) const {
  if (tau < iv_.lo() || tau > iv_.hi()) throw DomainError("tau outside the interval");
  if (divergent_) return kInf;
  if (anchor_ == EndpointSide::Left) {
    if (tau == iv_.lo()) return 0.0;
    if (tau < mesh_.front()) return direct(iv_.lo(), tau);
    if (std::isinf(tau)) return total();
    auto it = std::upper_bound(mesh_.begin(), mesh_.end(), tau);
    const std::size_t j = static_cast<std::size_t>(it - mesh_.begin()) - 1;
    const double base = values_[j];
    return base + panel(mesh_[j], tau);
  }
  if (tau == iv_.hi()) return 0.0;
  if (tau > mesh_.back()) return direct(tau, iv_.hi());
  if (tau == iv_.lo()) return total();
  auto it = std::lower_bound(mesh_.begin(), mesh_.end(), tau);
  const std::size_t j = static_cast<std::size_t>(it - mesh_.begin());
  const double base = values_[j];
  return base + panel(tau, mesh_[j]);
}

double CumulativeIntegral::total() const {
  if (!total_) {
    if (divergent_) {
      total_ = kInf;
    } else if (anchor_ == EndpointSide::Left) {
      const double rest = direct(mesh_.back(), iv_.hi());
      total_ = values_.back() + rest;
    } else {
      const double rest = direct(iv_.lo(), mesh_.front());
      total_ = values_.front() + rest;
    }
  }
  return *total_;
}

}  // namespace lpq
