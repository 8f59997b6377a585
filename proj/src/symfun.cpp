#include "lpq/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <tuple>

namespace lpq {
namespace {

// log of t^alpha (ln t)^gamma exp(delta t) for t > 0 (t > 1 when gamma != 0).
double log_factor(double alpha, double gamma, double delta, double t) {
  double v = delta * t;
  if (alpha != 0.0) v += alpha * std::log(t);
  if (gamma != 0.0) v += gamma * std::log(std::log(t));
  return v;
}

// Value of a signed monomial including the degenerate points t = 0 and t = 1.
double monomial_value(double c, double alpha, double gamma, double delta, double t) {
  if (c == 0.0) return 0.0;
  if (alpha != 0.0 && t <= 0.0) {
    if (t < 0.0) return std::nan("");
    return alpha > 0 ? 0.0 : std::copysign(kInf, c);
  }
  if (gamma != 0.0) {
    if (t < 1.0) return std::nan("");
    if (t == 1.0) return gamma > 0 ? 0.0 : std::copysign(kInf, c);
  }
  double mag = std::exp(std::log(std::abs(c)) + log_factor(alpha, gamma, delta, t));
  return std::copysign(mag, c);
}

using Key = std::tuple<double, double, double>;

// Sum coefficients of identical exponent triples, preserving first appearance.
std::vector<AsymptoticMonomial> merge_terms(const std::vector<AsymptoticMonomial>& in) {
  std::vector<AsymptoticMonomial> out;
  for (const auto& m : in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const AsymptoticMonomial& o) {
      return o.alpha == m.alpha && o.gamma == m.gamma && o.delta == m.delta;
    });
    if (it == out.end())
      out.push_back(m);
    else
      it->coeff += m.coeff;
  }
  return out;
}

// Leading term of a signed sum at +inf, ignoring groups that cancel.
std::optional<LeadingTerm> signed_leading_at_infinity(std::vector<AsymptoticMonomial> terms) {
  std::map<Key, double, std::greater<>> groups;  // descending lexicographic (delta, alpha, gamma)
  for (const auto& m : terms) groups[{m.delta, m.alpha, m.gamma}] += m.coeff;
  double scale = 0;
  for (const auto& m : terms) scale = std::max(scale, std::abs(m.coeff));
  for (auto& [k, c] : groups) {
    if (std::abs(c) <= 1e-13 * scale) continue;
    auto [d, a, g] = k;
    return LeadingTerm{std::abs(c), Scale{d, a, g, 0.0}};
  }
  return LeadingTerm{0.0, Scale{}};
}

// Leading term near a finite left endpoint lo, local variable u = 1/(t - lo).
std::optional<LeadingTerm> signed_leading_at_left(const std::vector<AsymptoticMonomial>& terms,
                                                  double lo) {
  const bool at_zero = lo == 0.0;
  const bool at_one = lo == 1.0 && std::any_of(terms.begin(), terms.end(),
                                                [](const auto& m) { return m.gamma != 0.0; });
  if (!at_zero && !at_one) {
    double v = 0;
    for (const auto& m : terms) v += monomial_value(m.coeff, m.alpha, m.gamma, m.delta, lo);
    return LeadingTerm{std::abs(v), Scale{}};
  }
  // Local exponent kappa of each term: t^alpha ~ (t-0)^alpha, (ln t)^gamma ~ (t-1)^gamma.
  std::map<double, double> groups;  // kappa -> summed coefficient
  for (const auto& m : terms) {
    double kappa = at_zero ? m.alpha : m.gamma;
    double c = at_zero ? m.coeff : m.coeff * std::exp(m.delta);
    groups[kappa] += c;
  }
  double scale = 0;
  for (auto& [k, c] : groups) scale = std::max(scale, std::abs(c));
  for (auto& [kappa, c] : groups) {
    if (std::abs(c) <= 1e-13 * scale) continue;
    return LeadingTerm{std::abs(c), Scale{0.0, -kappa, 0.0, 0.0}};
  }
  return LeadingTerm{0.0, Scale{}};
}

bool is_nonneg_integer(double s) { return s >= 0 && std::floor(s) == s && s < 1e6; }

}  // namespace

double AsymptoticMonomial::evaluate(double t) const {
  return monomial_value(coeff, alpha, gamma, delta, t);
}

LeadingTerm leading_at_infinity(const AsymptoticMonomial& m) {
  return {m.coeff, Scale{m.delta, m.alpha, m.gamma, 0.0}};
}

LeadingTerm leading_near_point(const AsymptoticMonomial& m) {
  return {m.coeff, Scale{0.0, -m.alpha, m.gamma, 0.0}};
}

AsymptoticMonomial monomial_of(const LeadingTerm& t, EndpointKind kind) {
  if (kind == EndpointKind::Infinite)
    return {t.coeff, t.scale.alpha, t.scale.gamma, t.scale.delta};
  return {t.coeff, -t.scale.alpha, t.scale.gamma, 0.0};
}

SymFun SymFun::symbolic(std::vector<AsymptoticMonomial> terms, Interval domain) {
  if (terms.empty()) throw ValidationError("function needs at least one term");
  for (const auto& m : terms) {
    if (!(m.coeff > 0) || !std::isfinite(m.coeff))
      throw ValidationError("term coefficients must be positive and finite");
    if (!std::isfinite(m.alpha) || !std::isfinite(m.gamma) || !std::isfinite(m.delta))
      throw ValidationError("term exponents must be finite");
    if (m.alpha != 0.0 && domain.lo() < 0.0)
      throw ValidationError("powers of t require a domain inside [0, inf)");
    if (m.gamma != 0.0 && domain.lo() < 1.0)
      throw ValidationError("powers of ln t require a domain inside [1, inf)");
  }
  SymFun f;
  f.kind_ = Kind::Symbolic;
  f.terms_ = merge_terms(terms);
  f.domain_ = domain.with_orientation(Orientation::Forward);
  auto shared_terms = f.terms_;
  f.eval_ = std::make_shared<const std::function<double(double)>>([shared_terms](double t) {
    double v = 0;
    for (const auto& m : shared_terms) v += m.evaluate(t);
    return v;
  });
  f.compute_symbolic_asymptotes();
  return f;
}

SymFun SymFun::constant(double c, Interval domain) { return symbolic({{c, 0, 0, 0}}, domain); }

SymFun SymFun::numeric(std::function<double(double)> eval, Interval domain,
                       std::optional<LeadingTerm> left, std::optional<LeadingTerm> right,
                       std::optional<SignedFunction> derivative) {
  if (!eval) throw ValidationError("numeric function needs an evaluation callback");
  SymFun f;
  f.kind_ = Kind::NumericWithDeclaredAsymptotics;
  f.domain_ = domain.with_orientation(Orientation::Forward);
  f.eval_ = std::make_shared<const std::function<double(double)>>(std::move(eval));
  f.left_ = left;
  f.right_ = right;
  f.derivative_ = std::move(derivative);
  return f;
}

void SymFun::compute_symbolic_asymptotes() {
  left_ = signed_leading_at_left(terms_, domain_.lo());
  if (domain_.infinite()) {
    right_ = signed_leading_at_infinity(terms_);
  } else {
    right_ = LeadingTerm{(*this)(domain_.hi()), Scale{}};
  }
}

double SymFun::operator()(double t) const { return (*eval_)(t); }

std::optional<LeadingTerm> SymFun::asymptote(EndpointSide side) const {
  return side == EndpointSide::Left ? left_ : right_;
}

EndpointKind SymFun::endpoint_kind(EndpointSide side) const noexcept {
  return side == EndpointSide::Right && domain_.infinite() ? EndpointKind::Infinite
                                                           : EndpointKind::Finite;
}

std::string exact_number(double x) {
  char buf[40];
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string SymFun::to_string() const {
  if (!is_symbolic()) return "<numeric>";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& m = terms_[i];
    std::vector<std::string> parts;
    if (m.coeff != 1.0 || (m.alpha == 0 && m.gamma == 0 && m.delta == 0))
      parts.push_back(exact_number(m.coeff));
    if (m.alpha != 0) parts.push_back(m.alpha == 1 ? "t" : "t^" + exact_number(m.alpha));
    if (m.gamma != 0)
      parts.push_back(m.gamma == 1 ? "(ln t)" : "(ln t)^" + exact_number(m.gamma));
    if (m.delta != 0) parts.push_back("exp(" + exact_number(m.delta) + "*t)");
    if (i) out += " + ";
    for (std::size_t j = 0; j < parts.size(); ++j) out += (j ? " * " : "") + parts[j];
  }
  return out;
}

SymFun SymFun::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) throw ValidationError("scale factor must be positive");
  if (is_symbolic()) {
    auto t = terms_;
    for (auto& m : t) m.coeff *= c;
    return symbolic(t, domain_);
  }
  auto ev = eval_;
  auto scale_lt = [c](std::optional<LeadingTerm> lt) {
    if (lt) lt->coeff *= c;
    return lt;
  };
  std::optional<SignedFunction> d;
  if (derivative_) {
    auto inner = *derivative_;
    d = SignedFunction{[inner, c](double t) { return c * inner(t); }, scale_lt(inner.abs_left),
                       scale_lt(inner.abs_right)};
  }
  return numeric([ev, c](double t) { return c * (*ev)(t); }, domain_, scale_lt(left_),
                 scale_lt(right_), d);
}

SymFun SymFun::times(const SymFun& other) const {
  if (!(domain_.lo() == other.domain_.lo() && domain_.hi() == other.domain_.hi()))
    throw DomainError("product of functions on different domains");
  if (is_symbolic() && other.is_symbolic()) {
    std::vector<AsymptoticMonomial> prod;
    for (const auto& a : terms_)
      for (const auto& b : other.terms_)
        prod.push_back({a.coeff * b.coeff, a.alpha + b.alpha, a.gamma + b.gamma, a.delta + b.delta});
    return symbolic(prod, domain_);
  }
  auto a = eval_;
  auto b = other.eval_;
  auto mul = [](const std::optional<LeadingTerm>& x, const std::optional<LeadingTerm>& y) {
    return x && y ? std::optional<LeadingTerm>(*x * *y) : std::nullopt;
  };
  return numeric([a, b](double t) { return (*a)(t) * (*b)(t); }, domain_, mul(left_, other.left_),
                 mul(right_, other.right_));
}

SymFun SymFun::reflected() const {
  if (domain_.infinite()) throw DomainError("reflection needs a finite domain");
  const double s = domain_.lo() + domain_.hi();
  auto ev = eval_;
  std::optional<SignedFunction> d;
  if (derivative_) {
    auto inner = *derivative_;
    d = SignedFunction{[inner, s](double t) { return -inner(s - t); }, inner.abs_right,
                       inner.abs_left};
  }
  return numeric([ev, s](double t) { return (*ev)(s - t); }, domain_, right_, left_, d);
}

SymFun SymFun::as_numeric() const {
  if (!is_symbolic()) return *this;
  return numeric(*eval_, domain_, left_, right_, derivative(*this));
}

SymFun SymFun::restricted(const Interval& sub) const {
  if (sub.lo() < domain_.lo() || sub.hi() > domain_.hi())
    throw DomainError("restriction must be a sub-interval of the domain");
  if (is_symbolic()) return symbolic(terms_, sub);
  // Endpoint behaviour only carries over for endpoints that are kept.
  auto keep_or_value = [&](double e, bool same, const std::optional<LeadingTerm>& lt) {
    if (same) return lt;
    return std::optional<LeadingTerm>(LeadingTerm{(*eval_)(e), Scale{}});
  };
  SymFun f = *this;
  f.domain_ = sub.with_orientation(Orientation::Forward);
  f.left_ = keep_or_value(sub.lo(), sub.lo() == domain_.lo(), left_);
  f.right_ = keep_or_value(sub.hi(), sub.hi() == domain_.hi(), right_);
  return f;
}

SymFun SymFun::without_asymptotes() const {
  SymFun f = as_numeric();
  f.left_.reset();
  f.right_.reset();
  return f;
}

double evaluate(const SymFun& f, double t) {
  const auto& d = f.domain();
  if (!(t >= d.lo() && t <= d.hi()) || std::isinf(t))
    throw DomainError("evaluation point " + format_number(t) + " outside domain");
  double v = f(t);
  if (!(v > 0) || !std::isfinite(v))
    throw DomainError("function is not finite and positive at " + format_number(t));
  return v;
}

SignedFunction derivative(const SymFun& f) {
  if (!f.is_symbolic()) {
    if (!f.derivative_callback())
      throw MissingDerivative("numeric function has no derivative callback");
    return *f.derivative_callback();
  }
  std::vector<AsymptoticMonomial> d;
  for (const auto& m : f.terms()) {
    // d/dt c t^a L^g e^{dt} = c e^{dt} (d t^a L^g + a t^{a-1} L^g + g t^{a-1} L^{g-1})
    if (m.delta != 0) d.push_back({m.coeff * m.delta, m.alpha, m.gamma, m.delta});
    if (m.alpha != 0) d.push_back({m.coeff * m.alpha, m.alpha - 1, m.gamma, m.delta});
    if (m.gamma != 0) d.push_back({m.coeff * m.gamma, m.alpha - 1, m.gamma - 1, m.delta});
  }
  d = merge_terms(d);
  SignedFunction out;
  out.eval = [d](double t) {
    double v = 0;
    for (const auto& m : d) v += monomial_value(m.coeff, m.alpha, m.gamma, m.delta, t);
    return v;
  };
  out.abs_left = signed_leading_at_left(d, f.domain().lo());
  if (f.domain().infinite()) {
    out.abs_right = signed_leading_at_infinity(d);
  } else {
    out.abs_right = LeadingTerm{std::abs(out.eval(f.domain().hi())), Scale{}};
  }
  return out;
}

SymFun power(const SymFun& f, double s) {
  if (!std::isfinite(s)) throw ValidationError("power exponent must be finite");
  if (f.is_symbolic()) {
    if (s == 0.0) return SymFun::constant(1.0, f.domain());
    if (f.terms().size() == 1) {
      const auto& m = f.terms().front();
      return SymFun::symbolic({{std::pow(m.coeff, s), m.alpha * s, m.gamma * s, m.delta * s}},
                              f.domain());
    }
    if (!is_nonneg_integer(s))
      throw MultiTermPower("real power " + format_number(s) + " of a sum of " +
                           std::to_string(f.terms().size()) + " terms");
    SymFun acc = f;
    for (int i = 1; i < static_cast<int>(s); ++i) acc = acc.times(f);
    return acc;
  }
  auto lt_pow = [s](std::optional<LeadingTerm> lt) {
    return lt ? std::optional<LeadingTerm>(pow(*lt, s)) : std::nullopt;
  };
  return SymFun::numeric([f, s](double t) { return std::pow(f(t), s); }, f.domain(),
                         lt_pow(f.asymptote(EndpointSide::Left)),
                         lt_pow(f.asymptote(EndpointSide::Right)));
}

ConvergenceDecision integral_converges(const SymFun& f, EndpointSide at) {
  auto lt = f.asymptote(at);
  if (!lt)
    throw std::invalid_argument(
        "integral_converges: no declared asymptotics; use numeric evidence from quad");
  const EndpointKind kind = f.endpoint_kind(at);
  const bool ok = integrable(with_measure(*lt, kind).scale);
  ConvergenceDecision d;
  d.tag = ok ? ConvergenceDecision::Tag::Converges : ConvergenceDecision::Tag::Diverges;
  d.dominant_term = monomial_of(*lt, kind);
  const auto& m = d.dominant_term;
  if (kind == EndpointKind::Infinite) {
    d.reason = "dominant term at +inf has (delta, alpha, gamma) = (" + format_number(m.delta) +
               ", " + format_number(m.alpha) + ", " + format_number(m.gamma) + ")";
  } else {
    d.reason = "dominant local exponent " + format_number(m.alpha) + " at finite endpoint " +
               format_number(at == EndpointSide::Left ? f.domain().lo() : f.domain().hi());
    if (m.gamma != 0) d.reason += " with log exponent " + format_number(m.gamma);
  }
  d.reason += ok ? ": converges" : ": diverges";
  return d;
}

const char* to_string(ConvergenceDecision::Tag t) {
  return t == ConvergenceDecision::Tag::Converges ? "Converges" : "Diverges";
}

}  // namespace lpq
