#include "lpq/asymptotics.hpp"

#include <array>
#include <cmath>

#include "lpq/core.hpp"

namespace lpq {
namespace {

int sign_eps(double x) {
  if (x > kExponentEps) return 1;
  if (x < -kExponentEps) return -1;
  return 0;
}

bool is_zero(double x) { return sign_eps(x) == 0; }

}  // namespace

bool Scale::is_constant() const { return trend(*this) == 0; }

Scale pow(const Scale& s, double e) { return {s.delta * e, s.alpha * e, s.gamma * e, s.eta * e}; }

int trend(const Scale& s) {
  for (double x : std::array{s.delta, s.alpha, s.gamma, s.eta})
    if (int sg = sign_eps(x)) return sg;
  return 0;
}

bool integrable(const Scale& g) {
  const std::array<double, 4> lhs{g.delta, g.alpha, g.gamma, g.eta};
  const std::array<double, 4> rhs{0.0, -1.0, -1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    int sg = sign_eps(lhs[i] - rhs[i]);
    if (sg != 0) return sg < 0;
  }
  return false;
}

LeadingTerm pow(const LeadingTerm& t, double e) { return {std::pow(t.coeff, e), pow(t.scale, e)}; }

LeadingTerm with_measure(const LeadingTerm& g, EndpointKind kind) {
  if (kind == EndpointKind::Infinite) return g;
  LeadingTerm out = g;
  out.scale.alpha -= 2.0;
  return out;
}

LeadingTerm integral_leading_term(const LeadingTerm& g) {
  const Scale& s = g.scale;
  if (!is_zero(s.delta)) return {g.coeff / std::abs(s.delta), s};
  if (!is_zero(s.alpha + 1.0))
    return {g.coeff / std::abs(s.alpha + 1.0), {0.0, s.alpha + 1.0, s.gamma, s.eta}};
  if (!is_zero(s.gamma + 1.0))
    return {g.coeff / std::abs(s.gamma + 1.0), {0.0, 0.0, s.gamma + 1.0, s.eta}};
  if (!is_zero(s.eta + 1.0))
    return {g.coeff / std::abs(s.eta + 1.0), {0.0, 0.0, 0.0, s.eta + 1.0}};
  throw DomainError("asymptotic integral leaves the supported scale class (ln ln ln growth)");
}

double limit_value(const LeadingTerm& t) {
  switch (trend(t.scale)) {
    case -1: return 0.0;
    case 1: return kInf;
    default: return t.coeff;
  }
}

std::string describe(const Scale& s) {
  std::string out;
  auto add = [&](const char* name, double v) {
    if (is_zero(v)) return;
    if (!out.empty()) out += " * ";
    out += name;
    out += "^" + format_number(v);
  };
  if (!is_zero(s.delta)) out = "exp(" + format_number(s.delta) + "*u)";
  add("u", s.alpha);
  add("(ln u)", s.gamma);
  add("(ln ln u)", s.eta);
  return out.empty() ? "1" : out;
}

}  // namespace lpq
