#include "lpq/cylinder.hpp"

namespace lpq {

namespace {

void validate(const CylinderSpec& spec) {
  if (spec.fiber_dim < 1) throw ValidationError("fiber_dim must be at least 1");
  if (spec.degree < 1 || spec.degree > spec.fiber_dim + 1)
    throw ValidationError("degree must satisfy 1 <= j <= n+1 (got j=" + std::to_string(spec.degree) +
                          ", n=" + std::to_string(spec.fiber_dim) + ")");
}

std::pair<double, double> exponents(const CylinderSpec& spec) {
  const double n = spec.fiber_dim, j = spec.degree;
  return {n / spec.exps.p() - j + 1, n / spec.exps.q() - j + 1};
}

std::optional<HardyResult> chi(const HardyProblem& pr, Orientation o, const Tolerances& tol,
                               std::string& failure) {
  HardyProblem oriented = pr;
  oriented.interval = pr.interval.with_orientation(o);
  try {
    return hardy_constant(oriented, tol);
  } catch (const TolFailure& e) {
    failure = e.what();
    return std::nullopt;
  }
}

std::string echo(const std::optional<HardyResult>& r, const std::string& failure) {
  return r ? describe(r->chi) : "failed: " + failure;
}

}  // namespace

std::pair<SymFun, SymFun> cylinder_weights(const CylinderSpec& spec) {
  validate(spec);
  const auto [e0, e1] = exponents(spec);
  return {power(spec.warp, e0), power(spec.warp, e1)};
}

CylinderReport classify_cylinder(const CylinderSpec& spec, const Tolerances& tol) {
  auto [w0, w1] = cylinder_weights(spec);
  const auto [e0, e1] = exponents(spec);
  CylinderReport rep{w0, w1, e0, e1, std::nullopt, std::nullopt, {}, {}, false};

  if (!spec.fiber_pairing_nontrivial) {
    rep.hj_relative = Verdict::unknown(rules::kCylinderNoHypothesis);
    rep.hj_relative.with("reason", "hypothesis not asserted");
    rep.torsion = rep.hj_relative;
    return rep;
  }

  const HardyProblem pr{spec.exps, spec.interval, w0, w1};
  std::string fwd_fail, bwd_fail;
  rep.chi_forward = chi(pr, Orientation::Forward, tol, fwd_fail);
  rep.chi_backward = chi(pr, Orientation::Reversed, tol, bwd_fail);
  const bool fwd_div = rep.chi_forward && rep.chi_forward->chi.is_divergent();
  const bool bwd_div = rep.chi_backward && rep.chi_backward->chi.is_divergent();

  if (fwd_div)
    rep.hj_relative = Verdict::nontrivial(rules::kCylinderRelative);
  else if (rep.chi_forward)
    rep.hj_relative = Verdict::unknown(rules::kCylinderNoConverse);
  else
    rep.hj_relative = Verdict::unknown(rules::kCylinderRelative);
  rep.hj_relative.with("chi_forward", echo(rep.chi_forward, fwd_fail));

  if (fwd_div && bwd_div) {
    rep.torsion = Verdict::nontrivial(rules::kCylinderTorsion);
    rep.hj_dim_infinite = true;
  } else if ((rep.chi_forward && !fwd_div) || (rep.chi_backward && !bwd_div)) {
    rep.torsion = Verdict::unknown(rules::kCylinderNoConverse);
  } else {
    rep.torsion = Verdict::unknown(rules::kCylinderTorsion);
  }
  rep.torsion.with("chi_forward", echo(rep.chi_forward, fwd_fail))
      .with("chi_backward", echo(rep.chi_backward, bwd_fail));
  if (rep.hj_dim_infinite) rep.torsion.with("dimension", "infinite");
  return rep;
}

}  // namespace lpq
