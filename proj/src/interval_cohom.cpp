#include "lpq/interval_cohom.hpp"

#include <type_traits>

#include "hardy_detail.hpp"

namespace lpq {

namespace {

// A quantity that either was computed or failed numerically.
template <class T>
struct Outcome {
  std::optional<T> value;
  std::string failure;

  bool known() const { return value.has_value(); }
};

template <class T, class F>
Outcome<T> attempt(F&& f) {
  try {
    return {f(), {}};
  } catch (const TolFailure& e) {
    return {std::nullopt, e.what()};
  }
}

struct Quantities {
  Outcome<HardyResult> fwd, bwd;
  Outcome<ExtendedValue> v1_conj, v0_p;
};

Outcome<HardyResult> chi(const HardyProblem& pr, Orientation o, const Tolerances& tol) {
  HardyProblem oriented = pr;
  oriented.interval = pr.interval.with_orientation(o);
  return attempt<HardyResult>([&] { return hardy_constant(oriented, tol); });
}

void compute_chis(const HardyProblem& pr, const Tolerances& tol, Quantities& q) {
  q.fwd = chi(pr, Orientation::Forward, tol);
  q.bwd = chi(pr, Orientation::Reversed, tol);
}

void compute_integrals(const HardyProblem& pr, const Tolerances& tol, Quantities& q) {
  HardyProblem fwd = pr;
  fwd.interval = pr.interval.with_orientation(Orientation::Forward);
  const detail::Setup st = detail::make_setup(fwd);
  q.v1_conj = attempt<ExtendedValue>([&] { return improper_integral(st.w1, st.iv, tol).outcome; });
  q.v0_p = attempt<ExtendedValue>([&] { return improper_integral(st.w0, st.iv, tol).outcome; });
}

template <class T>
void echo(Verdict& v, const std::string& key, const Outcome<T>& o) {
  if (!o.known()) {
    v.with(key, "failed: " + o.failure);
    return;
  }
  if constexpr (std::is_same_v<T, HardyResult>)
    v.with(key, describe(o.value->chi));
  else
    v.with(key, describe(*o.value));
}

bool finite(const Outcome<HardyResult>& o) { return o.known() && o.value->chi.is_finite(); }
bool divergent(const Outcome<HardyResult>& o) { return o.known() && o.value->chi.is_divergent(); }
bool finite(const Outcome<ExtendedValue>& o) { return o.known() && o.value->is_finite(); }
bool divergent(const Outcome<ExtendedValue>& o) { return o.known() && o.value->is_divergent(); }

H1Verdicts h1_from(const Quantities& q) {
  H1Verdicts out;
  if (finite(q.fwd))
    out.relative = Verdict::trivial(rules::kRelativeH1);
  else if (divergent(q.fwd))
    out.relative = Verdict::nontrivial(rules::kRelativeH1);
  else
    out.relative = Verdict::unknown(rules::kRelativeH1);
  echo(out.relative, "chi_forward", q.fwd);

  if (finite(q.fwd) || finite(q.bwd))
    out.absolute = Verdict::trivial(rules::kAbsoluteH1);
  else if (divergent(q.fwd) && divergent(q.bwd))
    out.absolute = Verdict::nontrivial(rules::kAbsoluteH1);
  else
    out.absolute = Verdict::unknown(rules::kAbsoluteH1);
  echo(out.absolute, "chi_forward", q.fwd);
  echo(out.absolute, "chi_backward", q.bwd);
  return out;
}

ReducedVerdicts reduced_from(const Quantities& q) {
  ReducedVerdicts out;
  out.absolute = Verdict::trivial(rules::kAbsoluteReduced);
  if (divergent(q.v1_conj) || finite(q.v0_p)) {
    out.relative = Verdict::trivial(rules::kRelativeReduced);
  } else if (finite(q.v1_conj) && divergent(q.v0_p)) {
    out.relative = Verdict::nontrivial(rules::kRelativeReduced);
    out.relative_dim_one = true;
  } else {
    out.relative = Verdict::unknown(rules::kRelativeReduced);
  }
  echo(out.relative, "integral_v1_pow_minus_q_conj", q.v1_conj);
  echo(out.relative, "integral_v0_pow_p", q.v0_p);
  if (out.relative_dim_one) out.relative.with("dimension", "1");
  return out;
}

TorsionVerdicts torsion_from(const H1Verdicts& h1, const ReducedVerdicts& red) {
  TorsionVerdicts out;
  out.absolute = Verdict{h1.absolute.status, rules::kAbsoluteTorsion, {}};
  out.absolute.with("h1_absolute", to_string(h1.absolute.status))
      .with("h1bar_absolute", to_string(red.absolute.status));

  const Status h = h1.relative.status, r = red.relative.status;
  if (h == Status::Trivial) {
    out.relative = Verdict::trivial(rules::kRelativeTorsion);
  } else if (h == Status::Nontrivial && r == Status::Trivial) {
    out.relative = Verdict::nontrivial(rules::kRelativeTorsion);
  } else if (h == Status::Nontrivial && r == Status::Nontrivial) {
    // H^1 is then a line and its reduced quotient is nonzero, so nothing is
    // left for the closure of zero.
    out.relative = Verdict::trivial(rules::kRelativeReducedDim);
  } else {
    out.relative = Verdict::unknown(rules::kRelativeTorsion);
  }
  out.relative.with("h1_relative", to_string(h)).with("h1bar_relative", to_string(r));
  return out;
}

}  // namespace

H1Verdicts classify_h1(const HardyProblem& problem, const Tolerances& tol) {
  Quantities q;
  compute_chis(problem, tol, q);
  return h1_from(q);
}

ReducedVerdicts classify_reduced(const HardyProblem& problem, const Tolerances& tol) {
  Quantities q;
  compute_integrals(problem, tol, q);
  return reduced_from(q);
}

TorsionVerdicts classify_torsion(const HardyProblem& problem, const Tolerances& tol) {
  Quantities q;
  compute_chis(problem, tol, q);
  compute_integrals(problem, tol, q);
  return torsion_from(h1_from(q), reduced_from(q));
}

IntervalReport classify_interval(const HardyProblem& problem, const Tolerances& tol) {
  Quantities q;
  compute_chis(problem, tol, q);
  compute_integrals(problem, tol, q);
  const H1Verdicts h1 = h1_from(q);
  const ReducedVerdicts red = reduced_from(q);
  const TorsionVerdicts tor = torsion_from(h1, red);

  IntervalReport rep;
  rep.h1_relative = h1.relative;
  rep.h1_absolute = h1.absolute;
  rep.h1bar_absolute = red.absolute;
  rep.h1bar_relative = red.relative;
  rep.torsion_absolute = tor.absolute;
  rep.torsion_relative = tor.relative;
  rep.relative_dim_one = red.relative_dim_one;
  rep.chi_forward = q.fwd.value;
  rep.chi_backward = q.bwd.value;
  rep.v1_conj_integral = q.v1_conj.value;
  rep.v0_p_integral = q.v0_p.value;
  return rep;
}

}  // namespace lpq
