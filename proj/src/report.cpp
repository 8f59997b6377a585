#include "lpq/report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "lpq/cylinder.hpp"
#include "lpq/hardy.hpp"
#include "lpq/interval_cohom.hpp"
#include "lpq/surface.hpp"

namespace lpq::report {

namespace {

const Interval kHalfLine(0, kInf);

[[noreturn]] void reject(const std::string& field, const std::string& msg) {
  throw ValidationError("field '" + field + "': " + msg);
}

void check_fields(const Json& in, const std::set<std::string>& allowed, const std::string& where) {
  if (!in.is_object()) reject(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [key, value] : in.items()) {
    (void)value;
    if (!allowed.count(key)) reject(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const Json& require(const Json& in, const std::string& key) {
  if (!in.contains(key)) reject(key, "missing");
  return in.at(key);
}

double real(const Json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") return kInf;
  reject(field, "expected a number");
}

double finite_real(const Json& v, const std::string& field) {
  const double x = real(v, field);
  if (!std::isfinite(x)) reject(field, "expected a finite number");
  return x;
}

int integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) reject(field, "expected an integer");
  const auto x = v.get<long long>();
  if (x < -1000000 || x > 1000000) reject(field, "out of range");
  return static_cast<int>(x);
}

std::string text(const Json& v, const std::string& field) {
  if (!v.is_string()) reject(field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> reals(const Json& v, const std::string& field) {
  if (!v.is_array()) reject(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(finite_real(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// Runs f, turning any library error into a ValidationError on `field`.
template <class F>
auto guarded(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    reject(field, e.what());
  } catch (const Error& e) {
    reject(field, e.what());
  } catch (const std::invalid_argument& e) {
    reject(field, e.what());
  }
}

Tolerances parse_tolerances(const Json& in) {
  Tolerances tol;
  if (!in.contains("tolerances")) return tol;
  const Json& t = in.at("tolerances");
  check_fields(t, {"rel_tol", "abs_tol", "max_doublings", "divergence_growth", "sup_grid_points"},
               "tolerances");
  if (t.contains("rel_tol")) tol.rel_tol = finite_real(t.at("rel_tol"), "tolerances.rel_tol");
  if (t.contains("abs_tol")) tol.abs_tol = finite_real(t.at("abs_tol"), "tolerances.abs_tol");
  if (t.contains("max_doublings"))
    tol.max_doublings = integer(t.at("max_doublings"), "tolerances.max_doublings");
  if (t.contains("divergence_growth"))
    tol.divergence_growth = finite_real(t.at("divergence_growth"), "tolerances.divergence_growth");
  if (t.contains("sup_grid_points"))
    tol.sup_grid_points = integer(t.at("sup_grid_points"), "tolerances.sup_grid_points");
  guarded("tolerances", [&] { tol.validate(); });
  return tol;
}

std::string parse_schema(const Json& in) {
  if (!in.contains("schema_version")) return kSchemaVersion;
  const std::string v = text(in.at("schema_version"), "schema_version");
  if (v != kSchemaVersion) reject("schema_version", "unsupported version '" + v + "'");
  return v;
}

Command parse_kind(const Json& in, Command expected) {
  if (!in.contains("kind")) return expected;
  const std::string k = text(in.at("kind"), "kind");
  const auto c = parse_command(k);
  if (!c || *c != expected)
    reject("kind", "'" + k + "' does not match the command (expected '" + to_string(expected) + "')");
  return *c;
}

// Typed problems, rebuilt from the validated file.

Interval interval_of(const ProblemFile& pf) { return Interval(pf.lo, pf.hi); }

HardyProblem hardy_of(const ProblemFile& pf) {
  const Interval iv = interval_of(pf);
  return {make_exponents(pf.p, pf.q), iv, SymFun::parse(pf.v0, iv), SymFun::parse(pf.v1, iv)};
}

CylinderSpec cylinder_of(const ProblemFile& pf) {
  const Interval iv = interval_of(pf);
  return {SymFun::parse(pf.f, iv), iv, pf.n, pf.j, make_exponents(pf.p, pf.q), pf.fiber_pairing_nontrivial};
}

SurfaceSpec surface_of(const ProblemFile& pf) {
  return {SymFun::parse(pf.f, kHalfLine), pf.n, pf.j, make_exponents(pf.p, pf.q)};
}

// Serialization of results.

const char* decided_by_name(IntegralResult::DecidedBy d) {
  return d == IntegralResult::DecidedBy::Symbolic ? "Symbolic" : "NumericEvidence";
}

Json history(const CutoffHistory& h) {
  Json out = Json::array();
  for (const auto& [cut, val] : h) out.push_back(Json::array({number(cut), number(val)}));
  return out;
}

Json extended(const ExtendedValue& v) {
  Json out;
  out["tag"] = to_string(v.tag());
  if (v.is_finite()) {
    out["value"] = number(v.value());
    out["error_bound"] = number(v.error_bound());
  }
  return out;
}

Json hardy_json(const HardyResult& r) {
  Json out = extended(r.chi);
  out["regime"] = to_string(r.regime);
  Json am;
  am["kind"] = to_string(r.argmax.kind);
  if (r.argmax.kind == Argmax::Kind::Interior) am["tau"] = number(r.argmax.tau);
  out["argmax"] = am;
  out["decided_by"] = decided_by_name(r.decided_by);
  out["reason"] = r.reason;
  if (!r.evidence.empty()) out["evidence"] = history(r.evidence);
  return out;
}

Json failure_json(const std::string& what, const CutoffHistory& evidence = {}) {
  Json out;
  out["tag"] = "Unknown";
  out["failure"] = what;
  if (!evidence.empty()) out["evidence"] = history(evidence);
  return out;
}

Json optional_hardy(const std::optional<HardyResult>& r) {
  return r ? hardy_json(*r) : failure_json("numeric tolerance not reached");
}

Json verdict_json(const Verdict& v) {
  Json out;
  out["status"] = to_string(v.status);
  out["rule"] = v.rule;
  Json ev = Json::object();
  for (const auto& [k, val] : v.evidence) ev[k] = val;
  out["evidence"] = ev;
  return out;
}

Json base_report(const ProblemFile& pf, Command command) {
  Json out;
  out["command"] = to_string(command);
  out["input"] = echo(pf);
  return out;
}

// One oriented Hardy constant, with TolFailure captured as an Unknown entry.
struct Attempt {
  std::optional<HardyResult> result;
  Json json;
};

Attempt oriented_constant(const HardyProblem& pr, Orientation o, const Tolerances& tol, FinitenessMode mode) {
  HardyProblem oriented = pr;
  oriented.interval = pr.interval.with_orientation(o);
  try {
    HardyResult r = hardy_constant(oriented, tol, mode);
    Json j = hardy_json(r);
    return {std::move(r), std::move(j)};
  } catch (const TolFailure& e) {
    return {std::nullopt, failure_json(e.what(), e.evidence())};
  }
}

Outcome run_hardy(const ProblemFile& pf) {
  const HardyProblem pr = hardy_of(pf);
  Outcome out{base_report(pf, Command::Hardy), kExitOk, {}};
  Attempt fwd = oriented_constant(pr, Orientation::Forward, pf.tol, FinitenessMode::Auto);
  Attempt bwd = oriented_constant(pr, Orientation::Reversed, pf.tol, FinitenessMode::Auto);
  out.report["chi_forward"] = fwd.json;
  out.report["chi_backward"] = bwd.json;
  out.report["verdicts"] = Json::object();
  if (!fwd.result || !bwd.result) out.exit_code = kExitTolFailure;
  if (fwd.result) out.profile = fwd.result->profile;
  return out;
}

Outcome run_oracle(const ProblemFile& pf) {
  const HardyProblem pr = hardy_of(pf);
  Outcome out{base_report(pf, Command::Oracle), kExitOk, {}};
  Attempt exact = oriented_constant(pr, Orientation::Forward, pf.tol, FinitenessMode::Auto);
  Attempt numeric = oriented_constant(pr, Orientation::Forward, pf.tol, FinitenessMode::NumericEvidence);
  out.report["chi_forward"] = exact.json;
  out.report["chi_backward"] = nullptr;
  out.report["verdicts"] = Json::object();

  Json cmp;
  const bool symbolic = exact.result && exact.result->decided_by == IntegralResult::DecidedBy::Symbolic;
  cmp["exact"] = symbolic ? to_string(exact.result->chi.tag()) : "Unavailable";
  cmp["numeric"] = numeric.result ? to_string(numeric.result->chi.tag()) : "Unknown";
  cmp["agree"] = symbolic && numeric.result && exact.result->chi.tag() == numeric.result->chi.tag();
  cmp["numeric_result"] = numeric.json;
  out.report["oracle"] = cmp;
  if (!exact.result || !numeric.result) out.exit_code = kExitTolFailure;
  if (exact.result) out.profile = exact.result->profile;
  return out;
}

Outcome run_interval(const ProblemFile& pf) {
  const IntervalReport r = classify_interval(hardy_of(pf), pf.tol);
  Outcome out{base_report(pf, Command::Interval), kExitOk, {}};
  out.report["chi_forward"] = optional_hardy(r.chi_forward);
  out.report["chi_backward"] = optional_hardy(r.chi_backward);
  Json v;
  v["h1_relative"] = verdict_json(r.h1_relative);
  v["h1_absolute"] = verdict_json(r.h1_absolute);
  v["h1bar_relative"] = verdict_json(r.h1bar_relative);
  v["h1bar_absolute"] = verdict_json(r.h1bar_absolute);
  v["torsion_relative"] = verdict_json(r.torsion_relative);
  v["torsion_absolute"] = verdict_json(r.torsion_absolute);
  out.report["verdicts"] = v;
  out.report["relative_dim_one"] = r.relative_dim_one;
  Json ints;
  ints["v1_pow_minus_q_conj"] = r.v1_conj_integral ? extended(*r.v1_conj_integral) : failure_json("numeric tolerance not reached");
  ints["v0_pow_p"] = r.v0_p_integral ? extended(*r.v0_p_integral) : failure_json("numeric tolerance not reached");
  out.report["integrals"] = ints;
  if (!r.chi_forward || !r.chi_backward || !r.v1_conj_integral || !r.v0_p_integral)
    out.exit_code = kExitTolFailure;
  if (r.chi_forward) out.profile = r.chi_forward->profile;
  return out;
}

Outcome run_cylinder(const ProblemFile& pf) {
  const CylinderReport r = classify_cylinder(cylinder_of(pf), pf.tol);
  Outcome out{base_report(pf, Command::Cylinder), kExitOk, {}};
  const bool computed = pf.fiber_pairing_nontrivial;
  out.report["chi_forward"] = computed ? optional_hardy(r.chi_forward) : Json(nullptr);
  out.report["chi_backward"] = computed ? optional_hardy(r.chi_backward) : Json(nullptr);
  Json v;
  v["hj_relative"] = verdict_json(r.hj_relative);
  v["torsion"] = verdict_json(r.torsion);
  out.report["verdicts"] = v;
  Json w;
  w["v0"] = r.weight0.to_string();
  w["v1"] = r.weight1.to_string();
  w["exponent0"] = number(r.exponent0);
  w["exponent1"] = number(r.exponent1);
  out.report["weights"] = w;
  out.report["hj_dim_infinite"] = r.hj_dim_infinite;
  if (computed && (!r.chi_forward || !r.chi_backward)) out.exit_code = kExitTolFailure;
  if (r.chi_forward) out.profile = r.chi_forward->profile;
  return out;
}

Json surface_fields(const SurfaceReport& r, Json& verdicts) {
  verdicts["torsion_j"] = verdict_json(r.torsion_j);
  verdicts["torsion_all_degrees"] = verdict_json(r.torsion_all_degrees);
  Json extra;
  extra["hypothesis"] = r.hypothesis;
  extra["f_limit"] = to_string(r.f_limit);
  extra["volume"] = r.volume ? extended(*r.volume) : failure_json("numeric tolerance not reached");
  extra["fired_rules"] = r.fired_rules;
  return extra;
}

Outcome run_surface(const ProblemFile& pf) {
  const SurfaceReport r = classify_surface(surface_of(pf), pf.tol);
  Outcome out{base_report(pf, Command::Surface), kExitOk, {}};
  out.report["chi_forward"] = optional_hardy(r.chi0);
  out.report["chi_backward"] = optional_hardy(r.chi_inf);
  Json v;
  const Json extra = surface_fields(r, v);
  out.report["verdicts"] = v;
  out.report["surface"] = extra;
  if (!r.chi0 || !r.chi_inf || !r.volume) out.exit_code = kExitTolFailure;
  if (r.chi0) out.profile = r.chi0->profile;
  return out;
}

Json sweep_cell(const SweepGrid& g, double p, double q, double alpha, std::size_t index) {
  Json row;
  row["index"] = index;
  row["p"] = number(p);
  row["q"] = number(q);
  row["alpha"] = number(alpha);
  std::optional<Exponents> exps;
  try {
    exps = make_exponents(p, q);
  } catch (const OutOfScope& e) {
    row["status"] = "OutOfScope";
    row["error"] = e.what();
    return row;
  }
  try {
    const SurfaceReport r = classify_surface({power_law_profile(alpha), g.n, g.j, *exps}, g.tol);
    const bool complete = r.chi0 && r.chi_inf && r.volume;
    row["status"] = complete ? "Ok" : "TolFailure";
    row["chi0"] = r.chi0 ? to_string(r.chi0->chi.tag()) : "Unknown";
    row["chi_inf"] = r.chi_inf ? to_string(r.chi_inf->chi.tag()) : "Unknown";
    Json v;
    const Json extra = surface_fields(r, v);
    row["f_limit"] = extra["f_limit"];
    row["hypothesis"] = extra["hypothesis"];
    for (const char* key : {"torsion_j", "torsion_all_degrees"}) {
      Json brief;
      brief["status"] = v[key]["status"];
      brief["rule"] = v[key]["rule"];
      row[key] = brief;
    }
  } catch (const TolFailure& e) {
    row["status"] = "TolFailure";
    row["error"] = e.what();
  } catch (const std::exception& e) {
    row["status"] = "Error";
    row["error"] = e.what();
  }
  return row;
}

void flatten(const Json& v, const std::string& path, std::ostringstream& os) {
  if (v.is_object() && !v.empty()) {
    for (const auto& [k, child] : v.items()) flatten(child, path.empty() ? k : path + "." + k, os);
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << path << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Hardy: return "hardy";
    case Command::Interval: return "interval";
    case Command::Cylinder: return "cylinder";
    case Command::Surface: return "surface";
    case Command::Oracle: return "oracle";
    case Command::Sweep: return "sweep";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Hardy, Command::Interval, Command::Cylinder, Command::Surface,
                    Command::Oracle, Command::Sweep})
    if (name == to_string(c)) return c;
  return std::nullopt;
}

ProblemFile parse_problem(const Json& in, Command command) {
  if (command == Command::Sweep) throw ValidationError("sweep grids are parsed with parse_sweep");
  const Command kind = command == Command::Oracle ? Command::Hardy : command;

  std::set<std::string> allowed{"schema_version", "kind", "p", "q", "tolerances"};
  switch (kind) {
    case Command::Hardy:
    case Command::Interval: allowed.insert({"v0", "v1", "interval"}); break;
    case Command::Cylinder: allowed.insert({"f", "interval", "n", "j", "assertions"}); break;
    default: allowed.insert({"f", "n", "j"}); break;
  }
  check_fields(in, allowed, "");

  ProblemFile pf;
  pf.schema_version = parse_schema(in);
  pf.kind = parse_kind(in, kind);
  pf.p = real(require(in, "p"), "p");
  pf.q = real(require(in, "q"), "q");
  guarded("p", [&] { make_exponents(pf.p, pf.q); });
  pf.tol = parse_tolerances(in);

  if (kind != Command::Surface) {
    const Json& iv = require(in, "interval");
    if (!iv.is_array() || iv.size() != 2) reject("interval", "expected [lo, hi]");
    pf.lo = real(iv[0], "interval[0]");
    pf.hi = real(iv[1], "interval[1]");
    guarded("interval", [&] { (void)interval_of(pf); });
  }
  if (kind == Command::Hardy || kind == Command::Interval) {
    pf.v0 = text(require(in, "v0"), "v0");
    pf.v1 = text(require(in, "v1"), "v1");
    const Interval iv = interval_of(pf);
    pf.v0 = guarded("v0", [&] { return SymFun::parse(pf.v0, iv).to_string(); });
    pf.v1 = guarded("v1", [&] { return SymFun::parse(pf.v1, iv).to_string(); });
    return pf;
  }

  pf.f = text(require(in, "f"), "f");
  pf.n = integer(require(in, "n"), "n");
  pf.j = integer(require(in, "j"), "j");
  if (kind == Command::Cylinder) {
    if (in.contains("assertions")) {
      const Json& a = in.at("assertions");
      check_fields(a, {"fiber_pairing_nontrivial"}, "assertions");
      if (a.contains("fiber_pairing_nontrivial")) {
        if (!a.at("fiber_pairing_nontrivial").is_boolean())
          reject("assertions.fiber_pairing_nontrivial", "expected a boolean");
        pf.fiber_pairing_nontrivial = a.at("fiber_pairing_nontrivial").get<bool>();
      }
    }
    pf.f = guarded("f", [&] { return SymFun::parse(pf.f, interval_of(pf)).to_string(); });
    guarded("f", [&] { (void)cylinder_weights(cylinder_of(pf)); });
  } else {
    pf.f = guarded("f", [&] { return SymFun::parse(pf.f, kHalfLine).to_string(); });
    guarded("f", [&] { validate(surface_of(pf)); });
  }
  return pf;
}

SweepGrid parse_sweep(const Json& in) {
  check_fields(in, {"schema_version", "kind", "p", "q", "alpha", "n", "j", "tolerances"}, "");
  SweepGrid g;
  g.schema_version = parse_schema(in);
  parse_kind(in, Command::Sweep);
  g.p = reals(require(in, "p"), "p");
  if (in.contains("q")) g.q = reals(in.at("q"), "q");
  g.alpha = reals(require(in, "alpha"), "alpha");
  g.n = in.contains("n") ? integer(in.at("n"), "n") : 1;
  g.j = in.contains("j") ? integer(in.at("j"), "j") : 1;
  if (g.n < 1) reject("n", "must be at least 1");
  if (g.j < 1 || g.j > g.n + 1) reject("j", "must satisfy 1 <= j <= n+1");
  g.tol = parse_tolerances(in);
  return g;
}

Json echo(const ProblemFile& pf) {
  Json out;
  out["schema_version"] = pf.schema_version;
  out["kind"] = to_string(pf.kind);
  out["p"] = number(pf.p);
  out["q"] = number(pf.q);
  if (pf.kind == Command::Hardy || pf.kind == Command::Interval) {
    out["v0"] = pf.v0;
    out["v1"] = pf.v1;
  } else {
    out["f"] = pf.f;
    out["n"] = pf.n;
    out["j"] = pf.j;
  }
  if (pf.kind != Command::Surface) out["interval"] = Json::array({number(pf.lo), number(pf.hi)});
  if (pf.kind == Command::Cylinder) out["assertions"] = {{"fiber_pairing_nontrivial", pf.fiber_pairing_nontrivial}};
  Json t;
  t["rel_tol"] = number(pf.tol.rel_tol);
  t["abs_tol"] = number(pf.tol.abs_tol);
  t["max_doublings"] = pf.tol.max_doublings;
  t["divergence_growth"] = number(pf.tol.divergence_growth);
  t["sup_grid_points"] = pf.tol.sup_grid_points;
  out["tolerances"] = t;
  return out;
}

Json echo(const SweepGrid& g) {
  Json out;
  out["schema_version"] = g.schema_version;
  out["kind"] = "sweep";
  auto list = [](const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
  };
  out["p"] = list(g.p);
  if (!g.q.empty()) out["q"] = list(g.q);
  out["alpha"] = list(g.alpha);
  out["n"] = g.n;
  out["j"] = g.j;
  Json t;
  t["rel_tol"] = number(g.tol.rel_tol);
  t["abs_tol"] = number(g.tol.abs_tol);
  t["max_doublings"] = g.tol.max_doublings;
  t["divergence_growth"] = number(g.tol.divergence_growth);
  t["sup_grid_points"] = g.tol.sup_grid_points;
  out["tolerances"] = t;
  return out;
}

Outcome run(Command command, const ProblemFile& problem) {
  switch (command) {
    case Command::Hardy: return run_hardy(problem);
    case Command::Oracle: return run_oracle(problem);
    case Command::Interval: return run_interval(problem);
    case Command::Cylinder: return run_cylinder(problem);
    case Command::Surface: return run_surface(problem);
    case Command::Sweep: break;
  }
  throw ValidationError("sweep grids run through run_sweep");
}

Outcome run_sweep(const SweepGrid& g, unsigned threads) {
  struct Cell {
    double p, q, alpha;
  };
  std::vector<Cell> cells;
  for (double p : g.p) {
    const std::vector<double> qs = g.q.empty() ? std::vector<double>{p} : g.q;
    for (double q : qs)
      for (double a : g.alpha) cells.push_back({p, q, a});
  }

  std::vector<Json> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      rows[i] = sweep_cell(g, cells[i].p, cells[i].q, cells[i].alpha, i);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Outcome out;
  out.report["command"] = "sweep";
  out.report["input"] = echo(g);
  out.report["rows"] = Json::array();
  for (auto& r : rows) out.report["rows"].push_back(std::move(r));
  return out;
}

Json number(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string render(const Json& report, Format format) {
  if (format == Format::Json) return report.dump(2) + "\n";
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

}  // namespace lpq::report
