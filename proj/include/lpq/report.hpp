#ifndef LPQ_REPORT_HPP
#define LPQ_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lpq/core.hpp"

namespace lpq::report {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTolFailure = 3;

inline constexpr const char* kSchemaVersion = "1";

enum class Command { Hardy, Interval, Cylinder, Surface, Oracle, Sweep };
const char* to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

/// Validated problem input. Functions are kept in canonical textual form.
///
/// Fields by kind:
///   hardy, interval: p, q, v0, v1, interval
///   cylinder:        p, q, f, interval, n, j, assertions.fiber_pairing_nontrivial
///   surface:         p, q, f, n, j (the interval is always [0, inf))
/// Every kind accepts schema_version and tolerances.
struct ProblemFile {
  std::string schema_version = kSchemaVersion;
  Command kind = Command::Hardy;
  double p = 2, q = 2;
  std::string v0, v1, f;
  double lo = 0, hi = kInf;
  int n = 1, j = 1;
  bool fiber_pairing_nontrivial = false;
  Tolerances tol;
};

/// Grid of surface problems with profiles (1 + t)^alpha. An empty `q` list
/// means q = p in every cell.
struct SweepGrid {
  std::string schema_version = kSchemaVersion;
  std::vector<double> p, q, alpha;
  int n = 1, j = 1;
  Tolerances tol;
};

/// Throws ValidationError naming the offending field. `command` selects the
/// expected kind: oracle takes a hardy problem; a `kind` field, when present,
/// must agree. Everything the computation needs is checked here.
ProblemFile parse_problem(const Json& input, Command command);
SweepGrid parse_sweep(const Json& input);

/// Re-parseable echo of a validated input.
Json echo(const ProblemFile& problem);
Json echo(const SweepGrid& grid);

struct Outcome {
  Json report;
  int exit_code = kExitOk;
  /// (tau, profile value) samples of the forward constant, SupForm only.
  std::vector<std::pair<double, double>> profile;
};

Outcome run(Command command, const ProblemFile& problem);
/// Cells run on `threads` workers; rows come out in cell order.
Outcome run_sweep(const SweepGrid& grid, unsigned threads = 0);

/// Finite numbers rounded to 12 significant digits; +-inf as strings.
Json number(double x);

enum class Format { Json, Table };
/// JSON pretty-printed with two-space indent, or one `path = value` line per leaf.
std::string render(const Json& report, Format format);

}  // namespace lpq::report

#endif  // LPQ_REPORT_HPP
