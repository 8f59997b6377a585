// lpqcohom: run one classifier on a problem file and print a report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "lpq/report.hpp"

namespace rep = lpq::report;

namespace {

struct Options {
  std::string command;
  std::string input;
  std::string out;
  std::string emit_profile;
  std::optional<double> tol;
  std::optional<int> max_doublings;
  std::string format = "json";
  unsigned threads = 0;
};

rep::Json read_input(const std::string& path) {
  std::string content;
  if (path == "-") {
    content.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw lpq::ValidationError("input: cannot read '" + path + "'");
    content.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return rep::Json::parse(content);
  } catch (const rep::Json::parse_error& e) {
    throw lpq::ValidationError(std::string("input: malformed document: ") + e.what());
  }
}

void apply_overrides(lpq::Tolerances& tol, const Options& opt) {
  if (opt.tol) tol.rel_tol = *opt.tol;
  if (opt.max_doublings) tol.max_doublings = *opt.max_doublings;
  try {
    tol.validate();
  } catch (const lpq::ValidationError& e) {
    throw lpq::ValidationError(std::string("flags: ") + e.what());
  }
}

void write_profile(const std::string& path, const std::vector<std::pair<double, double>>& samples) {
  std::ofstream os(path);
  if (!os) throw lpq::ValidationError("--emit-profile: cannot write '" + path + "'");
  os << "tau,profile_value\n";
  for (const auto& [tau, v] : samples) os << lpq::format_number(tau) << ',' << lpq::format_number(v) << '\n';
}

void write_report(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw lpq::ValidationError("--out: cannot write '" + path + "'");
  os << text;
}

int execute(const Options& opt) {
  const rep::Command command = *rep::parse_command(opt.command);
  const rep::Json input = read_input(opt.input);

  rep::Outcome outcome;
  if (command == rep::Command::Sweep) {
    rep::SweepGrid grid = rep::parse_sweep(input);
    apply_overrides(grid.tol, opt);
    outcome = rep::run_sweep(grid, opt.threads);
  } else {
    rep::ProblemFile problem = rep::parse_problem(input, command);
    apply_overrides(problem.tol, opt);
    outcome = rep::run(command, problem);
  }

  if (!opt.emit_profile.empty()) {
    write_profile(opt.emit_profile, outcome.profile);
    outcome.report["profile_csv"] = opt.emit_profile;
  }
  const auto format = opt.format == "table" ? rep::Format::Table : rep::Format::Json;
  write_report(opt.out, rep::render(outcome.report, format));
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Hardy constants and L_{p,q}-cohomology classifiers"};
  Options opt;
  app.add_option("command", opt.command, "hardy | interval | cylinder | surface | oracle | sweep")
      ->required()
      ->check(CLI::IsMember({"hardy", "interval", "cylinder", "surface", "oracle", "sweep"}));
  app.add_option("input", opt.input, "problem file (JSON), or - for stdin")->required();
  app.add_option("--out", opt.out, "write the report here instead of stdout");
  app.add_option("--emit-profile", opt.emit_profile, "write tau,profile_value samples as CSV");
  app.add_option("--tol", opt.tol, "relative tolerance override");
  app.add_option("--max-doublings", opt.max_doublings, "cutoff doubling limit override");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--threads", opt.threads, "sweep workers (0: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rep::kExitValidation;
  }

  try {
    return execute(opt);
  } catch (const lpq::TolFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rep::kExitTolFailure;
  } catch (const lpq::InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << '\n';
    return rep::kExitInternal;
  } catch (const lpq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rep::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return rep::kExitInternal;
  }
}
