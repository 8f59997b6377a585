#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_helpers.hpp"
#include "lpq/report.hpp"

using namespace lpq;
using namespace lpq::report;

namespace {

Json unit_hardy() {
  return Json::parse(R"J({"p":2,"q":2,"v0":"1","v1":"1","interval":[0,1]})J");
}

std::string rejection(const Json& in, Command c) {
  try {
    parse_problem(in, c);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

const double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("problem validation names the failing field") {
  Json in = unit_hardy();
  in["bogus"] = 1;
  CHECK(rejection(in, Command::Hardy).find("'bogus'") != std::string::npos);

  in = unit_hardy();
  in.erase("v1");
  CHECK(rejection(in, Command::Hardy).find("'v1'") != std::string::npos);

  in = unit_hardy();
  in["p"] = 1;
  CHECK(rejection(in, Command::Hardy).find("'p'") != std::string::npos);

  in = unit_hardy();
  in["kind"] = "surface";
  CHECK(rejection(in, Command::Hardy).find("'kind'") != std::string::npos);

  in = unit_hardy();
  in["interval"] = Json::array({1, 0});
  CHECK(rejection(in, Command::Hardy).find("'interval'") != std::string::npos);

  in = unit_hardy();
  in["v0"] = "t^";
  CHECK(rejection(in, Command::Hardy).find("'v0'") != std::string::npos);

  in = unit_hardy();
  in["tolerances"] = {{"max_doublings", 3}};
  CHECK(rejection(in, Command::Hardy).find("'tolerances'") != std::string::npos);

  in = unit_hardy();
  in["tolerances"] = {{"rel", 1e-6}};
  CHECK(rejection(in, Command::Hardy).find("'tolerances.rel'") != std::string::npos);

  const Json surf = Json::parse(R"J({"p":2,"q":2,"f":"exp(-1*t)","n":1,"j":3})J");
  CHECK(rejection(surf, Command::Surface).find("'f'") != std::string::npos);
  Json surf_iv = surf;
  surf_iv["j"] = 1;
  surf_iv["interval"] = Json::array({0, "inf"});
  CHECK(rejection(surf_iv, Command::Surface).find("'interval'") != std::string::npos);

  const Json cyl = Json::parse(R"J({"p":2,"q":2,"f":"t + 1","n":1,"j":1,"interval":[0,"inf"]})J");
  CHECK(rejection(cyl, Command::Cylinder).find("'f'") != std::string::npos);

  Json cyl_flag = cyl;
  cyl_flag["f"] = "1";
  cyl_flag["assertions"] = {{"fiber_pairing_nontrivial", "yes"}};
  CHECK(rejection(cyl_flag, Command::Cylinder).find("fiber_pairing_nontrivial") != std::string::npos);
}

TEST_CASE("echo is a re-parseable fixed point") {
  const std::vector<std::pair<Command, std::string>> inputs{
      {Command::Hardy, R"J({"p":2,"q":4,"v0":"exp(-1*t)","v1":"1","interval":[0,"inf"]})J"},
      {Command::Interval, R"J({"p":1.5,"q":3,"v0":"t^-2","v1":"t","interval":[1,"inf"],"tolerances":{"rel_tol":1e-7}})J"},
      {Command::Cylinder,
       R"J({"p":2,"q":2,"f":"exp(t)","n":2,"j":1,"interval":[0,"inf"],"assertions":{"fiber_pairing_nontrivial":true}})J"},
      {Command::Surface, R"J({"schema_version":"1","kind":"surface","p":3,"q":2,"f":"t + 1","n":2,"j":3})J"},
  };
  for (const auto& [cmd, text] : inputs) {
    CAPTURE(text);
    const ProblemFile pf = parse_problem(Json::parse(text), cmd);
    const Json e = echo(pf);
    CHECK(echo(parse_problem(e, cmd)) == e);
    CHECK(Json::parse(e.dump()) == e);
  }
  const SweepGrid g = parse_sweep(Json::parse(R"J({"p":[1.5,2],"q":[3],"alpha":[-1,0.5],"n":2,"j":3})J"));
  CHECK(echo(parse_sweep(echo(g))) == echo(g));
}

TEST_CASE("hardy command on unit weights") {
  const Outcome out = run(Command::Hardy, parse_problem(unit_hardy(), Command::Hardy));
  CHECK(out.exit_code == kExitOk);
  const Json& chi = out.report["chi_forward"];
  CHECK(chi["tag"] == "Finite");
  CHECK(chi["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(chi["regime"] == "SupForm");
  CHECK(chi["argmax"]["tau"].get<double>() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_FALSE(out.profile.empty());
  for (const char* key : {"input", "chi_forward", "chi_backward", "verdicts"}) CHECK(out.report.contains(key));
}

TEST_CASE("interval command on unit weights over the half-line") {
  const Json in = Json::parse(R"J({"p":2,"q":2,"v0":"1","v1":"1","interval":[0,"inf"]})J");
  const Outcome out = run(Command::Interval, parse_problem(in, Command::Interval));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.report["verdicts"]["torsion_absolute"]["status"] == "Nontrivial");
  CHECK(out.report["verdicts"]["h1bar_absolute"]["status"] == "Trivial");
  CHECK(out.report["chi_forward"]["tag"] == "Divergent");
}

TEST_CASE("surface command on the exponential profile") {
  const Json in = Json::parse(R"J({"f":"exp(-1*t)","n":1,"p":2,"q":2,"j":1})J");
  const Outcome out = run(Command::Surface, parse_problem(in, Command::Surface));
  CHECK(out.exit_code == kExitOk);
  const Json& vol = out.report["surface"]["volume"];
  REQUIRE(vol["tag"] == "Finite");
  CHECK(vol["value"].get<double>() == doctest::Approx(kPi * (std::sqrt(2.0) + std::asinh(1.0))).epsilon(1e-10));
  CHECK(out.report["verdicts"]["torsion_j"]["status"] == "Unknown");
  CHECK(out.report["surface"]["f_limit"] == "Zero");
}

TEST_CASE("cylinder command without the fiber hypothesis") {
  const Json in = Json::parse(R"J({"f":"1","n":1,"p":2,"q":2,"j":1,"interval":[0,"inf"]})J");
  const Outcome out = run(Command::Cylinder, parse_problem(in, Command::Cylinder));
  CHECK(out.exit_code == kExitOk);
  CHECK(out.report["chi_forward"].is_null());
  CHECK(out.report["verdicts"]["torsion"]["status"] == "Unknown");
}

TEST_CASE("oracle command compares exact and numeric decisions") {
  const Json in = Json::parse(R"J({"p":2,"q":4,"v0":"exp(-1*t)","v1":"1","interval":[0,"inf"]})J");
  const Outcome out = run(Command::Oracle, parse_problem(in, Command::Oracle));
  CHECK(out.report["oracle"]["exact"] == "Finite");
  CHECK(out.report["oracle"]["agree"] == true);
  CHECK(out.report["chi_forward"]["value"].get<double>() == doctest::Approx(std::pow(128.0, -0.25)).epsilon(1e-6));
}

TEST_CASE("tolerance failure still yields a report") {
  const Json in = Json::parse(
      R"J({"p":2,"q":2,"v0":"exp(-1*t)","v1":"1","interval":[0,"inf"],"tolerances":{"rel_tol":1e-16,"max_doublings":8}})J");
  const Outcome out = run(Command::Hardy, parse_problem(in, Command::Hardy));
  CHECK(out.exit_code == kExitTolFailure);
  CHECK(out.report["chi_forward"]["tag"] == "Unknown");
  CHECK(out.report["chi_forward"].contains("failure"));
}

TEST_CASE("sweep rows") {
  SUBCASE("empty grid") {
    const Outcome out = run_sweep(parse_sweep(Json::parse(R"J({"p":[],"alpha":[]})J")));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report["rows"].empty());
  }
  SUBCASE("scope gate and unbounded profiles") {
    const Outcome out = run_sweep(parse_sweep(Json::parse(R"J({"p":[1,1.5,2,3],"alpha":[-1,1]})J")), 3);
    CHECK(out.exit_code == kExitOk);
    const Json& rows = out.report["rows"];
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Json& r = rows[i];
      CAPTURE(r.dump());
      CHECK(r["index"] == i);
      if (r["p"].get<double>() == 1) {
        CHECK(r["status"] == "OutOfScope");
        continue;
      }
      CHECK(r["status"] == "Ok");
      if (r["alpha"].get<double>() == 1) {
        CHECK(r["torsion_all_degrees"]["status"] == "Nontrivial");
        CHECK(r["torsion_j"]["status"] == "Nontrivial");
      }
    }
  }
  SUBCASE("order does not depend on the worker count") {
    const SweepGrid g = parse_sweep(Json::parse(R"J({"p":[1.25,2,3],"q":[1.5,2.5],"alpha":[-2,-0.5,0,0.5]})J"));
    const std::string one = render(run_sweep(g, 1).report, Format::Json);
    CHECK(render(run_sweep(g, 4).report, Format::Json) == one);
    CHECK(render(run_sweep(g, 16).report, Format::Json) == one);
  }
  CHECK_THROWS_AS(parse_sweep(Json::parse(R"J({"p":[2],"alpha":[1],"n":1,"j":5})J")), ValidationError);
  CHECK_THROWS_AS(parse_sweep(Json::parse(R"J({"p":"2","alpha":[1]})J")), ValidationError);
}

TEST_CASE("number formatting in reports") {
  CHECK(number(1.0 / 3).dump() == "0.333333333333");
  CHECK(number(0.5).dump() == "0.5");
  CHECK(number(kInf) == "inf");
  const std::string table = render(Json::parse(R"J({"a":{"b":[1,"x"]}})J"), Format::Table);
  CHECK(table == "a.b[0] = 1\na.b[1] = x\n");
}

TEST_CASE("executable: exit codes and byte-identical reports") {
  const auto dir = cli::scratch_dir("test_cli");
  for (const char* name : {"hardy_unit_interval", "interval_half_line", "surface_exp_profile"}) {
    CAPTURE(name);
    const std::string input = cli::golden(name);
    const std::string cmd = cli::golden_command(name);
    const auto a = cli::run_cli(cmd + " " + input, dir / "a.json");
    const auto b = cli::run_cli(cmd + " " + input, dir / "b.json");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK_FALSE(a.output.empty());
    CHECK(a.output == b.output);
  }

  std::ofstream(dir / "bad.json") << R"J({"p":2,"q":2,"v0":"1","v1":"1","interval":[0,1],"extra":true})J";
  CHECK(cli::run_cli("hardy " + (dir / "bad.json").string(), dir / "out.json").exit_code == 2);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(cli::run_cli("hardy " + (dir / "broken.json").string(), dir / "out.json").exit_code == 2);
  CHECK(cli::run_cli("nosuch " + cli::golden("hardy_unit_interval"), dir / "out.json").exit_code == 2);

  std::ofstream(dir / "tight.json")
      << R"J({"p":2,"q":2,"v0":"exp(-1*t)","v1":"1","interval":[0,"inf"],"tolerances":{"rel_tol":1e-16,"max_doublings":8}})J";
  const auto tight = cli::run_cli("hardy " + (dir / "tight.json").string(), dir / "out.json");
  CHECK(tight.exit_code == 3);
  CHECK(Json::parse(tight.output)["chi_forward"]["tag"] == "Unknown");

  const auto csv = dir / "profile.csv";
  const auto with_profile =
      cli::run_cli("hardy " + cli::golden("hardy_unit_interval") + " --emit-profile " + csv.string(), dir / "out.json");
  CHECK(with_profile.exit_code == 0);
  CHECK(Json::parse(with_profile.output)["profile_csv"] == csv.string());
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau,profile_value");

  const auto table = cli::run_cli("surface " + cli::golden("surface_exp_profile") + " --format table", dir / "out.txt");
  CHECK(table.exit_code == 0);
  CHECK(table.output.find("verdicts.torsion_j.status = Unknown") != std::string::npos);

  const auto sweep = cli::run_cli("sweep " + cli::golden("sweep_power_profiles"), dir / "out.json");
  CHECK(sweep.exit_code == 0);
  CHECK(Json::parse(sweep.output)["rows"].size() == 8);
  std::filesystem::remove_all(dir);
}
