#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unistd.h>

#include "afgas/field_io.hpp"
#include "checks.hpp"
#include "commands.hpp"
#include "doctest.h"

using namespace afgas;
using namespace afgas::cli;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("afgas_cli_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  c.seed = 42;
  c.beta = 3.5;
  c.grid.bc = Boundary::plane;
  c.grid.n = 96;
  c.solver.grad_tol = 1e-7;
  c.solver.schedule = {1.0, 2.0};
  c.trap.kind = "anisotropic";
  c.lda.audit = true;
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_from_json(config_to_json(RunConfig{})) == RunConfig{});
  // Absent keys keep their defaults.
  CHECK(config_from_json(json::object()) == RunConfig{});

  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  save_config(dir / "c.json", c);
  CHECK(load_config(dir / "c.json") == c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS(config_from_json(json{{"betta", 1.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"solver", {{"restart", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"beta", "large"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"grid", {{"n", 64.5}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"grid", {{"bc", "periodic"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"thermo", {{"betas", {1, "x"}}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"threads", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  CHECK(config_from_json(json{{"solver", {{"grad_tol", nullptr}}}}).solver.grad_tol == std::nullopt);
}

TEST_CASE("invalid settings map to exit code 3") {
  RunConfig c;
  c.out = scratch("bad").string();
  const CommandOptions quiet{};
  c.grid.n = 7;
  CHECK(run_command("solve", c, quiet) == kConfigError);
  c.grid.n = 32;
  c.solver.shrink = 1.5;
  CHECK(run_command("solve", c, quiet) == kConfigError);
  c.solver.shrink = 0.5;
  c.solver.method = "newton";
  CHECK(run_command("solve", c, quiet) == kConfigError);
  c.solver.method = "lbfgs";
  c.solver.initializer = "file";
  CHECK(run_command("solve", c, quiet) == kConfigError);
  c.solver.initializer = "gaussian";
  c.trap.kind = "box";
  CHECK(run_command("tf", c, quiet) == kConfigError);
  CHECK(run_command("bogus", RunConfig{}, quiet) == kConfigError);
  std::filesystem::remove_all(c.out);
}

TEST_CASE("solve writes its outputs") {
  RunConfig c;
  c.beta = 4.0;
  c.grid.n = 32;
  c.solver.restarts = 0;
  c.out = scratch("solve").string();
  std::ostringstream log;
  REQUIRE(run_command("solve", c, CommandOptions{true, &log}) == kOk);
  const std::filesystem::path out(c.out);
  for (const char* f : {"summary.json", "history.csv", "state.afd", "density.pgm", "timing.json"})
    CHECK(std::filesystem::exists(out / f));
  const json s = json::parse(read_text(out / "summary.json"));
  CHECK(s["converged"].get<bool>());
  CHECK(s["bounds"]["diamagnetic_violations"].get<int>() == 0);
  CHECK(!s["config"].contains("out"));
  const ComplexField u = read_afd_complex(out / "state.afd");
  CHECK(u.grid == make_square(1.0, 32, Boundary::dirichlet));
  CHECK(mass(u) == doctest::Approx(1.0).epsilon(1e-12));
  const std::string hist = read_text(out / "history.csv");
  CHECK(hist.rfind("iteration,beta,energy,residual,step,kinetic,diamagnetic,l4\r\n", 0) == 0);
  CHECK(log.str().find("converged") != std::string::npos);

  // A solve started from the dump stays where it is.
  RunConfig again = c;
  again.solver.initializer = "file";
  again.solver.initial_state = (out / "state.afd").string();
  again.solver.continuation = false;
  again.out = scratch("resume").string();
  REQUIRE(run_command("solve", again, CommandOptions{}) == kOk);
  const json t = json::parse(read_text(std::filesystem::path(again.out) / "summary.json"));
  CHECK(t["energy"]["total"].get<double>() <= s["energy"]["total"].get<double>() + 1e-10);
  std::filesystem::remove_all(c.out);
  std::filesystem::remove_all(again.out);
}

TEST_CASE("tf prints the harmonic energy") {
  RunConfig c;
  c.out = scratch("tf").string();
  c.tf.n = 64;
  std::ostringstream log;
  REQUIRE(run_command("tf", c, CommandOptions{false, &log}) == kOk);
  CHECK(log.str().find("E_TF(beta=1) = 1.885618") != std::string::npos);
  CHECK(std::filesystem::exists(std::filesystem::path(c.out) / "density.afd"));
  std::filesystem::remove_all(c.out);
}

TEST_CASE("criteria registry") {
  CHECK(criteria().size() == 12);
  for (int id = 1; id <= 12; ++id) CHECK(criterion(id).id == id);
  CHECK_THROWS(criterion(13));
  const CheckResult r = run_criterion(criterion(9), Scale::quick, 1);
  CHECK(r.passed);
  CHECK(r.seconds >= 0.0);
  const Criterion broken{0, "throws", [](Scale, int) -> CheckResult { throw std::runtime_error("boom"); }};
  const CheckResult b = run_criterion(broken, Scale::quick, 1);
  CHECK(!b.passed);
  CHECK(b.detail.find("boom") != std::string::npos);
}
