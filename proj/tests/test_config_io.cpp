// Config parsing (error diagnostics with line and field names) and file
// round-trips for the value/policy CSV tables.

#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "rsport/bellman.hpp"
#include "rsport/config.hpp"
#include "rsport/experiment.hpp"
#include "rsport/io.hpp"

using namespace rsport;
using namespace rsport::fixtures;

namespace {

const char* kToyConfig = R"(
# two-asset toy setup
model = discrete
assets = 2
gamma = -0.5
outcome = 0.5 1.5 0.5
outcome = 0.5 0.6 1.8
buy_cost = 0.1 0.2
sell_cost = 0.2 0.1
grid_step = 0.02
fixed_iters = 3
horizon = 50
n_paths = 100
seed = 9
strategy = buy_and_hold 1
strategy = fixed_mix 0.5 0.5
)";

std::filesystem::path temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / ("rsport_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parses with defaults materialized") {
  const ExperimentConfig config = parse_config(kToyConfig, "toy.cfg");
  CHECK(config.assets == 2);
  CHECK(config.gamma == -0.5);
  CHECK(config.grid_step == 0.02);
  CHECK(config.fixed_iters == 3);
  CHECK(config.tol == 1e-6);        // default
  CHECK(config.max_iter == 200);    // default
  CHECK(config.refine == true);     // default
  CHECK(config.trade_snap == 1e-3); // default
  CHECK(config.strategies.size() == 2);
  CHECK(config.strategies[0].kind == StrategySpec::Kind::BuyAndHold);
  CHECK(config.strategies[0].asset == 0);

  const auto& model = std::get<DiscreteReturnModel>(config.model);
  CHECK(model.log_returns(0, 0) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  CHECK(model.log_returns(1, 1) == doctest::Approx(std::log(1.8)).epsilon(1e-15));
  CHECK(model.probs[0] == 0.5);

  // full echo carries every field
  const auto echo = config_to_json(config);
  CHECK(echo["assets"] == 2);
  CHECK(echo["tol"] == 1e-6);
  CHECK(echo["model"]["kind"] == "discrete");
  CHECK(echo["strategies"].size() == 2);
}

TEST_CASE("config errors carry line and field diagnostics") {
  // unknown key, with its line number
  try {
    parse_config("model = discrete\nassets = 2\nbogus_key = 1\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    const std::string what = err.what();
    CHECK(what.find("bad.cfg:3") != std::string::npos);
    CHECK(what.find("bogus_key") != std::string::npos);
  }

  // missing cost schedule named explicitly
  try {
    parse_config(
        "model = discrete\nassets = 2\ngamma = -0.5\noutcome = 1.0 1.1 0.9\n"
        "sell_cost = 0.1 0.1\ngrid_step = 0.5\n",
        "nokey.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("buy_cost") != std::string::npos);
  }

  // malformed number with line number
  try {
    parse_config("model = discrete\nassets = two\n", "badnum.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    const std::string what = err.what();
    CHECK(what.find("badnum.cfg:2") != std::string::npos);
    CHECK(what.find("assets") != std::string::npos);
  }

  // asymmetric covariance rejected
  CHECK_THROWS_AS(parse_config("model = gaussian\nassets = 2\ngamma = -1\n"
                               "mean = 0.001 0.002\ncov_row = 1e-4 2e-5\ncov_row = 1e-5 2e-4\n"
                               "buy_cost = 0.01 0.01\nsell_cost = 0.01 0.01\ngrid_step = 0.1\n",
                               "asym.cfg"),
                  ConfigError);
}

TEST_CASE("interpolation mode and solver switches parse") {
  const std::string base(kToyConfig);
  const ExperimentConfig nearest =
      parse_config(base + "interpolation = nearest\nrefine = off\n", "modes.cfg");
  CHECK(nearest.interp == InterpMode::Nearest);
  CHECK(nearest.refine == false);
  CHECK_THROWS_AS(parse_config(base + "interpolation = cubic\n", "modes.cfg"), ConfigError);
}

TEST_CASE("value and policy CSV round-trip exactly") {
  const auto dir = temp_dir();
  const ScenarioSet scenarios = scenarios_from_discrete(toy_model());
  const auto grid = build_grid(2, 0.05);
  SolveOptions options;
  options.fixed_iters = 3;
  const SolveReport report = solve_ergodic(scenarios, -0.5, toy_costs(), grid, options);

  const auto value_path = (dir / "value.csv").string();
  const auto policy_path = (dir / "policy.csv").string();
  write_value_csv(value_path, report.value);
  write_policy_csv(policy_path, report.policy);

  const ValueFunction value_back = read_value_csv(value_path);
  REQUIRE(value_back.grid->size() == grid->size());
  CHECK((value_back.values - report.value.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((value_back.grid->points() - grid->points()).cwiseAbs().maxCoeff() == 0.0);

  const Policy policy_back = read_policy_csv(policy_path);
  CHECK((policy_back.targets - report.policy.targets).cwiseAbs().maxCoeff() == 0.0);

  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed policy CSV reports the offending row") {
  const auto dir = temp_dir();
  const auto path = (dir / "broken.csv").string();
  {
    std::ofstream out(path);
    out << "w1,w2,t1,t2\n";
    out << "0,1,0.5,0.5\n";
    out << "0.5,0.5,oops,0.5\n";
  }
  try {
    read_policy_csv(path);
    FAIL("expected CsvParseError");
  } catch (const CsvParseError& err) {
    const std::string what = err.what();
    CHECK(what.find("row 3") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_double round-trips the value exactly") {
  SplitMix64 rng = make_stream(127, 0);
  for (int it = 0; it < 1000; ++it) {
    const double x = (rng.next_double() - 0.5) * std::pow(10.0, double(rng.next_u64() % 12) - 6.0);
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}
