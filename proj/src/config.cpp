#include "rsport/config.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace rsport {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream stream(s);
  std::string token;
  while (stream >> token) out.push_back(token);
  return out;
}

struct Parser {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": field '" + key + "': " + msg);
  }

  double number(const std::string& key, const std::string& value) const {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc{} || result.ptr != end) fail(key, "expected a number, got '" + value + "'");
    return out;
  }

  long long integer(const std::string& key, const std::string& value) const {
    long long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc{} || result.ptr != end) fail(key, "expected an integer, got '" + value + "'");
    return out;
  }

  bool boolean(const std::string& key, const std::string& value) const {
    if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
    if (value == "off" || value == "false" || value == "no" || value == "0") return false;
    fail(key, "expected on/off, got '" + value + "'");
  }

  Vector vector(const std::string& key, const std::string& value) const {
    const auto tokens = split_ws(value);
    if (tokens.empty()) fail(key, "expected a list of numbers");
    Vector out(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) out[i] = number(key, tokens[i]);
    return out;
  }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  Parser parser{origin};

  std::string model_kind;
  std::vector<Vector> outcomes;  // probability followed by gross returns
  std::optional<Vector> mean;
  std::vector<Vector> cov_rows;
  bool saw_assets = false, saw_gamma = false, saw_buy = false, saw_sell = false,
       saw_step = false;

  std::istringstream stream(text);
  std::string raw;
  while (std::getline(stream, raw)) {
    ++parser.line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(parser.line) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (value.empty()) parser.fail(key, "missing value");

    if (key == "model") {
      if (value != "discrete" && value != "gaussian") parser.fail(key, "expected discrete|gaussian");
      model_kind = value;
    } else if (key == "assets") {
      config.assets = static_cast<int>(parser.integer(key, value));
      if (config.assets < 2) parser.fail(key, "need at least 2 assets");
      saw_assets = true;
    } else if (key == "gamma") {
      config.gamma = parser.number(key, value);
      saw_gamma = true;
    } else if (key == "outcome") {
      outcomes.push_back(parser.vector(key, value));
    } else if (key == "mean") {
      mean = parser.vector(key, value);
    } else if (key == "cov_row") {
      cov_rows.push_back(parser.vector(key, value));
    } else if (key == "buy_cost") {
      config.schedule.buy = parser.vector(key, value);
      saw_buy = true;
    } else if (key == "sell_cost") {
      config.schedule.sell = parser.vector(key, value);
      saw_sell = true;
    } else if (key == "grid_step") {
      config.grid_step = parser.number(key, value);
      saw_step = true;
    } else if (key == "tol") {
      config.tol = parser.number(key, value);
      if (config.tol <= 0.0) parser.fail(key, "must be positive");
    } else if (key == "max_iter") {
      config.max_iter = static_cast<int>(parser.integer(key, value));
      if (config.max_iter < 1) parser.fail(key, "must be at least 1");
    } else if (key == "fixed_iters") {
      config.fixed_iters = static_cast<int>(parser.integer(key, value));
      if (config.fixed_iters < 0) parser.fail(key, "must be nonnegative");
    } else if (key == "refine") {
      config.refine = parser.boolean(key, value);
    } else if (key == "interpolation") {
      if (value == "linear") {
        config.interp = InterpMode::Linear;
      } else if (value == "nearest") {
        config.interp = InterpMode::Nearest;
      } else {
        parser.fail(key, "expected linear|nearest");
      }
    } else if (key == "n_scenarios") {
      config.n_scenarios = static_cast<int>(parser.integer(key, value));
      if (config.n_scenarios < 2) parser.fail(key, "need at least 2 scenarios");
    } else if (key == "scenario_seed") {
      config.scenario_seed = static_cast<std::uint64_t>(parser.integer(key, value));
    } else if (key == "antithetic") {
      config.antithetic = parser.boolean(key, value);
    } else if (key == "horizon") {
      config.horizon = static_cast<int>(parser.integer(key, value));
      if (config.horizon < 1) parser.fail(key, "must be at least 1");
    } else if (key == "n_paths") {
      config.n_paths = static_cast<int>(parser.integer(key, value));
      if (config.n_paths < 2) parser.fail(key, "need at least 2 paths");
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parser.integer(key, value));
    } else if (key == "trade_snap") {
      config.trade_snap = parser.number(key, value);
      if (config.trade_snap <= 0.0) parser.fail(key, "must be positive");
    } else if (key == "region_eta") {
      config.region_eta = parser.number(key, value);
      if (config.region_eta <= 0.0) parser.fail(key, "must be positive");
    } else if (key == "scan_step") {
      config.scan_step = parser.number(key, value);
      if (config.scan_step <= 0.0 || config.scan_step > 1.0) parser.fail(key, "must lie in (0,1]");
    } else if (key == "initial_weights") {
      config.initial = parser.vector(key, value);
    } else if (key == "strategy") {
      const auto tokens = split_ws(value);
      StrategySpec spec;
      if (tokens[0] == "buy_and_hold") {
        if (tokens.size() != 2) parser.fail(key, "usage: buy_and_hold <asset>");
        spec.kind = StrategySpec::Kind::BuyAndHold;
        spec.asset = static_cast<int>(parser.integer(key, tokens[1])) - 1;
        if (spec.asset < 0) parser.fail(key, "asset numbering starts at 1");
        spec.label = "buy-and-hold-" + tokens[1];
      } else if (tokens[0] == "fixed_mix") {
        if (tokens.size() < 2) parser.fail(key, "usage: fixed_mix <w1> ... <wd>");
        spec.kind = StrategySpec::Kind::FixedMix;
        spec.target.resize(tokens.size() - 1);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          spec.target[i - 1] = parser.number(key, tokens[i]);
        }
        spec.label = "fixed-mix";
      } else if (tokens[0] == "fixed_mix_scan") {
        spec.kind = StrategySpec::Kind::FixedMixScan;
        spec.label = "optimal-proportion";
      } else if (tokens[0] == "fixed_mix_markowitz") {
        spec.kind = StrategySpec::Kind::FixedMixMarkowitz;
        spec.label = "markowitz";
      } else if (tokens[0] == "bellman") {
        if (tokens.size() != 2) parser.fail(key, "usage: bellman <policy.csv>");
        spec.kind = StrategySpec::Kind::Bellman;
        spec.policy_path = tokens[1];
        spec.label = "bellman";
      } else if (tokens[0] == "none") {
        spec.kind = StrategySpec::Kind::None;
        spec.label = "hold";
      } else {
        parser.fail(key, "unknown strategy '" + tokens[0] + "'");
      }
      config.strategies.push_back(std::move(spec));
    } else {
      parser.fail(key, "unknown key");
    }
  }

  // cross-field validation; point at the file rather than a line
  const auto missing = [&](const std::string& field) {
    throw ConfigError(origin + ": missing required field '" + field + "'");
  };
  if (model_kind.empty()) missing("model");
  if (!saw_assets) missing("assets");
  if (!saw_gamma) missing("gamma");
  if (!saw_buy) missing("buy_cost");
  if (!saw_sell) missing("sell_cost");
  if (!saw_step) missing("grid_step");

  const auto check_dim = [&](const std::string& field, Eigen::Index got) {
    if (got != config.assets) {
      throw ConfigError(origin + ": field '" + field + "': expected " +
                        std::to_string(config.assets) + " entries, got " + std::to_string(got));
    }
  };
  check_dim("buy_cost", config.schedule.buy.size());
  check_dim("sell_cost", config.schedule.sell.size());
  if (config.initial.size() > 0) check_dim("initial_weights", config.initial.size());

  if (model_kind == "discrete") {
    if (outcomes.empty()) missing("outcome");
    DiscreteReturnModel model;
    model.log_returns.resize(outcomes.size(), config.assets);
    model.probs.resize(outcomes.size());
    for (std::size_t o = 0; o < outcomes.size(); ++o) {
      if (outcomes[o].size() != config.assets + 1) {
        throw ConfigError(origin + ": field 'outcome': expected probability followed by " +
                          std::to_string(config.assets) + " gross returns");
      }
      model.probs[o] = outcomes[o][0];
      for (int j = 0; j < config.assets; ++j) {
        const double gross = outcomes[o][j + 1];
        if (gross <= 0.0) {
          throw ConfigError(origin + ": field 'outcome': gross returns must be positive");
        }
        model.log_returns(o, j) = std::log(gross);
      }
    }
    try {
      validate_model(model);
    } catch (const ValidationError& err) {
      throw ConfigError(origin + ": field 'outcome': " + err.what());
    }
    config.model = std::move(model);
  } else {
    if (!mean.has_value()) missing("mean");
    if (cov_rows.empty()) missing("cov_row");
    check_dim("mean", mean->size());
    check_dim("cov_row", static_cast<Eigen::Index>(cov_rows.size()));
    GaussianReturnModel model;
    model.mean = *mean;
    model.cov.resize(config.assets, config.assets);
    for (int i = 0; i < config.assets; ++i) {
      check_dim("cov_row", cov_rows[i].size());
      model.cov.row(i) = cov_rows[i].transpose();
    }
    try {
      validate_model(model);
    } catch (const ValidationError& err) {
      throw ConfigError(origin + ": field 'cov_row': " + err.what());
    }
    config.model = std::move(model);
  }

  try {
    validate_schedule(config.schedule);
  } catch (const ValidationError& err) {
    throw ConfigError(origin + ": field 'buy_cost'/'sell_cost': " + err.what());
  }
  if (config.initial.size() > 0) {
    try {
      check_simplex(config.initial);
    } catch (const ValidationError& err) {
      throw ConfigError(origin + ": field 'initial_weights': " + err.what());
    }
  }
  for (const auto& spec : config.strategies) {
    if (spec.kind == StrategySpec::Kind::BuyAndHold && spec.asset >= config.assets) {
      throw ConfigError(origin + ": field 'strategy': buy_and_hold asset out of range");
    }
    if (spec.kind == StrategySpec::Kind::FixedMix &&
        spec.target.size() != config.assets) {
      throw ConfigError(origin + ": field 'strategy': fixed_mix needs " +
                        std::to_string(config.assets) + " weights");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace rsport
