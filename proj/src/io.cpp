#include "rsport/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace rsport {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return in;
}

double parse_double(const std::string& path, int row, const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw CsvParseError(path + ": row " + std::to_string(row) + ": bad number '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream stream(line);
  while (std::getline(stream, token, ',')) out.push_back(token);
  return out;
}

Matrix read_table(const std::string& path, int expected_cols, int header_cols) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw CsvParseError(path + ": empty file");
  const auto header = split_csv(line);
  if (header_cols > 0 && static_cast<int>(header.size()) != header_cols) {
    throw CsvParseError(path + ": row 1: expected " + std::to_string(header_cols) +
                        " columns, got " + std::to_string(header.size()));
  }
  std::vector<std::vector<double>> rows;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto tokens = split_csv(line);
    if (static_cast<int>(tokens.size()) != expected_cols) {
      throw CsvParseError(path + ": row " + std::to_string(row) + ": expected " +
                          std::to_string(expected_cols) + " columns, got " +
                          std::to_string(tokens.size()));
    }
    std::vector<double> values(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c) values[c] = parse_double(path, row, tokens[c]);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw CsvParseError(path + ": no data rows");
  Matrix out(rows.size(), expected_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < expected_cols; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

// The weight columns are exactly the lattice of some simplex grid: the step
// is the smallest positive coordinate, and the full lattice is rebuilt and
// checked row for row.
GridPtr reconstruct_grid(const std::string& path, const Matrix& weights) {
  double step = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      if (w > 1e-9 && w < step) step = w;
    }
  }
  if (!std::isfinite(step)) throw CsvParseError(path + ": weight columns are all zero");
  GridPtr grid;
  try {
    grid = build_grid(static_cast<int>(weights.cols()), step);
  } catch (const ValidationError& err) {
    throw CsvParseError(path + ": weight columns do not form a simplex grid (" +
                        std::string(err.what()) + ")");
  }
  if (grid->size() != weights.rows()) {
    throw CsvParseError(path + ": expected " + std::to_string(grid->size()) +
                        " grid rows for step " + format_double(step) + ", got " +
                        std::to_string(weights.rows()));
  }
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    if ((weights.row(i) - grid->points().row(i)).cwiseAbs().maxCoeff() > 1e-9) {
      throw CsvParseError(path + ": row " + std::to_string(i + 2) +
                          ": weights do not match the lattice ordering");
    }
  }
  return grid;
}

}  // namespace

void write_value_csv(const std::string& path, const ValueFunction& vf) {
  validate(vf);
  auto out = open_out(path);
  const int d = vf.grid->dimension();
  for (int j = 0; j < d; ++j) out << "w" << (j + 1) << ",";
  out << "value\n";
  for (Eigen::Index i = 0; i < vf.grid->size(); ++i) {
    for (int j = 0; j < d; ++j) out << format_double(vf.grid->points()(i, j)) << ",";
    out << format_double(vf.values[i]) << "\n";
  }
  if (!out) throw IoError(path + ": write failed");
}

ValueFunction read_value_csv(const std::string& path) {
  // peek at the header to learn the dimension
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) throw CsvParseError(path + ": empty file");
  const int cols = static_cast<int>(split_csv(header).size());
  if (cols < 3) throw CsvParseError(path + ": expected w1..wd,value columns");
  in.close();

  const Matrix table = read_table(path, cols, cols);
  const int d = cols - 1;
  ValueFunction vf;
  vf.grid = reconstruct_grid(path, table.leftCols(d));
  vf.values = table.col(d);
  validate(vf);
  return vf;
}

void write_policy_csv(const std::string& path, const Policy& policy) {
  validate(policy);
  auto out = open_out(path);
  const int d = policy.grid->dimension();
  for (int j = 0; j < d; ++j) out << "w" << (j + 1) << ",";
  for (int j = 0; j < d; ++j) out << "t" << (j + 1) << (j + 1 < d ? "," : "\n");
  for (Eigen::Index i = 0; i < policy.grid->size(); ++i) {
    for (int j = 0; j < d; ++j) out << format_double(policy.grid->points()(i, j)) << ",";
    for (int j = 0; j < d; ++j) {
      out << format_double(policy.targets(i, j)) << (j + 1 < d ? "," : "\n");
    }
  }
  if (!out) throw IoError(path + ": write failed");
}

Policy read_policy_csv(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) throw CsvParseError(path + ": empty file");
  const int cols = static_cast<int>(split_csv(header).size());
  if (cols < 4 || cols % 2 != 0) {
    throw CsvParseError(path + ": expected w1..wd,t1..td columns");
  }
  in.close();

  const Matrix table = read_table(path, cols, cols);
  const int d = cols / 2;
  Policy policy;
  policy.grid = reconstruct_grid(path, table.leftCols(d));
  policy.targets = table.rightCols(d);
  try {
    validate(policy);
  } catch (const ValidationError& err) {
    throw CsvParseError(path + ": " + err.what());
  }
  return policy;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  auto out = open_out(path);
  out << "strategy,mean,std,taylor,entropy,stderr_mean,stderr_entropy,n_paths,horizon\n";
  for (const auto& row : rows) {
    out << row.strategy << "," << format_double(row.metrics.mean) << ","
        << format_double(row.metrics.std) << "," << format_double(row.metrics.taylor) << ","
        << format_double(row.metrics.entropy) << "," << format_double(row.metrics.stderr_mean)
        << "," << format_double(row.metrics.stderr_entropy) << "," << row.metrics.n_paths
        << "," << row.metrics.horizon << "\n";
  }
  if (!out) throw IoError(path + ": write failed");
}

void write_metrics_text(const std::string& path, const std::vector<MetricsRow>& rows) {
  auto out = open_out(path);
  std::size_t width = 8;
  for (const auto& row : rows) width = std::max(width, row.strategy.size());
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s %10s %10s %16s %10s\n", static_cast<int>(width),
                "strategy", "mean", "std", "mean+(g/2)var", "entropy");
  out << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-*s %10.4f %10.4f %16.5f %10.5f\n",
                  static_cast<int>(width), row.strategy.c_str(), row.metrics.mean,
                  row.metrics.std, row.metrics.taylor, row.metrics.entropy);
    out << line;
  }
  if (!out) throw IoError(path + ": write failed");
}

void write_wealth_csv(const std::string& path, const WealthPath& wealth,
                      const Matrix& gross_path) {
  const auto horizon = gross_path.rows();
  require(static_cast<Eigen::Index>(wealth.decays.size()) == horizon,
          "wealth csv: path length mismatch");
  auto out = open_out(path);
  const int d = static_cast<int>(gross_path.cols());
  out << "t,log_wealth";
  for (int j = 0; j < d; ++j) out << ",w" << (j + 1);
  for (int j = 0; j < d; ++j) out << ",gross" << (j + 1);
  out << ",decay,traded\n";
  for (Eigen::Index t = 0; t < horizon; ++t) {
    out << t << "," << format_double(wealth.log_wealth[t]);
    for (int j = 0; j < d; ++j) out << "," << format_double(wealth.post_weights(t, j));
    for (int j = 0; j < d; ++j) out << "," << format_double(gross_path(t, j));
    out << "," << format_double(wealth.decays[t]) << "," << int(wealth.traded[t]) << "\n";
  }
  // terminal wealth row: no decision is taken at the horizon
  out << horizon << "," << format_double(wealth.log_wealth.back());
  for (int j = 0; j < d; ++j) out << "," << format_double(wealth.final_weights[j]);
  for (int j = 0; j < d; ++j) out << ",";
  out << ",,\n";
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace rsport
