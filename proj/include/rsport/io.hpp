// File emission and parsing: value/policy CSV tables (full round-trip
// numeric precision), metrics tables, wealth-path CSVs.  Policy and value
// files are self-describing: the grid is reconstructed from the weight
// columns and validated against a freshly built lattice.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsport/evaluation.hpp"
#include "rsport/geometry.hpp"
#include "rsport/strategies.hpp"
#include "rsport/types.hpp"

namespace rsport {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CsvParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

void write_value_csv(const std::string& path, const ValueFunction& vf);
ValueFunction read_value_csv(const std::string& path);

void write_policy_csv(const std::string& path, const Policy& policy);
Policy read_policy_csv(const std::string& path);

struct MetricsRow {
  std::string strategy;
  Metrics metrics;
};

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
// Aligned text table: strategy, mean, std, mean+(gamma/2)var, entropy.
void write_metrics_text(const std::string& path, const std::vector<MetricsRow>& rows);

// Columns: t, log_wealth, post-trade weights, gross returns, decay, traded.
void write_wealth_csv(const std::string& path, const WealthPath& wealth,
                      const Matrix& gross_path);

}  // namespace rsport
