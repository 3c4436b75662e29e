#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multippl/infer.hpp"

namespace multippl::cli {

struct CommonArgs {
  std::string path;
  std::uint64_t seed = 0;
  std::string query = "expectation";
  unsigned jobs = 1;
  std::uint64_t fuel = 1'000'000;
};

struct RunArgs : CommonArgs {
  std::size_t samples = 1000;
};

struct CompareArgs : CommonArgs {
  std::size_t samples = 1000;
  std::size_t trials = 100;
  std::string oracle_path;  // JSON file with a "truth" array; empty means enumerate
};

/// Result of one command, serializable as JSON or as a CSV row.
struct RunReport {
  std::string program;
  std::string mode;  // "sample", "exact" or "compare"
  std::string query;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<std::vector<double>> estimate;  // absent when every weight was 0
  std::vector<double> std_error;
  std::vector<double> unweighted;
  double sum_weights = 0.0;
  double ess = 0.0;
  std::optional<double> z;
  std::vector<std::pair<std::string, double>> posterior;
  std::vector<double> truth;
  std::optional<double> l1;
  std::optional<double> l1_std_error;
  double seconds = 0.0;

  std::string to_json() const;
  std::string to_csv_row() const;
};

Query parse_query(const std::string& text);

/// Reads, parses and checks a program file. Throws ParseError / TypeError,
/// or std::runtime_error when the file cannot be read.
TypedProgram load_program(const std::string& path);

RunReport cmd_run(const RunArgs& args);
RunReport cmd_exact(const CommonArgs& args);
RunReport cmd_compare(const CompareArgs& args);

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

/// Full command-line driver: `multippl {run|exact|compare} FILE [flags]`.
/// Exit codes: 0 success, 1 parse/type/input error, 2 runtime error.
Outcome main(const std::vector<std::string>& args);

}  // namespace multippl::cli
