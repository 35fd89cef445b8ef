#pragma once

// Subcommands of the quarticlab CLI. Each produces a Report; run() wires
// them to command-line flags and exit codes (0 pass, 1 failed check,
// 2 usage or dataset error).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quarticlab/serialize.hpp"

namespace qlab {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> command;  // e.g. {"octad", "build"}
  std::optional<std::uint32_t> prime;
  std::uint64_t seed = 42;
  std::optional<int> samples;
  std::optional<int> degree_bound;
  std::optional<std::string> input;
  int center = 8;  // 1-based octad index
  int nodes = 16;
  std::string out;
  bool timings = false;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  friend bool operator==(const Check&, const Check&) = default;
};

struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> timings;  // milliseconds

  bool passed() const;
  Check& check(const std::string& name, bool pass, const std::string& detail = "");
  Json to_json(bool with_timings) const;
  static Report from_json(const Json& doc);
  friend bool operator==(const Report& a, const Report& b) { return a.to_json(true) == b.to_json(true); }
};

std::string command_name(const RunConfig& cfg);

// Runs one subcommand. Throws UsageError or DatasetError for bad input.
Report execute(const RunConfig& cfg);

int run(int argc, char** argv);

}  // namespace qlab
