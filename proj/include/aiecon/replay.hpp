#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aiecon/common.hpp"

namespace aiecon {

class LogParseError : public std::runtime_error {
 public:
  LogParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ParsedLog {
  nlohmann::json header;
  std::vector<nlohmann::json> steps;
  std::vector<nlohmann::json> periods;
  nlohmann::json summary;
};

// Structural parse of an episode log. Throws LogParseError on malformed
// JSON, out-of-order records, or a missing summary (truncated log).
ParsedLog parse_log(std::istream& in);

enum class ReplayStatus { Verified, ParseError, ConfigError, InvariantViolation, Mismatch };

struct ReplayReport {
  ReplayStatus status = ReplayStatus::Verified;
  std::optional<Step> first_divergent_step;
  std::string message;
  std::size_t steps_checked = 0;

  int exit_code() const;
};

// Two independent checks: every derived column (utilities, rewards, social
// welfare, metrics, alignment) is recomputed from the logged wealth, labor
// and languages; then the episode is re-simulated from the header config,
// seed and logged actions and compared record by record. Comparisons are
// exact.
ReplayReport replay(std::istream& in);
ReplayReport replay(const ParsedLog& log);

}  // namespace aiecon
