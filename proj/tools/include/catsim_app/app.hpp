#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace catsim::app {

enum ExitCode : int { kOk = 0, kConfigError = 2, kBudgetError = 3, kPropertyFailure = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// `key = value` per line; '#' starts a comment; blank lines are ignored.
// Duplicate keys and malformed lines raise ConfigError with "name:line: ...".
std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& name);

// args excludes the program name. Tables go to `out` unless --output is set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catsim::app
