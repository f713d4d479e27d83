#pragma once

#include <stdexcept>
#include <string>

namespace rugged {

/// Invalid user-supplied parameter or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle input violated its stated domain, e.g. a marginal vector
/// outside M_eps.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace rugged
