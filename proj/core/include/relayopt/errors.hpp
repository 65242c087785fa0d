#pragma once

#include <stdexcept>

namespace relayopt {

/// Numeric inputs outside the model's domain (CLI exit code 3).
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Scenario/solver configuration parse or validation failure (CLI exit code 1).
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace relayopt
