#include "polwire/error.hpp"

namespace polwire {

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& v : violations) msg += "\n  - " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

} // namespace polwire
