#pragma once

// Scenario files (YAML). Unknown keys are errors.

#include <string>

#include "gsqg/dynamics.hpp"

namespace gsqg {

// Throws ConfigError with the offending key or line.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

}  // namespace gsqg
