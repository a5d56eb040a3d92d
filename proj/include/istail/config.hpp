#pragma once

#include <stdexcept>
#include <string>

#include "istail/harness.hpp"

namespace istail {

/// Config file missing or unreadable.
class ConfigFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config file readable but malformed: JSON syntax, unknown key, wrong
/// type, or out-of-range value.  The message names the offending field.
class ConfigSchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An experiment plus output disposition, as described by a JSON config.
struct CliConfig {
    ExperimentConfig experiment;
    std::string format = "csv";  // "csv" or "table"
    std::string output;          // empty -> stdout
};

/// Loads and validates a JSON experiment config.  Unknown keys are
/// rejected.  Throws ConfigFileError or ConfigSchemaError.
CliConfig load_cli_config(const std::string& path);

/// Same, from a JSON string (exposed for tests).
CliConfig parse_cli_config(const std::string& text);

}  // namespace istail
