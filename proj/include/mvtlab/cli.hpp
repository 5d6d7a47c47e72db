#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvtlab/numerics.hpp"

namespace mvtlab::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_hypothesis = 1,  // hypothesis unsatisfied and no points; corpus mismatch
    exit_usage = 2,
    exit_numeric = 3,
};

using Json = nlohmann::ordered_json;

/// Serializes with 17 significant digits; NaN and infinities become null.
/// indent < 0 writes one line.
std::string dump(const Json& value, int indent = -1);

/// Applies the SolverConfig fields present in a JSON object. Throws
/// std::invalid_argument on an unknown key or a wrong type.
void apply_config(SolverConfig& cfg, const Json& fields);

/// Evaluates an endpoint given as a number or a constant expression ("pi/2").
double parse_endpoint(const std::string& text);

/// Runs one invocation. args excludes the program name. Reads the config file
/// named by MVT_LAB_CONFIG when set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mvtlab::cli
