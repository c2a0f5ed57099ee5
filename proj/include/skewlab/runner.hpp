#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "skewlab/system.hpp"

namespace skewlab {

/// Exit codes of the batch front-end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostic = 1; // a verified claim failed to hold
inline constexpr int kExitInputError = 2;

struct RunOptions {
    std::string command;
    std::string config_path;
    std::optional<double> alpha;
    std::vector<std::string> itineraries;
    int depth = 12;
    std::uint64_t seed = 1;
    int samples = 10000;
    std::string out_dir = "skewlab_out";
    std::string format = "json";
    std::optional<double> y;
    std::string choices1 = "1";
    std::string choices2 = "2";
};

/// Parse the key-value config format: one `key = values` pair per line,
/// '#' comments. Keys: alpha, I1, I2, s1..s4, psi1..psi3 (coefficients in
/// ascending degree), delta, merge_tolerance, beta, eps_alpha, theta.
/// Missing keys fall back to default_config(alpha).
SystemParams load_config(const std::string& path);

/// Dispatch one command, writing reports under options.out_dir.
/// Returns the exit code; input problems surface as exceptions in the
/// library and are mapped to kExitInputError by the caller.
int run_command(const RunOptions& options, std::ostream& log);

} // namespace skewlab
