#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace riesz::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240101;

/// Entry point of riesz-zeros; `args` excludes the program name.
/// Returns 0 on success, 1 on computational failure, 2 on usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from the --threads flag ("auto" or a positive integer); a set
/// RIESZ_ZEROS_THREADS value takes precedence.
unsigned resolve_threads(const std::string& flag, const std::optional<std::string>& env);

/// Experiment names accepted by `report`.
const std::vector<std::string>& known_experiments();

}  // namespace riesz::cli
