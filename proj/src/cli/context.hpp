#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace riesz::cli {

/// Resolved global options plus the outputs produced so far.
struct Context {
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out_dir;
    Format format = Format::json;
    bool format_given = false;
    unsigned threads = 1;
    std::string command_line;
    nlohmann::json config = nlohmann::json::object();
    std::vector<OutputRecord> outputs;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;

    /// Writes `payload` to out_dir/filename, or to standard output without --out.
    void emit(const std::string& filename, const std::string& payload);
    void emit_table(const std::string& stem, const Table& table);
    void emit_object(const std::string& stem, const nlohmann::json& obj);
    /// Writes manifest.json next to the outputs; no-op without --out.
    void finish();
};

struct ReportSpec {
    std::vector<std::string> experiments;
    std::size_t mc_trials = 10000;
    std::size_t paircorr_trials = 2000;
};

/// Runs the experiment battery; returns the process exit code.
int run_report(const ReportSpec& spec, Context& ctx);

}  // namespace riesz::cli
