#pragma once

// Output plumbing for the command-line front end: tables, atomic file writes
// and the run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace riesz::cli {

enum class Format { csv, json };

/// Column-oriented numeric table; cells are rendered with round-trip precision.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string csv_escape(const std::string& field);
std::string format_number(double v);
std::string render_csv(const Table& t);
nlohmann::json table_to_json(const Table& t);
/// Flat CSV (header + one row) of the scalar members of a JSON object.
std::string render_scalar_csv(const nlohmann::json& obj);

std::string sha256_hex(const std::string& data);

/// Writes via a temporary file in the same directory followed by rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct OutputRecord {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command_line;
    std::uint64_t master_seed = 0;
    std::string tool_version;
    std::string timestamp;
    std::string input_digest;
    std::vector<OutputRecord> outputs;

    [[nodiscard]] nlohmann::json to_json() const;
};

std::string utc_timestamp();

}  // namespace riesz::cli
