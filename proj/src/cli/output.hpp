#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"

namespace twophoton::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// "# twophoton <command>", the echoed config block and an optional results
// block, every line '#'-prefixed.
std::string render_header(const RunConfig& cfg, const KeyValues& results);

struct Column {
    std::string name;
    std::vector<double> values;
};

// Header, then a CSV header row and one row per sample.
std::string render_csv(const std::string& header, const std::vector<Column>& columns);

// Header, then plain `key = value` lines.
std::string render_record(const std::string& header, const KeyValues& fields);

// Writes to a temporary file in `dir` and renames it into place.
void write_atomic(const std::filesystem::path& dir, const std::string& name,
                  const std::string& content);

}  // namespace twophoton::cli
