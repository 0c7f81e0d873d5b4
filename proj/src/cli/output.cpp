#include "cli/output.hpp"

#include <fmt/format.h>

#include <fstream>

#include "twophoton/errors.hpp"

namespace twophoton::cli {

std::string render_header(const RunConfig& cfg, const KeyValues& results) {
    std::string out = fmt::format("# twophoton {}\n# --- config ---\n", to_string(cfg.command));
    for (const auto& [k, v] : cfg.echo()) out += fmt::format("# {} = {}\n", k, v);
    if (!results.empty()) {
        out += "# --- results ---\n";
        for (const auto& [k, v] : results) out += fmt::format("# {} = {}\n", k, v);
    }
    return out;
}

std::string render_csv(const std::string& header, const std::vector<Column>& columns) {
    std::string out = header;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].values.size() != columns.front().values.size())
            throw InvalidArgument("CSV columns differ in length");
        out += (c ? "," : "") + columns[c].name;
    }
    out += '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
    fmt::memory_buffer buf;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            fmt::format_to(std::back_inserter(buf), "{}{:.12e}", c ? "," : "", columns[c].values[r]);
        buf.push_back('\n');
    }
    out.append(buf.data(), buf.size());
    return out;
}

std::string render_record(const std::string& header, const KeyValues& fields) {
    std::string out = header;
    for (const auto& [k, v] : fields) out += fmt::format("{} = {}\n", k, v);
    return out;
}

void write_atomic(const std::filesystem::path& dir, const std::string& name,
                  const std::string& content) {
    std::filesystem::create_directories(dir);
    const auto target = dir / name;
    const auto temp = dir / ("." + name + ".tmp");
    {
        std::ofstream f(temp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + temp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw std::runtime_error("write failed for " + temp.string());
    }
    std::filesystem::rename(temp, target);
}

}  // namespace twophoton::cli
