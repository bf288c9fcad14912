#include "cloudseg/report.hpp"

#include <fstream>

#include <fmt/format.h>

#include "cloudseg/error.hpp"

namespace cloudseg {

namespace {

std::string escape_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += escape_cell(cells[i]);
    }
    return out;
}

}  // namespace

CsvReport::CsvReport(Config config) : config_(std::move(config)) {}

void CsvReport::add_comment(const std::string& text) { comments_.push_back(text); }

void CsvReport::set_header(std::vector<std::string> columns) { header_ = std::move(columns); }

void CsvReport::add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

std::string CsvReport::str() const {
    std::string out = "# config:";
    for (const auto& [key, value] : config_) out += " " + key + "=" + value;
    out += '\n';
    for (const auto& c : comments_) out += "# " + c + '\n';
    if (!header_.empty()) out += join_row(header_) + '\n';
    for (const auto& row : rows_) out += join_row(row) + '\n';
    return out;
}

void CsvReport::write(const std::filesystem::path& path, bool force) const { write_text_file(path, str(), force); }

std::string format_number(double value) { return fmt::format("{:.6f}", value); }

void ensure_writable(const std::filesystem::path& path, bool force) {
    if (!force && std::filesystem::exists(path)) {
        throw IoError("refusing to overwrite " + path.string() + " (pass --force)");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text, bool force) {
    ensure_writable(path, force);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace cloudseg
