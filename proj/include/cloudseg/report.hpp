#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cloudseg {

/// CSV report whose first line is a `# config:` comment recording the run parameters.
class CsvReport {
public:
    using Config = std::vector<std::pair<std::string, std::string>>;

    explicit CsvReport(Config config = {});

    void add_comment(const std::string& text);
    void set_header(std::vector<std::string> columns);
    void add_row(std::vector<std::string> cells);

    std::size_t row_count() const noexcept { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path, bool force) const;

private:
    Config config_;
    std::vector<std::string> comments_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Fixed six-decimal formatting used in every report.
std::string format_number(double value);

/// Throws IoError if `path` exists and `force` is false.
void ensure_writable(const std::filesystem::path& path, bool force);

/// Writes text atomically enough for our purposes (truncate + write), honouring `force`.
void write_text_file(const std::filesystem::path& path, const std::string& text, bool force);

}  // namespace cloudseg
