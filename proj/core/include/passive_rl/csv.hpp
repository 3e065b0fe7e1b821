#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace passive_rl {

/// Shortest text that round-trips the double ("%.17g").
std::string format_double(double x);

/// Minimal CSV builder. Values are written verbatim; callers pass numbers or
/// identifiers, never free text containing commas.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& row(const std::vector<std::string>& fields);
    const std::string& text() const noexcept { return text_; }
    std::size_t columns() const noexcept { return columns_; }

    /// Writes to a sibling temporary file and renames it into place.
    void save(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

/// Atomic whole-file write (temporary + rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Splits a CSV file into header and rows. No quoting support.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

} // namespace passive_rl
