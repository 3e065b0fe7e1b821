#include "passive_rl/csv.hpp"

#include "passive_rl/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace passive_rl {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    row(header);
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw ValidationError("CSV row has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_ += ',';
        text_ += fields[i];
    }
    text_ += '\n';
    return *this;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_file_atomic(path, text_); }

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    auto split = [](const std::string& text) {
        std::vector<std::string> out;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        if (!text.empty() && text.back() == ',') out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw ParseError(line_no, "expected " + std::to_string(table.header.size()) + " fields");
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw ParseError(1, "empty CSV file");
    return table;
}

} // namespace passive_rl
