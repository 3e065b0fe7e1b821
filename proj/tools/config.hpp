#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace passive_rl::cli {

/// Flat `key = value` file with `[section]` headers. Keys before the first header
/// belong to the "" section. `#` and `;` start comments.
class Config {
public:
    static Config parse(std::istream& in);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, std::string value);

    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

    /// Throws ValidationError naming the first key of `section` outside `allowed`.
    void require_known(const std::string& section, const std::set<std::string>& allowed) const;
    /// Throws ValidationError for sections outside `allowed`.
    void require_sections(const std::set<std::string>& allowed) const;

    /// Directory of the loaded file; relative paths in values resolve against it.
    const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
    std::filesystem::path resolve(const std::string& value) const;

    /// All entries as (section.key, value), sorted.
    std::vector<std::pair<std::string, std::string>> entries() const;

private:
    std::optional<std::string> raw(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, std::string>> values_;
    std::filesystem::path base_dir_;
};

/// Splits on commas and trims whitespace; empty pieces are dropped.
std::vector<std::string> split_list(const std::string& text);

} // namespace passive_rl::cli
