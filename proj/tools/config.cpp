#include "config.hpp"

#include "passive_rl/errors.hpp"

#include <fstream>
#include <sstream>

namespace passive_rl::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

} // namespace

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string piece;
    while (std::getline(is, piece, ',')) {
        piece = trim(piece);
        if (!piece.empty()) out.push_back(piece);
    }
    return out;
}

Config Config::parse(std::istream& in) {
    Config cfg;
    std::string section;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(number, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ParseError(number, "empty section name");
            cfg.values_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(number, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(number, "missing key before '='");
        auto& table = cfg.values_[section];
        if (table.contains(key)) throw ParseError(number, "duplicate key '" + qualified(section, key) + "'");
        table[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    Config cfg = parse(in);
    cfg.base_dir_ = path.parent_path();
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

void Config::set(const std::string& section, const std::string& key, std::string value) {
    values_[section][key] = std::move(value);
}

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    if (s == values_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double x = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(qualified(section, key) + ": expected a number, got '" + *v + "'");
    }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const int x = std::stoi(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(qualified(section, key) + ": expected an integer, got '" + *v + "'");
    }
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        if (!v->empty() && v->front() == '-') throw std::invalid_argument(*v);
        const auto x = std::stoull(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(qualified(section, key) + ": expected an unsigned integer, got '" + *v + "'");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ValidationError(qualified(section, key) + ": expected true or false, got '" + *v + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    const auto v = raw(section, key);
    if (!v) return out;
    for (const auto& piece : split_list(*v)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw ValidationError(qualified(section, key) + ": expected a number, got '" + piece + "'");
        }
    }
    return out;
}

void Config::require_known(const std::string& section, const std::set<std::string>& allowed) const {
    const auto s = values_.find(section);
    if (s == values_.end()) return;
    for (const auto& [key, value] : s->second) {
        if (!allowed.contains(key)) throw ValidationError("unknown config key '" + qualified(section, key) + "'");
    }
}

void Config::require_sections(const std::set<std::string>& allowed) const {
    for (const auto& [section, table] : values_) {
        if (!allowed.contains(section)) throw ValidationError("unknown config section [" + section + "]");
    }
}

std::filesystem::path Config::resolve(const std::string& value) const {
    const std::filesystem::path p(value);
    if (p.is_absolute() || base_dir_.empty()) return p;
    return base_dir_ / p;
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [section, table] : values_)
        for (const auto& [key, value] : table) out.emplace_back(qualified(section, key), value);
    return out;
}

} // namespace passive_rl::cli
