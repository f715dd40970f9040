#include "esr/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "esr/errors.hpp"

namespace esr {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

ParamMap parse_key_values(const std::string& text, const std::string& origin) {
    ParamMap out;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

ParamMap load_key_values(const std::filesystem::path& path) {
    return parse_key_values(read_text_file(path), path.string());
}

double get_double(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    return parse_double_strict(it->second, "parameter '" + key + "'");
}

std::int64_t get_int(const ParamMap& params, const std::string& key, std::int64_t fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::int64_t value = 0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("parameter '" + key + "' is not an integer: '" + s + "'");
    }
    return value;
}

std::string get_string(const ParamMap& params, const std::string& key, const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw ConfigError("table has no column '" + name + "'");
}

Table parse_table(const std::string& text, const std::string& origin) {
    Table table;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = split(t, ',');
        if (table.columns.empty()) {
            table.columns = std::move(cells);
            continue;
        }
        if (cells.size() != table.columns.size()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(table.columns.size()) + " cells, got " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double_strict(c, origin + ":" + std::to_string(line_no)));
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw ConfigError(origin + ": table has no header");
    return table;
}

Table load_table(const std::filesystem::path& path) { return parse_table(read_text_file(path), path.string()); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw ContractViolation("format_double failed");
    return std::string(buf, ptr);
}

double parse_double_strict(const std::string& text, const std::string& context) {
    double value = 0.0;
    const std::string t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(context + ": not a number: '" + text + "'");
    }
    return value;
}

}  // namespace esr
