#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace esr {

/// Flat `key = value` parameters. Lines starting with '#' and blank lines are ignored.
using ParamMap = std::map<std::string, std::string>;

ParamMap parse_key_values(const std::string& text, const std::string& origin = "<string>");
ParamMap load_key_values(const std::filesystem::path& path);

double get_double(const ParamMap& params, const std::string& key, double fallback);
std::int64_t get_int(const ParamMap& params, const std::string& key, std::int64_t fallback);
std::string get_string(const ParamMap& params, const std::string& key, const std::string& fallback);

/// Comma-separated table with a header row of column names.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;  // throws ConfigError when absent
};

Table parse_table(const std::string& text, const std::string& origin = "<string>");
Table load_table(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double_strict(const std::string& text, const std::string& context);

}  // namespace esr
