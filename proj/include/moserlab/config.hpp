#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace moserlab::config {

/// Scalar or single-line array of scalars.
using Scalar = std::variant<bool, double, std::string>;
struct Value {
    std::variant<Scalar, std::vector<Scalar>> v;
    int line = 0;
};

/// Key-value tree of the TOML subset: '#' comments, [section] and [a.b] headers,
/// key = value with bare keys [A-Za-z0-9_-], values are "strings" (escapes \" \\ \n \t),
/// numbers, true/false, or [scalar, ...] on one line. Keys are stored dotted ("problem.n").
class Config {
public:
    /// Throws ConfigError "config line N: ..." on malformed input or a repeated key.
    static Config parse(std::string_view text);
    /// Reads and parses a file; ConfigError when it cannot be opened.
    static Config load(const std::string& path);

    bool has(std::string_view key) const;
    /// Typed getters throw ConfigError on a type mismatch.
    std::optional<double> number(std::string_view key) const;
    std::optional<std::string> string(std::string_view key) const;
    std::optional<bool> boolean(std::string_view key) const;
    std::optional<std::vector<double>> numbers(std::string_view key) const;
    std::optional<std::vector<std::string>> strings(std::string_view key) const;

    double number_or(std::string_view key, double fallback) const { return number(key).value_or(fallback); }
    int integer_or(std::string_view key, int fallback) const;
    std::string string_or(std::string_view key, std::string fallback) const { return string(key).value_or(fallback); }

    /// ConfigError naming the first key outside `allowed`.
    void require_known(const std::set<std::string>& allowed) const;
    const std::map<std::string, Value, std::less<>>& entries() const { return entries_; }

private:
    const Value* find(std::string_view key) const;
    std::map<std::string, Value, std::less<>> entries_;
};

}  // namespace moserlab::config
