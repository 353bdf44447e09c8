#include "moserlab/config.hpp"

#include "moserlab/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace moserlab::config {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

bool key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class LineParser {
public:
    LineParser(std::string_view s, int line) : s_(s), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool at_end_or_comment() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(line_, std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string key() {
        skip_ws();
        std::string out;
        while (true) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && key_char(s_[pos_])) ++pos_;
            if (pos_ == start) fail(line_, "expected a key");
            out.append(s_.substr(start, pos_ - start));
            if (peek() != '.') break;
            out.push_back('.');
            ++pos_;
        }
        return out;
    }

    Scalar scalar() {
        skip_ws();
        const char c = peek();
        if (c == '"') return quoted();
        if (s_.substr(pos_, 4) == "true" && !key_char(pos_ + 4 < s_.size() ? s_[pos_ + 4] : ' ')) {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "false" && !key_char(pos_ + 5 < s_.size() ? s_[pos_ + 5] : ' ')) {
            pos_ += 5;
            return false;
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                    s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '_')) {
            ++pos_;
        }
        std::string tok(s_.substr(start, pos_ - start));
        if (tok.empty()) fail(line_, "expected a value");
        std::erase(tok, '_');
        if (!tok.empty() && tok.front() == '+') tok.erase(0, 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
            fail(line_, "bad value '" + std::string(s_.substr(start, pos_ - start)) + "'");
        }
        return v;
    }

    Value value() {
        skip_ws();
        Value out;
        out.line = line_;
        if (peek() != '[') {
            out.v = scalar();
            return out;
        }
        ++pos_;
        std::vector<Scalar> items;
        skip_ws();
        if (peek() == ']') {
            ++pos_;
            out.v = items;
            return out;
        }
        while (true) {
            items.push_back(scalar());
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                if (peek() == ']') {
                    ++pos_;
                    break;
                }
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                break;
            }
            fail(line_, "expected ',' or ']' in array");
        }
        out.v = items;
        return out;
    }

private:
    std::string quoted() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(line_, std::string("unknown escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) fail(line_, "unterminated string");
        ++pos_;
        return out;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

const char* type_name(const Scalar& s) {
    if (std::holds_alternative<bool>(s)) return "boolean";
    if (std::holds_alternative<double>(s)) return "number";
    return "string";
}

template <class T>
T get_as(const Value& v, std::string_view key, const char* want) {
    if (const auto* s = std::get_if<Scalar>(&v.v)) {
        if (const auto* t = std::get_if<T>(s)) return *t;
        fail(v.line, std::string(key) + " must be a " + want + ", got a " + type_name(*s));
    }
    fail(v.line, std::string(key) + " must be a " + want + ", got an array");
}

template <class T>
std::vector<T> get_array(const Value& v, std::string_view key, const char* want) {
    const auto* arr = std::get_if<std::vector<Scalar>>(&v.v);
    if (!arr) fail(v.line, std::string(key) + " must be an array");
    std::vector<T> out;
    for (const auto& s : *arr) {
        const auto* t = std::get_if<T>(&s);
        if (!t) fail(v.line, std::string(key) + " must hold " + want + "s");
        out.push_back(*t);
    }
    return out;
}

}  // namespace

Config Config::parse(std::string_view text) {
    Config c;
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        start = end + 1;
        LineParser p(line, line_no);
        if (p.at_end_or_comment()) {
            if (end == text.size()) break;
            continue;
        }
        if (p.peek() == '[') {
            p.expect('[');
            section = p.key();
            p.expect(']');
            if (!p.at_end_or_comment()) fail(line_no, "trailing characters after section header");
        } else {
            const std::string key = (section.empty() ? "" : section + ".") + p.key();
            p.expect('=');
            Value v = p.value();
            if (!p.at_end_or_comment()) fail(line_no, "trailing characters after value");
            if (c.entries_.count(key)) fail(line_no, "repeated key " + key);
            c.entries_.emplace(key, std::move(v));
        }
        if (end == text.size()) break;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const Value* Config::find(std::string_view key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool Config::has(std::string_view key) const { return find(key) != nullptr; }

std::optional<double> Config::number(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return get_as<double>(*v, key, "number");
}

std::optional<std::string> Config::string(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return get_as<std::string>(*v, key, "string");
}

std::optional<bool> Config::boolean(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return get_as<bool>(*v, key, "boolean");
}

std::optional<std::vector<double>> Config::numbers(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return get_array<double>(*v, key, "number");
}

std::optional<std::vector<std::string>> Config::strings(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return get_array<std::string>(*v, key, "string");
}

int Config::integer_or(std::string_view key, int fallback) const {
    const auto v = number(key);
    if (!v) return fallback;
    if (*v != std::floor(*v) || std::fabs(*v) > 1e9) fail(find(key)->line, std::string(key) + " must be an integer");
    return static_cast<int>(*v);
}

void Config::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : entries_) {
        if (!allowed.count(k)) fail(v.line, "unknown key " + k);
    }
}

}  // namespace moserlab::config
