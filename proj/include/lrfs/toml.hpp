#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lrfs/core.hpp"

namespace lrfs::toml {

/// Minimal TOML reader covering the scenario-configuration subset:
/// comments, [tables], [[arrays of tables]], dotted and quoted keys, basic
/// strings, integers (with underscores), floats, booleans, (possibly
/// nested, multi-line) arrays, and inline tables. Parses into a JSON tree.
class Parser {
public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    nlohmann::json parse() {
        nlohmann::json root = nlohmann::json::object();
        nlohmann::json* table = &root;
        while (true) {
            skip_trivia();
            if (eof()) break;
            if (peek() == '[') {
                table = parse_table_header(root);
            } else {
                parse_keyval(*table);
                expect_line_end();
            }
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("line " + std::to_string(line_), why);
    }

    [[nodiscard]] bool eof() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }
    char take() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    // Spaces, newlines, and comments.
    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '\n') {
                take();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    void expect_line_end() {
        skip_spaces();
        if (eof()) return;
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++pos_;
        if (eof()) return;
        if (peek() == '\r') ++pos_;
        if (eof()) return;
        if (peek() != '\n') fail("expected end of line");
        take();
    }

    std::string parse_key_segment() {
        skip_spaces();
        if (eof()) fail("expected key");
        if (peek() == '"' || peek() == '\'') return parse_string();
        std::string key;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key += take();
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected key");
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{ parse_key_segment() };
        skip_spaces();
        while (!eof() && peek() == '.') {
            take();
            parts.push_back(parse_key_segment());
            skip_spaces();
        }
        return parts;
    }

    nlohmann::json* descend(nlohmann::json& from, const std::vector<std::string>& parts,
                            std::size_t upto) {
        nlohmann::json* cur = &from;
        for (std::size_t i = 0; i < upto; ++i) {
            if (!cur->is_object()) fail("key path crosses a non-table value");
            nlohmann::json& next = (*cur)[parts[i]];
            if (next.is_null()) next = nlohmann::json::object();
            if (next.is_array()) {
                if (next.empty()) fail("key path crosses an empty table array");
                cur = &next.back();
            } else {
                cur = &next;
            }
        }
        return cur;
    }

    nlohmann::json* parse_table_header(nlohmann::json& root) {
        take();  // '['
        bool array_of_tables = !eof() && peek() == '[';
        if (array_of_tables) take();
        auto parts = parse_dotted_key();
        skip_spaces();
        if (eof() || take() != ']') fail("unterminated table header");
        if (array_of_tables && (eof() || take() != ']')) fail("expected ]] to close table array");
        expect_line_end();

        nlohmann::json* parent = descend(root, parts, parts.size() - 1);
        nlohmann::json& slot = (*parent)[parts.back()];
        if (array_of_tables) {
            if (slot.is_null()) slot = nlohmann::json::array();
            if (!slot.is_array()) fail("table array conflicts with an existing value");
            slot.push_back(nlohmann::json::object());
            return &slot.back();
        }
        if (slot.is_null()) slot = nlohmann::json::object();
        if (!slot.is_object()) fail("table conflicts with an existing value");
        return &slot;
    }

    void parse_keyval(nlohmann::json& table) {
        auto parts = parse_dotted_key();
        skip_spaces();
        if (eof() || take() != '=') fail("expected '=' after key");
        nlohmann::json* parent = descend(table, parts, parts.size() - 1);
        if (!parent->is_object()) fail("key path crosses a non-table value");
        if (parent->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
        (*parent)[parts.back()] = parse_value();
    }

    nlohmann::json parse_value() {
        skip_spaces();
        if (eof()) fail("expected value");
        char c = peek();
        if (c == '"' || c == '\'') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        return parse_scalar();
    }

    std::string parse_string() {
        char quote = take();
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string");
            char c = take();
            if (c == quote) break;
            if (c == '\n') fail("newline inside string");
            if (quote == '"' && c == '\\') {
                if (eof()) fail("dangling escape");
                char e = take();
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    nlohmann::json parse_array() {
        take();  // '['
        nlohmann::json arr = nlohmann::json::array();
        while (true) {
            skip_trivia();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                take();
                break;
            }
            arr.push_back(parse_value());
            skip_trivia();
            if (!eof() && peek() == ',') {
                take();
                continue;
            }
            if (eof() || peek() != ']') fail("expected ',' or ']' in array");
        }
        return arr;
    }

    nlohmann::json parse_inline_table() {
        take();  // '{'
        nlohmann::json obj = nlohmann::json::object();
        skip_trivia();
        if (!eof() && peek() == '}') {
            take();
            return obj;
        }
        while (true) {
            skip_trivia();
            parse_keyval(obj);
            skip_trivia();
            if (eof()) fail("unterminated inline table");
            char c = take();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}' in inline table");
        }
        return obj;
    }

    nlohmann::json parse_scalar() {
        std::string word;
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == ']' ||
                c == '}' || c == '#')
                break;
            word += take();
        }
        if (word == "true") return true;
        if (word == "false") return false;
        std::string digits;
        for (char c : word)
            if (c != '_') digits += c;
        bool looks_float = digits.find_first_of(".eE") != std::string::npos;
        if (!looks_float) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec == std::errc() && p == digits.data() + digits.size()) return v;
        }
        try {
            std::size_t used = 0;
            double v = std::stod(digits, &used);
            if (used == digits.size()) return v;
        } catch (const std::exception&) {
        }
        fail("cannot parse value '" + word + "'");
    }

    std::string text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

inline nlohmann::json parse(const std::string& text) { return Parser(text).parse(); }

inline nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open configuration file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace lrfs::toml
