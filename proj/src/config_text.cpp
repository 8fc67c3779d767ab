/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mvdc/config_text.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace mvdc::config {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view line)
{
    bool in_string = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (in_string && c == '\\') {
            ++k;
        } else if (c == '"') {
            in_string = !in_string;
        } else if (c == '#' && !in_string) {
            return line.substr(0, k);
        }
    }
    return line;
}

bool valid_name(std::string_view name)
{
    if (name.empty()) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

double parse_number(std::string_view text, int line)
{
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : text) {
        if (c != '_') cleaned.push_back(c);
    }
    std::string_view body = cleaned;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);

    double value = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || end != body.data() + body.size() || body.empty()) {
        throw ParseError(line, "invalid value '" + std::string(text) + "'");
    }
    return value;
}

std::string parse_string(std::string_view text, int line)
{
    std::string out;
    for (std::size_t k = 1; k < text.size(); ++k) {
        const char c = text[k];
        if (c == '\\') {
            if (k + 1 >= text.size()) break;
            const char next = text[++k];
            if (next != '"' && next != '\\') {
                throw ParseError(line, "unsupported escape '\\" + std::string(1, next) + "'");
            }
            out.push_back(next);
        } else if (c == '"') {
            if (k + 1 != text.size()) {
                throw ParseError(line, "trailing characters after string");
            }
            return out;
        } else {
            out.push_back(c);
        }
    }
    throw ParseError(line, "unterminated string");
}

}  // namespace

Value parse_value(std::string_view raw, int line)
{
    const std::string_view text = trim(raw);
    if (text.empty()) {
        throw ParseError(line, "missing value");
    }
    if (text.front() == '"') {
        return parse_string(text, line);
    }
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.front() == '[') {
        if (text.back() != ']') {
            throw ParseError(line, "unterminated array");
        }
        std::vector<double> items;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        while (!body.empty()) {
            const auto comma = body.find(',');
            const auto item = trim(body.substr(0, comma));
            if (item.empty()) {
                // a single trailing comma is allowed
                if (comma == std::string_view::npos) break;
                throw ParseError(line, "empty array element");
            }
            items.push_back(parse_number(item, line));
            if (comma == std::string_view::npos) break;
            body = trim(body.substr(comma + 1));
        }
        return items;
    }
    return parse_number(text, line);
}

std::string type_name(const Value& value)
{
    switch (value.index()) {
    case 0: return "number";
    case 1: return "string";
    case 2: return "boolean";
    default: return "array";
    }
}

Document parse(std::string_view text)
{
    Document doc;
    std::set<std::string> single_tables;
    int line_no = 0;

    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        line = trim(strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            const bool is_array = line.starts_with("[[");
            const std::string_view close = is_array ? "]]" : "]";
            if (!line.ends_with(close)) {
                throw ParseError(line_no, "malformed table header '" + std::string(line) + "'");
            }
            const std::size_t open = is_array ? 2 : 1;
            const auto name = trim(line.substr(open, line.size() - open - close.size()));
            if (!valid_name(name)) {
                throw ParseError(line_no, "invalid table name '" + std::string(name) + "'");
            }
            if (!is_array && !single_tables.insert(std::string(name)).second) {
                throw ParseError(line_no, "table [" + std::string(name) + "] defined twice");
            }
            doc.tables.push_back(Table{std::string(name), is_array, line_no, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
        }
        const auto key = trim(line.substr(0, eq));
        if (!valid_name(key)) {
            throw ParseError(line_no, "invalid key '" + std::string(key) + "'");
        }
        if (doc.tables.empty()) {
            throw ParseError(line_no, "key '" + std::string(key) + "' appears before any [table]");
        }
        auto& table = doc.tables.back();
        for (const auto& entry : table.entries) {
            if (entry.key == key) {
                throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
            }
        }
        table.entries.push_back(Entry{std::string(key), parse_value(line.substr(eq + 1), line_no), line_no});
    }
    return doc;
}

}  // namespace mvdc::config
