/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Minimal reader for the TOML subset used by scenario files:
//
//   # comment
//   [table]
//   [[array_table]]
//   key = 1.5e-3 | "text" | true | [1, 2, 3]
//
// No inline tables, dotted keys, multi-line values or string escapes other
// than \" and \\. Errors are ParseError with the offending line.

#include "mvdc/errors.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mvdc::config {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Entry {
    std::string key;
    Value value;
    int line = 0;
};

struct Table {
    std::string name;
    bool is_array = false;  // declared with [[name]]
    int line = 0;
    std::vector<Entry> entries;
};

struct Document {
    std::vector<Table> tables;
};

Document parse(std::string_view text);

/// Parses a single value literal (used for command-line overrides).
Value parse_value(std::string_view text, int line);

std::string type_name(const Value& value);

}  // namespace mvdc::config
