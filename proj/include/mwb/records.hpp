#pragma once

// Line-oriented record documents. See docs/record-format.md for the grammar.
//
//   # comment
//   format-version: 1
//
//   [fragment]
//   id: plan
//   name: Plan
//
// Header fields precede the first record. Values are taken verbatim after
// "key: "; backslash, newline, carriage return and tab are escaped.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mwb::records {

inline constexpr std::string_view kFormatVersion = "1";

struct Field {
    std::string key;
    std::string value;

    bool operator==(const Field&) const = default;
};

struct Record {
    std::string type;
    std::vector<Field> fields;
    int line = 0;  // 1-based line of the "[type]" header, 0 when built in code

    Record() = default;
    explicit Record(std::string record_type) : type(std::move(record_type)) {}

    Record& add(std::string key, std::string value);
    Record& add_if(std::string key, const std::optional<std::string>& value);

    std::optional<std::string> get(std::string_view key) const;
    /// Throws ParseError when the key is absent.
    const std::string& require(std::string_view key) const;
    std::vector<std::string> get_all(std::string_view key) const;
};

struct Document {
    std::vector<Field> header;
    std::vector<Record> records;

    std::optional<std::string> header_value(std::string_view key) const;
};

/// Strict shape of one record type: which keys may appear and how often.
struct Schema {
    std::string type;
    std::vector<std::string> required;
    std::vector<std::string> optional;
    std::vector<std::string> repeated;  // zero or more occurrences
};

/// Parses text into a document. Throws ParseError with a line number on
/// malformed input; an input with neither header nor records is malformed.
Document parse(std::string_view text);

/// Rejects unknown record types, unknown keys, missing required keys and
/// duplicated single-valued keys.
void check(const Document& document, std::span<const Schema> schemas,
           std::span<const std::string> header_keys);

std::string write(const Document& document);

std::string escape(std::string_view value);
std::string unescape(std::string_view value, int line);

std::vector<std::string> split_list(std::string_view value);
std::string join_list(std::span<const std::string> items);

}  // namespace mwb::records
