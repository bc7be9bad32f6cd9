#include "mwb/records.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "mwb/errors.hpp"

namespace mwb::records {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

bool valid_key(std::string_view key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    });
}

bool contains(std::span<const std::string> list, const std::string& key) {
    return std::find(list.begin(), list.end(), key) != list.end();
}

}  // namespace

Record& Record::add(std::string key, std::string value) {
    fields.push_back(Field{std::move(key), std::move(value)});
    return *this;
}

Record& Record::add_if(std::string key, const std::optional<std::string>& value) {
    if (value) {
        add(std::move(key), *value);
    }
    return *this;
}

std::optional<std::string> Record::get(std::string_view key) const {
    for (const auto& field : fields) {
        if (field.key == key) {
            return field.value;
        }
    }
    return std::nullopt;
}

const std::string& Record::require(std::string_view key) const {
    for (const auto& field : fields) {
        if (field.key == key) {
            return field.value;
        }
    }
    fail(line, "[" + type + "] record is missing '" + std::string(key) + "'");
}

std::vector<std::string> Record::get_all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& field : fields) {
        if (field.key == key) {
            out.push_back(field.value);
        }
    }
    return out;
}

std::optional<std::string> Document::header_value(std::string_view key) const {
    for (const auto& field : header) {
        if (field.key == key) {
            return field.value;
        }
    }
    return std::nullopt;
}

std::string escape(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape(std::string_view value, int line) {
    std::string out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i] != '\\') {
            out.push_back(value[i]);
            continue;
        }
        if (++i == value.size()) {
            fail(line, "dangling escape at end of value");
        }
        switch (value[i]) {
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 't': out.push_back('\t'); break;
            default: fail(line, std::string("unknown escape '\\") + value[i] + "'");
        }
    }
    return out;
}

Document parse(std::string_view text) {
    Document document;
    Record* current = nullptr;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3 || !valid_key(line.substr(1, line.size() - 2))) {
                fail(line_number, "malformed record header '" + std::string(line) + "'");
            }
            Record record(std::string(line.substr(1, line.size() - 2)));
            record.line = line_number;
            document.records.push_back(std::move(record));
            current = &document.records.back();
        } else {
            const auto colon = line.find(':');
            if (colon == std::string_view::npos) {
                fail(line_number, "expected 'key: value'");
            }
            const std::string key(line.substr(0, colon));
            if (!valid_key(key)) {
                fail(line_number, "invalid key '" + key + "'");
            }
            std::string_view raw = line.substr(colon + 1);
            if (!raw.empty() && raw.front() == ' ') {
                raw.remove_prefix(1);
            }
            Field field{key, unescape(raw, line_number)};
            if (current != nullptr) {
                current->fields.push_back(std::move(field));
            } else {
                document.header.push_back(std::move(field));
            }
        }
        if (end == text.size()) break;
    }
    if (document.header.empty() && document.records.empty()) {
        fail(line_number, "empty document");
    }
    return document;
}

void check(const Document& document, std::span<const Schema> schemas,
           std::span<const std::string> header_keys) {
    std::map<std::string, int> header_seen;
    for (const auto& field : document.header) {
        if (!contains(header_keys, field.key)) {
            fail(0, "unknown header key '" + field.key + "'");
        }
        if (++header_seen[field.key] > 1) {
            fail(0, "header key '" + field.key + "' appears twice");
        }
    }
    for (const auto& record : document.records) {
        auto schema = std::find_if(schemas.begin(), schemas.end(),
                                   [&](const Schema& s) { return s.type == record.type; });
        if (schema == schemas.end()) {
            fail(record.line, "unknown record type [" + record.type + "]");
        }
        std::map<std::string, int> seen;
        for (const auto& field : record.fields) {
            const bool single = contains(schema->required, field.key) ||
                                contains(schema->optional, field.key);
            if (!single && !contains(schema->repeated, field.key)) {
                fail(record.line, "unknown key '" + field.key + "' in [" + record.type + "]");
            }
            if (++seen[field.key] > 1 && single) {
                fail(record.line, "key '" + field.key + "' repeated in [" + record.type + "]");
            }
        }
        for (const auto& key : schema->required) {
            if (!seen.contains(key)) {
                fail(record.line, "[" + record.type + "] record is missing '" + key + "'");
            }
        }
    }
}

std::string write(const Document& document) {
    std::string out;
    for (const auto& field : document.header) {
        out += field.key + ": " + escape(field.value) + "\n";
    }
    for (const auto& record : document.records) {
        out += "\n[" + record.type + "]\n";
        for (const auto& field : record.fields) {
            out += field.key + ": " + escape(field.value) + "\n";
        }
    }
    return out;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        auto end = value.find(',', pos);
        if (end == std::string_view::npos) end = value.size();
        std::string_view item = value.substr(pos, end - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.emplace_back(item);
        pos = end + 1;
    }
    return out;
}

std::string join_list(std::span<const std::string> items) {
    std::string out;
    for (const auto& item : items) {
        out += (out.empty() ? "" : ",") + item;
    }
    return out;
}

}  // namespace mwb::records
