#include "mwb/catalog.hpp"

#include <algorithm>

#include "mwb/errors.hpp"

namespace mwb {

// Generated from data/catalog.records by the build.
extern const char* const kShippedCatalogText;

namespace {

const std::vector<std::string> kCatalogHeader = {"format-version", "metamodel-version"};

[[noreturn]] void bad_value(const records::Record& record, std::string_view key,
                            const std::string& value) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(record.line) + ": invalid " +
                                           std::string(key) + " '" + value + "'");
}

template <typename T, typename Parser>
T parse_field(const records::Record& record, std::string_view key, Parser parser) {
    const auto& value = record.require(key);
    auto parsed = parser(value);
    if (!parsed) {
        bad_value(record, key, value);
    }
    return *parsed;
}

template <typename T, typename Parser>
std::vector<T> parse_list(const records::Record& record, std::string_view key, Parser parser) {
    std::vector<T> out;
    if (auto value = record.get(key)) {
        for (const auto& item : records::split_list(*value)) {
            auto parsed = parser(item);
            if (!parsed) {
                bad_value(record, key, item);
            }
            out.push_back(*parsed);
        }
    }
    return out;
}

template <typename T>
std::string list_text(const std::vector<T>& items) {
    std::vector<std::string> names;
    for (const auto& item : items) {
        if constexpr (std::is_same_v<T, FragmentId>) {
            names.push_back(item.str());
        } else {
            names.emplace_back(to_string(item));
        }
    }
    return records::join_list(names);
}

std::optional<FragmentId> optional_id(const records::Record& record, std::string_view key) {
    if (auto value = record.get(key)) {
        return FragmentId(*value);
    }
    return std::nullopt;
}

records::Record applicability_record(const ApplicabilityEntry& entry) {
    records::Record record("applicability");
    record.add("fragment", entry.fragment.str())
        .add("migration-type", std::string(to_string(entry.migration_type)))
        .add("level", std::string(to_string(entry.level)))
        .add_if("situation-note", entry.situation_note);
    return record;
}

records::Record rule_record(const TransformationRule& rule) {
    records::Record record("rule");
    record.add("id", rule.id).add("name", rule.name).add("meaning", rule.meaning);
    record.add_if("syntax-note", rule.syntax_note);
    if (!rule.guard.migration_types.empty()) {
        record.add("guard-types", list_text(rule.guard.migration_types));
    }
    if (!rule.guard.phases.empty()) {
        record.add("guard-phases", list_text(rule.guard.phases));
    }
    record.add("action", std::string(to_string(rule.action)));
    record.add("phase-filter", rule.selector.phase ? rule.selector.phase->str() : "selected");
    if (!rule.selector.levels.empty()) {
        record.add("levels", list_text(rule.selector.levels));
    }
    if (!rule.selector.kinds.empty()) {
        record.add("kinds", list_text(rule.selector.kinds));
    }
    if (!rule.relationship_types.empty()) {
        record.add("relationship-types", list_text(rule.relationship_types));
    }
    return record;
}

TransformationRule rule_from_record(const records::Record& record) {
    TransformationRule rule;
    rule.id = record.require("id");
    rule.name = record.require("name");
    rule.meaning = record.require("meaning");
    rule.syntax_note = record.get("syntax-note");
    rule.guard.migration_types =
        parse_list<MigrationType>(record, "guard-types", parse_migration_type);
    rule.guard.phases = parse_list<FragmentId>(
        record, "guard-phases", [](std::string_view s) { return std::optional(FragmentId(std::string(s))); });
    rule.action = parse_field<RuleAction>(record, "action", parse_rule_action);
    if (const auto& filter = record.require("phase-filter"); filter != "selected") {
        rule.selector.phase = FragmentId(filter);
    }
    rule.selector.levels =
        parse_list<ApplicabilityLevel>(record, "levels", parse_applicability_level);
    rule.selector.kinds = parse_list<FragmentKind>(record, "kinds", parse_fragment_kind);
    rule.relationship_types =
        parse_list<RelationshipType>(record, "relationship-types", parse_relationship_type);
    if (rule.id.empty()) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(record.line) + ": rule id is empty");
    }
    return rule;
}

}  // namespace

const std::vector<records::Schema> kCatalogSchemas = {
    {"fragment", {"id", "name", "kind", "provenance", "definition"},
     {"phase", "parent", "provenance-note"}, {}},
    {"relationship", {"type", "source", "target", "knowledge-source"}, {}, {}},
    {"applicability", {"fragment", "migration-type", "level"}, {"situation-note"}, {}},
    {"technique", {"task", "technique"}, {}, {}},
    {"rule", {"id", "name", "meaning", "action", "phase-filter"},
     {"syntax-note", "guard-types", "guard-phases", "levels", "kinds", "relationship-types"},
     {}},
};

records::Record fragment_record(const MethodFragment& fragment, std::string type) {
    records::Record record(std::move(type));
    record.add("id", fragment.id.str())
        .add("name", fragment.name)
        .add("kind", std::string(to_string(fragment.kind)));
    if (fragment.phase) record.add("phase", fragment.phase->str());
    if (fragment.parent) record.add("parent", fragment.parent->str());
    record.add("provenance", std::string(to_string(fragment.provenance)));
    record.add_if("provenance-note", fragment.provenance_note);
    record.add("definition", fragment.definition);
    return record;
}

MethodFragment fragment_from_record(const records::Record& record) {
    MethodFragment fragment;
    fragment.id = FragmentId(record.require("id"));
    fragment.name = record.require("name");
    fragment.kind = parse_field<FragmentKind>(record, "kind", parse_fragment_kind);
    fragment.phase = optional_id(record, "phase");
    fragment.parent = optional_id(record, "parent");
    fragment.provenance = parse_field<Provenance>(record, "provenance", parse_provenance);
    fragment.provenance_note = record.get("provenance-note");
    fragment.definition = record.require("definition");
    if (fragment.id.empty() || fragment.name.empty()) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(record.line) +
                                               ": fragment id and name must be nonempty");
    }
    return fragment;
}

records::Record relationship_record(const FragmentRelationship& relationship) {
    records::Record record("relationship");
    record.add("type", std::string(to_string(relationship.type)))
        .add("source", relationship.source.str())
        .add("target", relationship.target.str())
        .add("knowledge-source", std::string(to_string(relationship.knowledge_source)));
    return record;
}

FragmentRelationship relationship_from_record(const records::Record& record) {
    FragmentRelationship rel;
    rel.type = parse_field<RelationshipType>(record, "type", parse_relationship_type);
    rel.source = FragmentId(record.require("source"));
    rel.target = FragmentId(record.require("target"));
    rel.knowledge_source =
        parse_field<KnowledgeSource>(record, "knowledge-source", parse_knowledge_source);
    return rel;
}

std::vector<records::Record> metamodel_records(const Metamodel& metamodel) {
    std::vector<records::Record> out;
    for (const auto& fragment : metamodel.fragments) {
        out.push_back(fragment_record(fragment));
    }
    for (const auto& rel : metamodel.relationships) {
        out.push_back(relationship_record(rel));
    }
    for (const auto& entry : metamodel.applicability) {
        out.push_back(applicability_record(entry));
    }
    for (const auto& suggestion : metamodel.techniques) {
        records::Record record("technique");
        record.add("task", suggestion.task.str()).add("technique", suggestion.technique.str());
        out.push_back(std::move(record));
    }
    for (const auto& rule : metamodel.rules) {
        out.push_back(rule_record(rule));
    }
    return out;
}

Metamodel metamodel_from_records(std::string version, const std::vector<records::Record>& recs) {
    Metamodel metamodel;
    metamodel.version = std::move(version);
    for (const auto& record : recs) {
        if (record.type == "fragment") {
            metamodel.fragments.push_back(fragment_from_record(record));
        } else if (record.type == "relationship") {
            metamodel.relationships.push_back(relationship_from_record(record));
        } else if (record.type == "applicability") {
            ApplicabilityEntry entry;
            entry.fragment = FragmentId(record.require("fragment"));
            entry.migration_type =
                parse_field<MigrationType>(record, "migration-type", parse_migration_type);
            entry.level = parse_field<ApplicabilityLevel>(record, "level", parse_applicability_level);
            entry.situation_note = record.get("situation-note");
            metamodel.applicability.push_back(std::move(entry));
        } else if (record.type == "technique") {
            metamodel.techniques.push_back(TechniqueSuggestion{
                FragmentId(record.require("task")), FragmentId(record.require("technique"))});
        } else if (record.type == "rule") {
            metamodel.rules.push_back(rule_from_record(record));
        } else {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(record.line) +
                                                   ": unexpected record [" + record.type + "]");
        }
    }
    return metamodel;
}

Metamodel load_catalog(std::string_view source) {
    const auto document = records::parse(source);
    records::check(document, kCatalogSchemas, kCatalogHeader);
    const auto format = document.header_value("format-version");
    if (!format) {
        throw Error(ErrorCode::ParseError, "catalog has no format-version");
    }
    if (*format != records::kFormatVersion) {
        throw Error(ErrorCode::ParseError, "unsupported catalog format-version " + *format);
    }
    auto version = document.header_value("metamodel-version");
    if (!version || version->empty()) {
        throw Error(ErrorCode::ParseError, "catalog has no metamodel-version");
    }
    auto metamodel = metamodel_from_records(*version, document.records);
    if (auto issues = validate_metamodel(metamodel); !issues.empty()) {
        throw IntegrityError(std::move(issues));
    }
    return metamodel;
}

std::string export_catalog(const Metamodel& metamodel) {
    records::Document document;
    document.header.push_back({"format-version", std::string(records::kFormatVersion)});
    document.header.push_back({"metamodel-version", metamodel.version});
    document.records = metamodel_records(metamodel);
    return records::write(document);
}

std::string_view shipped_catalog_text() { return kShippedCatalogText; }

const Metamodel& shipped_catalog() {
    static const Metamodel catalog = load_catalog(shipped_catalog_text());
    return catalog;
}

Applicability applicability_of(const Metamodel& metamodel, const FragmentId& fragment,
                               MigrationType type) {
    if (metamodel.find(fragment) == nullptr) {
        throw Error(ErrorCode::UnknownFragment, "unknown fragment '" + fragment.str() + "'",
                    {fragment.str()});
    }
    for (const auto& entry : metamodel.applicability) {
        if (entry.fragment == fragment && entry.migration_type == type) {
            return Applicability{entry.level, entry.situation_note};
        }
    }
    return Applicability{ApplicabilityLevel::Situational, std::nullopt};
}

}  // namespace mwb
