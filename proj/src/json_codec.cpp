#include "mwb/json_codec.hpp"

#include <algorithm>

#include "mwb/catalog.hpp"

namespace mwb::json {

namespace {

template <typename T>
json names(const std::vector<T>& items) {
    json out = json::array();
    for (const auto& item : items) {
        if constexpr (std::is_same_v<T, FragmentId>) {
            out.push_back(item.str());
        } else {
            out.push_back(std::string(to_string(item)));
        }
    }
    return out;
}

json optional_text(const std::optional<std::string>& value) {
    return value ? json(*value) : json(nullptr);
}

json optional_id(const std::optional<FragmentId>& value) {
    return value ? json(value->str()) : json(nullptr);
}

json binding(const TechniqueBinding& b) {
    return {{"task", b.task.str()}, {"technique", b.technique.str()}};
}

[[noreturn]] void bad_request(const std::string& message) {
    throw Error(ErrorCode::ParseError, message);
}

// Typed access to request objects with closed key sets.
class Reader {
public:
    Reader(const json& object, std::string what, std::initializer_list<std::string_view> keys)
        : object_(object), what_(std::move(what)) {
        if (!object_.is_object()) bad_request(what_ + " must be a JSON object");
        for (const auto& [key, value] : object_.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                bad_request("unknown key '" + key + "' in " + what_);
            }
        }
    }

    bool has(const std::string& key) const {
        return object_.contains(key) && !object_.at(key).is_null();
    }

    std::string text(const std::string& key) const {
        if (!has(key)) bad_request(what_ + " needs '" + key + "'");
        return optional_text(key).value();
    }

    std::optional<std::string> optional_text(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const auto& value = object_.at(key);
        if (!value.is_string()) bad_request("'" + key + "' in " + what_ + " must be a string");
        return value.get<std::string>();
    }

    std::optional<FragmentId> optional_id(const std::string& key) const {
        if (auto value = optional_text(key)) return FragmentId(*value);
        return std::nullopt;
    }

    FragmentId id(const std::string& key) const { return FragmentId(text(key)); }

    const json& array(const std::string& key) const {
        if (!has(key)) bad_request(what_ + " needs '" + key + "'");
        const auto& value = object_.at(key);
        if (!value.is_array()) bad_request("'" + key + "' in " + what_ + " must be an array");
        return value;
    }

    std::vector<std::string> strings(const std::string& key) const {
        std::vector<std::string> out;
        for (const auto& item : array(key)) {
            if (!item.is_string()) bad_request("'" + key + "' must hold strings");
            out.push_back(item.get<std::string>());
        }
        return out;
    }

    const json& object(const std::string& key) const {
        if (!has(key)) bad_request(what_ + " needs '" + key + "'");
        return object_.at(key);
    }

private:
    const json& object_;
    std::string what_;
};

FragmentSpec spec_from_json(const json& body, const std::string& what) {
    Reader r(body, what, {"id", "name", "kind", "phase", "definition"});
    FragmentSpec spec;
    spec.id = r.optional_id("id");
    spec.name = r.optional_text("name").value_or("");
    if (auto kind = r.optional_text("kind")) {
        spec.kind = parse_fragment_kind(*kind);
        if (!spec.kind) bad_request("invalid fragment kind '" + *kind + "'");
    }
    spec.phase = r.optional_id("phase");
    spec.definition = r.optional_text("definition").value_or("");
    return spec;
}

json spec_to_json(const FragmentSpec& spec) {
    json out = json::object();
    if (spec.id) out["id"] = spec.id->str();
    if (!spec.name.empty()) out["name"] = spec.name;
    if (spec.kind) out["kind"] = std::string(to_string(*spec.kind));
    if (spec.phase) out["phase"] = spec.phase->str();
    if (!spec.definition.empty()) out["definition"] = spec.definition;
    return out;
}

TechniqueBinding binding_from_json(const json& body) {
    Reader r(body, "technique binding", {"task", "technique"});
    return TechniqueBinding{r.id("task"), r.id("technique")};
}

}  // namespace

json fragment(const MethodFragment& f) {
    return {{"id", f.id.str()},
            {"name", f.name},
            {"kind", std::string(to_string(f.kind))},
            {"definition", f.definition},
            {"phase", optional_id(f.phase)},
            {"provenance", std::string(to_string(f.provenance))},
            {"parent", optional_id(f.parent)},
            {"provenance_note", optional_text(f.provenance_note)}};
}

json relationship(const FragmentRelationship& r) {
    return {{"type", std::string(to_string(r.type))},
            {"category", std::string(to_string(category_of(r.type)))},
            {"source", r.source.str()},
            {"target", r.target.str()},
            {"knowledge_source", std::string(to_string(r.knowledge_source))}};
}

json rule(const TransformationRule& r) {
    return {{"id", r.id},
            {"name", r.name},
            {"meaning", r.meaning},
            {"syntax_note", optional_text(r.syntax_note)},
            {"action", std::string(to_string(r.action))},
            {"guard",
             {{"migration_types", names(r.guard.migration_types)},
              {"phases", names(r.guard.phases)}}},
            {"selector",
             {{"phase", optional_id(r.selector.phase)},
              {"levels", names(r.selector.levels)},
              {"kinds", names(r.selector.kinds)}}},
            {"relationship_types", names(r.relationship_types)}};
}

json issue(const ValidationIssue& i) {
    return {{"severity", std::string(to_string(i.severity))},
            {"code", std::string(to_string(i.code))},
            {"message", i.message},
            {"subjects", names(i.subjects)}};
}

json issues(const std::vector<ValidationIssue>& list) {
    json out = json::array();
    for (const auto& i : list) out.push_back(issue(i));
    return out;
}

json error(const Error& e) {
    json out = {{"code", std::string(to_string(e.code()))},
                {"message", e.what()},
                {"subjects", e.subjects()}};
    if (const auto* integrity = dynamic_cast<const IntegrityError*>(&e)) {
        out["issues"] = issues(integrity->issues());
    }
    return out;
}

json index_entry(const MethodIndexEntry& entry) {
    return {{"id", entry.id},
            {"name", entry.name},
            {"migration_types", names(entry.migration_types)},
            {"fragment_count", entry.fragment_count}};
}

json instance(const MethodInstance& i) {
    json choices = json::array();
    for (const auto& b : i.chosen_techniques) choices.push_back(binding(b));
    return {{"id", i.id},
            {"method", i.method},
            {"chosen_techniques", choices},
            {"enactment_notes", i.enactment_notes}};
}

json explanation(const InclusionExplanation& e) {
    json per_type = json::array();
    for (const auto& t : e.per_type) {
        per_type.push_back({{"migration_type", std::string(to_string(t.migration_type))},
                            {"level", std::string(to_string(t.level))},
                            {"situation_note", optional_text(t.situation_note)}});
    }
    return {{"fragment", e.fragment.str()},
            {"per_type", per_type},
            {"governing_rule", optional_text(e.governing_rule)},
            {"note", optional_text(e.note)}};
}

json fragment_detail(const Metamodel& metamodel, const MethodFragment& f) {
    json applicability = json::array();
    for (auto type : kAllMigrationTypes) {
        const auto a = applicability_of(metamodel, f.id, type);
        applicability.push_back({{"migration_type", std::string(to_string(type))},
                                 {"level", std::string(to_string(a.level))},
                                 {"situation_note", optional_text(a.situation_note)}});
    }
    json relationships = json::array();
    for (const auto& r : relationship_set(metamodel)) {
        if (r.source == f.id || r.target == f.id) relationships.push_back(relationship(r));
    }
    json techniques = json::array();
    for (const auto& s : metamodel.techniques) {
        if (s.task == f.id) techniques.push_back(s.technique.str());
    }
    return {{"fragment", fragment(f)},
            {"applicability", applicability},
            {"relationships", relationships},
            {"techniques", techniques}};
}

json method(const MethodModel& m, const Metamodel& metamodel) {
    json phases = json::array();
    for (const auto& id : m.phases) {
        const auto* phase = metamodel.find(id);
        phases.push_back({{"id", id.str()}, {"name", phase ? json(phase->name) : json(nullptr)}});
    }
    json members = json::array();
    for (const auto& inclusion : m.members) {
        const auto* f = resolve(metamodel, m, inclusion.fragment);
        json entry = {{"id", inclusion.fragment.str()}};
        if (f != nullptr) {
            entry["name"] = f->name;
            entry["kind"] = std::string(to_string(f->kind));
            entry["phase"] = optional_id(f->phase);
            entry["provenance"] = std::string(to_string(f->provenance));
            entry["parent"] = optional_id(f->parent);
            entry["definition"] = inclusion.definition_override.value_or(f->definition);
        } else {
            entry["name"] = nullptr;
            entry["kind"] = nullptr;
            entry["phase"] = nullptr;
            entry["provenance"] = nullptr;
            entry["parent"] = nullptr;
            entry["definition"] = nullptr;
        }
        entry["overridden"] = inclusion.definition_override.has_value();
        entry["note"] = optional_text(inclusion.note);
        json techniques = json::array();
        for (const auto& b : m.technique_bindings) {
            if (b.task == inclusion.fragment) techniques.push_back(b.technique.str());
        }
        entry["techniques"] = techniques;
        members.push_back(std::move(entry));
    }
    json user_fragments = json::array();
    for (const auto& f : m.user_fragments) user_fragments.push_back(fragment(f));
    json relationships = json::array();
    for (const auto& r : m.relationships) relationships.push_back(relationship(r));
    json sequences = json::array();
    for (const auto& e : m.sequences) {
        sequences.push_back({{"from", e.predecessor.str()}, {"to", e.successor.str()}});
    }
    json bindings = json::array();
    for (const auto& b : m.technique_bindings) bindings.push_back(binding(b));
    json waivers = json::array();
    for (const auto& w : m.waivers) {
        waivers.push_back({{"fragment", w.fragment.str()}, {"justification", w.justification}});
    }
    return {{"id", m.id},
            {"name", m.name},
            {"description", m.description},
            {"metamodel_version", m.metamodel_version},
            {"migration_types", names(m.migration_types)},
            {"phases", phases},
            {"members", members},
            {"user_fragments", user_fragments},
            {"relationships", relationships},
            {"sequences", sequences},
            {"technique_bindings", bindings},
            {"waivers", waivers}};
}

TailoringAction action_from_json(const json& body) {
    if (!body.is_object() || !body.contains("op") || !body.at("op").is_string()) {
        bad_request("an action is an object with a string 'op'");
    }
    const auto op = body.at("op").get<std::string>();
    if (op == "AddFragment") {
        Reader r(body, op, {"op", "fragment"});
        return action::AddFragment{spec_from_json(r.object("fragment"), "fragment")};
    }
    if (op == "ExtendFragment") {
        Reader r(body, op, {"op", "parent", "child"});
        return action::ExtendFragment{r.id("parent"), spec_from_json(r.object("child"), "child")};
    }
    if (op == "RemoveFragment") {
        Reader r(body, op, {"op", "id", "waiver"});
        return action::RemoveFragment{r.id("id"), r.optional_text("waiver")};
    }
    if (op == "SetSequence") {
        Reader r(body, op, {"op", "edges"});
        action::SetSequence sequence;
        for (const auto& edge : r.array("edges")) {
            Reader e(edge, "edge", {"from", "to"});
            sequence.edges.push_back(SequenceEdge{e.id("from"), e.id("to")});
        }
        return sequence;
    }
    if (op == "BindTechnique" || op == "UnbindTechnique") {
        Reader r(body, op, {"op", "task", "technique"});
        if (op == "BindTechnique") return action::BindTechnique{r.id("task"), r.id("technique")};
        return action::UnbindTechnique{r.id("task"), r.id("technique")};
    }
    if (op == "EditDefinition") {
        Reader r(body, op, {"op", "id", "definition"});
        return action::EditDefinition{r.id("id"), r.text("definition")};
    }
    bad_request("unknown op '" + op + "'");
}

json action_to_json(const TailoringAction& action) {
    json out = {{"op", std::string(action_name(action))}};
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, action::AddFragment>) {
                out["fragment"] = spec_to_json(a.fragment);
            } else if constexpr (std::is_same_v<T, action::ExtendFragment>) {
                out["parent"] = a.parent.str();
                out["child"] = spec_to_json(a.child);
            } else if constexpr (std::is_same_v<T, action::RemoveFragment>) {
                out["id"] = a.id.str();
                if (a.waiver) out["waiver"] = *a.waiver;
            } else if constexpr (std::is_same_v<T, action::SetSequence>) {
                json edges = json::array();
                for (const auto& e : a.edges) {
                    edges.push_back({{"from", e.predecessor.str()}, {"to", e.successor.str()}});
                }
                out["edges"] = edges;
            } else if constexpr (std::is_same_v<T, action::EditDefinition>) {
                out["id"] = a.id.str();
                out["definition"] = a.definition;
            } else {
                out["task"] = a.task.str();
                out["technique"] = a.technique.str();
            }
        },
        action);
    return out;
}

CreateMethodRequest create_request_from_json(const json& body) {
    Reader r(body, "method request", {"name", "description", "migration_types", "phases"});
    CreateMethodRequest out;
    out.name = r.text("name");
    out.description = r.optional_text("description").value_or("");
    for (const auto& text : r.strings("migration_types")) {
        auto type = parse_migration_type(text);
        if (!type) bad_request("invalid migration type '" + text + "'");
        out.migration_types.push_back(*type);
    }
    for (auto& text : r.strings("phases")) out.phases.emplace_back(std::move(text));
    return out;
}

CreateInstanceRequest instance_request_from_json(const json& body) {
    Reader r(body, "instance request", {"id", "chosen_techniques", "enactment_notes"});
    CreateInstanceRequest out;
    out.id = r.optional_text("id");
    if (r.has("chosen_techniques")) {
        for (const auto& item : r.array("chosen_techniques")) {
            out.chosen_techniques.push_back(binding_from_json(item));
        }
    }
    out.enactment_notes = r.optional_text("enactment_notes").value_or("");
    return out;
}

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace mwb::json
