#include "mwb/tailoring.hpp"

#include <algorithm>

#include "mwb/transform.hpp"

namespace mwb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(ErrorCode code, const std::string& message,
                       std::vector<std::string> subjects = {}) {
    throw Error(code, message, std::move(subjects));
}

std::string quoted(const FragmentId& id) { return "'" + id.str() + "'"; }

class Editor {
public:
    Editor(MethodModel method, const Metamodel& metamodel)
        : method_(std::move(method)), metamodel_(metamodel) {}

    MethodModel take() && { return std::move(method_); }

    void operator()(const action::AddFragment& a) {
        const auto& spec = a.fragment;
        if (spec.id && spec.name.empty() && !spec.kind) {
            if (const auto* catalog = metamodel_.find(*spec.id)) {
                include_catalog_fragment(*catalog);
                return;
            }
        }
        const auto kind = require_kind(spec);
        if (kind == FragmentKind::Phase) {
            fail(ErrorCode::KindMismatch, "methods cannot add phases");
        }
        MethodFragment fragment;
        fragment.id = new_id(spec);
        fragment.name = spec.name;
        fragment.kind = kind;
        fragment.definition = spec.definition;
        fragment.provenance = Provenance::UserDefined;
        if (kind == FragmentKind::Technique) {
            if (spec.phase) {
                fail(ErrorCode::KindMismatch, "techniques do not belong to a phase");
            }
        } else {
            if (!spec.phase) {
                fail(ErrorCode::KindMismatch,
                     std::string(to_string(kind)) + " fragments need a phase");
            }
            require_selected_phase(*spec.phase);
            fragment.phase = spec.phase;
        }
        add_user_fragment(std::move(fragment));
    }

    void operator()(const action::ExtendFragment& a) {
        const auto* parent = resolve(metamodel_, method_, a.parent);
        if (parent == nullptr) {
            fail(ErrorCode::UnknownTarget, "cannot extend unknown fragment " + quoted(a.parent),
                 {a.parent.str()});
        }
        if (parent->kind == FragmentKind::Phase) {
            fail(ErrorCode::KindMismatch, "phases cannot be specialized", {a.parent.str()});
        }
        if (a.child.kind && *a.child.kind != parent->kind) {
            fail(ErrorCode::KindMismatch,
                 "a specialization of " + quoted(a.parent) + " must be a " +
                     std::string(to_string(parent->kind)),
                 {a.parent.str()});
        }
        if (a.child.phase && a.child.phase != parent->phase) {
            fail(ErrorCode::KindMismatch,
                 "a specialization stays in the phase of " + quoted(a.parent), {a.parent.str()});
        }
        if (parent->phase) {
            require_selected_phase(*parent->phase);
        }
        MethodFragment fragment;
        fragment.id = new_id(a.child);
        fragment.name = a.child.name;
        fragment.kind = parent->kind;
        fragment.definition = a.child.definition;
        fragment.phase = parent->phase;
        fragment.provenance = Provenance::UserDefined;
        fragment.parent = parent->id;
        add_user_fragment(std::move(fragment));
    }

    void operator()(const action::RemoveFragment& a) {
        const bool is_member = method_.member(a.id) != nullptr;
        const auto* user = method_.user_fragment(a.id);
        if (!is_member && (user == nullptr || user->kind != FragmentKind::Technique)) {
            fail(ErrorCode::UnknownTarget, quoted(a.id) + " is not part of the method",
                 {a.id.str()});
        }
        std::erase_if(method_.members,
                      [&](const FragmentInclusion& m) { return m.fragment == a.id; });
        std::erase_if(method_.sequences, [&](const SequenceEdge& e) {
            return e.predecessor == a.id || e.successor == a.id;
        });
        std::erase_if(method_.technique_bindings, [&](const TechniqueBinding& b) {
            return b.task == a.id || b.technique == a.id;
        });
        if (user != nullptr) {
            if (user->kind == FragmentKind::Technique) {
                std::erase_if(method_.user_fragments,
                              [&](const MethodFragment& f) { return f.id == a.id; });
            }
            collect_unused_user_fragments();
        } else if (a.waiver) {
            std::erase_if(method_.waivers, [&](const Waiver& w) { return w.fragment == a.id; });
            method_.waivers.push_back(Waiver{a.id, *a.waiver});
        }
    }

    void operator()(const action::SetSequence& a) {
        for (const auto& edge : a.edges) {
            for (const auto& endpoint : {edge.predecessor, edge.successor}) {
                if (method_.member(endpoint) == nullptr) {
                    fail(ErrorCode::UnknownTarget,
                         "sequence endpoint " + quoted(endpoint) + " is not a member",
                         {endpoint.str()});
                }
            }
        }
        method_.sequences = a.edges;
    }

    void operator()(const action::BindTechnique& a) {
        const auto* task = resolve(metamodel_, method_, a.task);
        if (task == nullptr || method_.member(a.task) == nullptr) {
            fail(ErrorCode::UnknownTarget, quoted(a.task) + " is not a member", {a.task.str()});
        }
        if (task->kind != FragmentKind::Task) {
            fail(ErrorCode::KindMismatch,
                 "techniques bind to tasks; " + quoted(a.task) + " is a " +
                     std::string(to_string(task->kind)),
                 {a.task.str()});
        }
        const auto* technique = resolve(metamodel_, method_, a.technique);
        if (technique == nullptr) {
            fail(ErrorCode::UnknownTarget, "unknown technique " + quoted(a.technique),
                 {a.technique.str()});
        }
        if (technique->kind != FragmentKind::Technique) {
            fail(ErrorCode::KindMismatch, quoted(a.technique) + " is not a Technique",
                 {a.technique.str()});
        }
        method_.technique_bindings.push_back(TechniqueBinding{a.task, a.technique});
    }

    void operator()(const action::UnbindTechnique& a) {
        const TechniqueBinding binding{a.task, a.technique};
        auto it = std::find(method_.technique_bindings.begin(), method_.technique_bindings.end(),
                            binding);
        if (it == method_.technique_bindings.end()) {
            fail(ErrorCode::UnknownTarget,
                 quoted(a.technique) + " is not bound to " + quoted(a.task),
                 {a.task.str(), a.technique.str()});
        }
        method_.technique_bindings.erase(it);
    }

    void operator()(const action::EditDefinition& a) {
        for (auto& fragment : method_.user_fragments) {
            if (fragment.id == a.id) {
                fragment.definition = a.definition;
                return;
            }
        }
        for (auto& inclusion : method_.members) {
            if (inclusion.fragment == a.id) {
                const auto* catalog = metamodel_.find(a.id);
                // An override equal to the shared definition is no override.
                if (catalog != nullptr && catalog->definition == a.definition) {
                    inclusion.definition_override.reset();
                } else {
                    inclusion.definition_override = a.definition;
                }
                return;
            }
        }
        fail(ErrorCode::UnknownTarget, quoted(a.id) + " is not part of the method", {a.id.str()});
    }

private:
    FragmentKind require_kind(const FragmentSpec& spec) const {
        if (spec.name.empty()) {
            fail(ErrorCode::ParseError, "a new fragment needs a name");
        }
        if (!spec.kind) {
            fail(ErrorCode::ParseError, "a new fragment needs a kind");
        }
        return *spec.kind;
    }

    bool taken(const FragmentId& id) const {
        return resolve(metamodel_, method_, id) != nullptr;
    }

    FragmentId new_id(const FragmentSpec& spec) const {
        if (spec.id) {
            if (taken(*spec.id)) {
                fail(ErrorCode::DuplicateId, "fragment id " + quoted(*spec.id) + " already exists",
                     {spec.id->str()});
            }
            if (spec.id->empty()) {
                fail(ErrorCode::ParseError, "fragment id is empty");
            }
            return *spec.id;
        }
        if (spec.name.empty()) {
            fail(ErrorCode::ParseError, "a new fragment needs a name");
        }
        auto base = slugify(spec.name);
        if (base.empty()) {
            base = "fragment";
        }
        for (int n = 1;; ++n) {
            FragmentId candidate(base + "-u" + std::to_string(n));
            if (!taken(candidate)) {
                return candidate;
            }
        }
    }

    void require_selected_phase(const FragmentId& phase_id) const {
        const auto* phase = metamodel_.find(phase_id);
        if (phase == nullptr) {
            fail(ErrorCode::UnknownTarget, "unknown phase " + quoted(phase_id), {phase_id.str()});
        }
        if (phase->kind != FragmentKind::Phase) {
            fail(ErrorCode::KindMismatch, quoted(phase_id) + " is not a phase", {phase_id.str()});
        }
        if (std::find(method_.phases.begin(), method_.phases.end(), phase_id) ==
            method_.phases.end()) {
            fail(ErrorCode::UnknownTarget, "phase " + quoted(phase_id) + " is not selected",
                 {phase_id.str()});
        }
    }

    void include_catalog_fragment(const MethodFragment& fragment) {
        if (method_.member(fragment.id) != nullptr) {
            fail(ErrorCode::DuplicateId, quoted(fragment.id) + " is already a member",
                 {fragment.id.str()});
        }
        if (!fragment.phase) {
            fail(ErrorCode::KindMismatch,
                 std::string(to_string(fragment.kind)) + " fragments cannot be members",
                 {fragment.id.str()});
        }
        require_selected_phase(*fragment.phase);
        method_.members.push_back(FragmentInclusion{
            fragment.id, std::nullopt,
            annotation_for(metamodel_, fragment.id, method_.migration_types)});
        std::erase_if(method_.waivers, [&](const Waiver& w) { return w.fragment == fragment.id; });
    }

    void add_user_fragment(MethodFragment fragment) {
        if (fragment.kind != FragmentKind::Technique) {
            method_.members.push_back(FragmentInclusion{fragment.id, std::nullopt, std::nullopt});
        }
        method_.user_fragments.push_back(std::move(fragment));
    }

    // Non-member user fragments survive only as techniques or as parents of
    // other user fragments.
    void collect_unused_user_fragments() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = method_.user_fragments.begin(); it != method_.user_fragments.end();
                 ++it) {
                const auto& id = it->id;
                const bool needed =
                    it->kind == FragmentKind::Technique || method_.member(id) != nullptr ||
                    std::any_of(method_.user_fragments.begin(), method_.user_fragments.end(),
                                [&](const MethodFragment& f) { return f.parent == id; });
                if (!needed) {
                    method_.user_fragments.erase(it);
                    changed = true;
                    break;
                }
            }
        }
    }

    MethodModel method_;
    const Metamodel& metamodel_;
};

const std::vector<records::Schema> kScriptSchemas = {
    {"action",
     {"op"},
     {"id", "name", "kind", "phase", "definition", "parent", "waiver", "task", "technique"},
     {"edge"}},
};
const std::vector<std::string> kScriptHeader = {"format-version"};

std::optional<FragmentId> optional_id(const records::Record& record, std::string_view key) {
    if (auto value = record.get(key)) {
        return FragmentId(*value);
    }
    return std::nullopt;
}

[[noreturn]] void bad_record(const records::Record& record, const std::string& message) {
    fail(ErrorCode::ParseError, "line " + std::to_string(record.line) + ": " + message);
}

FragmentSpec spec_from_record(const records::Record& record) {
    FragmentSpec spec;
    spec.id = optional_id(record, "id");
    spec.name = record.get("name").value_or("");
    if (auto kind = record.get("kind")) {
        spec.kind = parse_fragment_kind(*kind);
        if (!spec.kind) {
            bad_record(record, "invalid kind '" + *kind + "'");
        }
    }
    spec.phase = optional_id(record, "phase");
    spec.definition = record.get("definition").value_or("");
    return spec;
}

void add_spec(records::Record& record, const FragmentSpec& spec) {
    if (spec.id) record.add("id", spec.id->str());
    if (!spec.name.empty()) record.add("name", spec.name);
    if (spec.kind) record.add("kind", std::string(to_string(*spec.kind)));
    if (spec.phase) record.add("phase", spec.phase->str());
    if (!spec.definition.empty()) record.add("definition", spec.definition);
}

// Only the keys listed for an op may appear in its record.
void allow_only(const records::Record& record, std::initializer_list<std::string_view> keys) {
    for (const auto& field : record.fields) {
        if (field.key != "op" && std::find(keys.begin(), keys.end(), field.key) == keys.end()) {
            bad_record(record, "key '" + field.key + "' is not valid for op " +
                                   record.require("op"));
        }
    }
}

}  // namespace

std::string_view action_name(const TailoringAction& action) {
    return std::visit(overloaded{
                          [](const action::AddFragment&) { return "AddFragment"; },
                          [](const action::ExtendFragment&) { return "ExtendFragment"; },
                          [](const action::RemoveFragment&) { return "RemoveFragment"; },
                          [](const action::SetSequence&) { return "SetSequence"; },
                          [](const action::BindTechnique&) { return "BindTechnique"; },
                          [](const action::UnbindTechnique&) { return "UnbindTechnique"; },
                          [](const action::EditDefinition&) { return "EditDefinition"; },
                      },
                      action);
}

TailoringResult apply(const MethodModel& method, const Metamodel& metamodel,
                      const TailoringAction& action) {
    if (method.metamodel_version != metamodel.version) {
        fail(ErrorCode::VersionMismatch, "method '" + method.id + "' targets metamodel version " +
                                             method.metamodel_version + ", not " +
                                             metamodel.version);
    }
    Editor editor(method, metamodel);
    std::visit(editor, action);
    auto next = std::move(editor).take();
    normalize(next, metamodel);
    auto issues = check_conformance(next, metamodel);
    return TailoringResult{std::move(next), std::move(issues)};
}

ReplayError::ReplayError(std::size_t index, const Error& cause)
    : Error(cause.code(), "action " + std::to_string(index) + ": " + cause.what(),
            cause.subjects()),
      index_(index),
      cause_(cause.code()) {}

TailoringResult replay(const MethodModel& method, const Metamodel& metamodel,
                       std::span<const TailoringAction> actions) {
    TailoringResult result{method, check_conformance(method, metamodel)};
    for (std::size_t i = 0; i < actions.size(); ++i) {
        try {
            result = apply(result.method, metamodel, actions[i]);
        } catch (const Error& e) {
            throw ReplayError(i, e);
        }
    }
    return result;
}

records::Record action_record(const TailoringAction& action) {
    records::Record record("action");
    record.add("op", std::string(action_name(action)));
    std::visit(overloaded{
                   [&](const action::AddFragment& a) { add_spec(record, a.fragment); },
                   [&](const action::ExtendFragment& a) {
                       record.add("parent", a.parent.str());
                       add_spec(record, a.child);
                   },
                   [&](const action::RemoveFragment& a) {
                       record.add("id", a.id.str());
                       record.add_if("waiver", a.waiver);
                   },
                   [&](const action::SetSequence& a) {
                       for (const auto& edge : a.edges) {
                           record.add("edge",
                                      edge.predecessor.str() + " -> " + edge.successor.str());
                       }
                   },
                   [&](const action::BindTechnique& a) {
                       record.add("task", a.task.str()).add("technique", a.technique.str());
                   },
                   [&](const action::UnbindTechnique& a) {
                       record.add("task", a.task.str()).add("technique", a.technique.str());
                   },
                   [&](const action::EditDefinition& a) {
                       record.add("id", a.id.str()).add("definition", a.definition);
                   },
               },
               action);
    return record;
}

TailoringAction action_from_record(const records::Record& record) {
    const auto& op = record.require("op");
    if (op == "AddFragment") {
        allow_only(record, {"id", "name", "kind", "phase", "definition"});
        return action::AddFragment{spec_from_record(record)};
    }
    if (op == "ExtendFragment") {
        allow_only(record, {"parent", "id", "name", "kind", "phase", "definition"});
        return action::ExtendFragment{FragmentId(record.require("parent")),
                                      spec_from_record(record)};
    }
    if (op == "RemoveFragment") {
        allow_only(record, {"id", "waiver"});
        return action::RemoveFragment{FragmentId(record.require("id")), record.get("waiver")};
    }
    if (op == "SetSequence") {
        allow_only(record, {"edge"});
        action::SetSequence sequence;
        for (const auto& text : record.get_all("edge")) {
            const auto arrow = text.find(" -> ");
            if (arrow == std::string::npos) {
                bad_record(record, "edge must read 'from -> to'");
            }
            sequence.edges.push_back(
                SequenceEdge{FragmentId(text.substr(0, arrow)), FragmentId(text.substr(arrow + 4))});
        }
        return sequence;
    }
    if (op == "BindTechnique" || op == "UnbindTechnique") {
        allow_only(record, {"task", "technique"});
        FragmentId task(record.require("task"));
        FragmentId technique(record.require("technique"));
        if (op == "BindTechnique") {
            return action::BindTechnique{std::move(task), std::move(technique)};
        }
        return action::UnbindTechnique{std::move(task), std::move(technique)};
    }
    if (op == "EditDefinition") {
        allow_only(record, {"id", "definition"});
        return action::EditDefinition{FragmentId(record.require("id")),
                                      record.require("definition")};
    }
    bad_record(record, "unknown op '" + op + "'");
}

std::vector<TailoringAction> parse_script(std::string_view text) {
    const auto document = records::parse(text);
    records::check(document, kScriptSchemas, kScriptHeader);
    if (document.header_value("format-version") != std::string(records::kFormatVersion)) {
        fail(ErrorCode::ParseError, "action script needs format-version: 1");
    }
    std::vector<TailoringAction> actions;
    for (const auto& record : document.records) {
        actions.push_back(action_from_record(record));
    }
    return actions;
}

std::string write_script(std::span<const TailoringAction> actions) {
    records::Document document;
    document.header.push_back({"format-version", std::string(records::kFormatVersion)});
    for (const auto& action : actions) {
        document.records.push_back(action_record(action));
    }
    return records::write(document);
}

}  // namespace mwb
