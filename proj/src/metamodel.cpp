#include "mwb/metamodel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace mwb {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_by_name(std::string_view text, const Enum (&values)[N]) {
    for (Enum value : values) {
        if (to_string(value) == text) {
            return value;
        }
    }
    return std::nullopt;
}

constexpr Provenance kProvenances[] = {Provenance::Catalog, Provenance::UserDefined};
constexpr KnowledgeSource kSources[] = {KnowledgeSource::L, KnowledgeSource::M};
constexpr ApplicabilityLevel kLevels[] = {ApplicabilityLevel::Mandatory,
                                          ApplicabilityLevel::Situational,
                                          ApplicabilityLevel::Unnecessary};
constexpr Severity kSeverities[] = {Severity::Error, Severity::Warning};
constexpr IssueCode kIssueCodes[] = {IssueCode::DanglingRef,      IssueCode::MissingMandatory,
                                     IssueCode::IllogicalSequence, IssueCode::EmptySelection,
                                     IssueCode::KindMismatch,      IssueCode::DuplicateId};
constexpr RuleAction kRuleActions[] = {RuleAction::IncludeFragments,
                                       RuleAction::IncludeRelationships};

ValidationIssue issue(Severity severity, IssueCode code, std::string message,
                      std::vector<FragmentId> subjects) {
    return ValidationIssue{severity, code, std::move(message), std::move(subjects)};
}

ValidationIssue error(IssueCode code, std::string message, std::vector<FragmentId> subjects) {
    return issue(Severity::Error, code, std::move(message), std::move(subjects));
}

std::string quoted(const FragmentId& id) { return "'" + id.str() + "'"; }

bool needs_phase(FragmentKind kind) {
    return kind == FragmentKind::Task || kind == FragmentKind::WorkProduct ||
           kind == FragmentKind::Principle;
}

// Kind/phase/parent constraints shared by catalog and user-defined fragments.
void check_fragment_shape(const MethodFragment& fragment,
                          const std::function<const MethodFragment*(const FragmentId&)>& lookup,
                          std::vector<ValidationIssue>& out) {
    if (needs_phase(fragment.kind)) {
        if (!fragment.phase) {
            out.push_back(error(IssueCode::KindMismatch,
                                std::string(to_string(fragment.kind)) + " " + quoted(fragment.id) +
                                    " has no phase",
                                {fragment.id}));
        } else if (const auto* phase = lookup(*fragment.phase); phase == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "phase " + quoted(*fragment.phase) + " of " + quoted(fragment.id) +
                                    " does not resolve",
                                {fragment.id, *fragment.phase}));
        } else if (phase->kind != FragmentKind::Phase) {
            out.push_back(error(IssueCode::KindMismatch,
                                "phase " + quoted(*fragment.phase) + " of " + quoted(fragment.id) +
                                    " is a " + std::string(to_string(phase->kind)),
                                {fragment.id, *fragment.phase}));
        }
    } else if (fragment.phase) {
        out.push_back(error(IssueCode::KindMismatch,
                            std::string(to_string(fragment.kind)) + " " + quoted(fragment.id) +
                                " must not belong to a phase",
                            {fragment.id}));
    }
    if (fragment.parent) {
        if (const auto* parent = lookup(*fragment.parent); parent == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "parent " + quoted(*fragment.parent) + " of " + quoted(fragment.id) +
                                    " does not resolve",
                                {fragment.id, *fragment.parent}));
        } else if (parent->kind != fragment.kind) {
            out.push_back(error(IssueCode::KindMismatch,
                                quoted(fragment.id) + " specializes " + quoted(*fragment.parent) +
                                    " of a different kind",
                                {fragment.id, *fragment.parent}));
        }
    }
}

void check_relationship(const FragmentRelationship& rel,
                        const std::function<const MethodFragment*(const FragmentId&)>& lookup,
                        std::vector<ValidationIssue>& out) {
    const std::string label = std::string(to_string(rel.type)) + " " + quoted(rel.source) +
                              " -> " + quoted(rel.target);
    if (rel.source == rel.target) {
        out.push_back(error(IssueCode::KindMismatch, "relationship " + label + " is a self-loop",
                            {rel.source}));
        return;
    }
    const auto* source = lookup(rel.source);
    const auto* target = lookup(rel.target);
    if (source == nullptr) {
        out.push_back(error(IssueCode::DanglingRef,
                            "relationship " + label + ": source does not resolve",
                            {rel.source, rel.target}));
    }
    if (target == nullptr) {
        out.push_back(error(IssueCode::DanglingRef,
                            "relationship " + label + ": target does not resolve",
                            {rel.source, rel.target}));
        return;
    }
    if (rel.type == RelationshipType::IsAGroupOf && target->kind != FragmentKind::Phase) {
        out.push_back(error(IssueCode::KindMismatch,
                            "relationship " + label + ": target must be a Phase",
                            {rel.source, rel.target}));
    }
    if (rel.type == RelationshipType::Produces && target->kind != FragmentKind::WorkProduct) {
        out.push_back(error(IssueCode::KindMismatch,
                            "relationship " + label + ": target must be a WorkProduct",
                            {rel.source, rel.target}));
    }
}

// Every node lying on a directed cycle, grouped by strongly connected component.
std::vector<std::vector<FragmentId>> cyclic_components(const std::vector<SequenceEdge>& edges) {
    std::map<FragmentId, std::set<FragmentId>> adjacency;
    std::set<FragmentId> self_loops;
    for (const auto& edge : edges) {
        adjacency[edge.predecessor].insert(edge.successor);
        adjacency.try_emplace(edge.successor);
        if (edge.predecessor == edge.successor) {
            self_loops.insert(edge.predecessor);
        }
    }

    // Tarjan's algorithm; graphs here are tiny so recursion depth is fine.
    std::map<FragmentId, int> index;
    std::map<FragmentId, int> low;
    std::set<FragmentId> on_stack;
    std::vector<FragmentId> stack;
    std::vector<std::vector<FragmentId>> components;
    int counter = 0;

    std::function<void(const FragmentId&)> connect = [&](const FragmentId& node) {
        index[node] = low[node] = counter++;
        stack.push_back(node);
        on_stack.insert(node);
        for (const auto& next : adjacency[node]) {
            if (!index.contains(next)) {
                connect(next);
                low[node] = std::min(low[node], low[next]);
            } else if (on_stack.contains(next)) {
                low[node] = std::min(low[node], index[next]);
            }
        }
        if (low[node] == index[node]) {
            std::vector<FragmentId> component;
            FragmentId popped;
            do {
                popped = stack.back();
                stack.pop_back();
                on_stack.erase(popped);
                component.push_back(popped);
            } while (popped != node);
            if (component.size() > 1 || self_loops.contains(node)) {
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
        }
    };
    for (const auto& [node, _] : adjacency) {
        if (!index.contains(node)) {
            connect(node);
        }
    }
    std::sort(components.begin(), components.end());
    return components;
}

}  // namespace

std::string_view to_string(FragmentKind kind) {
    switch (kind) {
        case FragmentKind::Phase: return "Phase";
        case FragmentKind::Task: return "Task";
        case FragmentKind::WorkProduct: return "WorkProduct";
        case FragmentKind::Principle: return "Principle";
        case FragmentKind::Technique: return "Technique";
    }
    return "?";
}

std::string_view to_string(Provenance provenance) {
    return provenance == Provenance::Catalog ? "Catalog" : "UserDefined";
}

std::string_view to_string(RelationshipType type) {
    switch (type) {
        case RelationshipType::Uses: return "Uses";
        case RelationshipType::Follows: return "Follows";
        case RelationshipType::Produces: return "Produces";
        case RelationshipType::IsAGroupOf: return "IsAGroupOf";
        case RelationshipType::IsAKindOf: return "IsAKindOf";
    }
    return "?";
}

std::string_view to_string(RelationshipCategory category) {
    switch (category) {
        case RelationshipCategory::Association: return "Association";
        case RelationshipCategory::Aggregation: return "Aggregation";
        case RelationshipCategory::Specialization: return "Specialization";
    }
    return "?";
}

std::string_view to_string(KnowledgeSource source) {
    return source == KnowledgeSource::L ? "L" : "M";
}

std::string_view to_string(MigrationType type) {
    switch (type) {
        case MigrationType::I: return "I";
        case MigrationType::II: return "II";
        case MigrationType::III: return "III";
        case MigrationType::IV: return "IV";
        case MigrationType::V: return "V";
    }
    return "?";
}

std::string_view to_string(ApplicabilityLevel level) {
    switch (level) {
        case ApplicabilityLevel::Mandatory: return "Mandatory";
        case ApplicabilityLevel::Situational: return "Situational";
        case ApplicabilityLevel::Unnecessary: return "Unnecessary";
    }
    return "?";
}

std::string_view to_string(Severity severity) {
    return severity == Severity::Error ? "Error" : "Warning";
}

std::string_view to_string(IssueCode code) {
    switch (code) {
        case IssueCode::DanglingRef: return "DANGLING_REF";
        case IssueCode::MissingMandatory: return "MISSING_MANDATORY";
        case IssueCode::IllogicalSequence: return "ILLOGICAL_SEQUENCE";
        case IssueCode::EmptySelection: return "EMPTY_SELECTION";
        case IssueCode::KindMismatch: return "KIND_MISMATCH";
        case IssueCode::DuplicateId: return "DUPLICATE_ID";
    }
    return "?";
}

std::string_view to_string(RuleAction action) {
    return action == RuleAction::IncludeFragments ? "IncludeFragments" : "IncludeRelationships";
}

std::optional<FragmentKind> parse_fragment_kind(std::string_view text) {
    return parse_by_name(text, kAllFragmentKinds);
}
std::optional<Provenance> parse_provenance(std::string_view text) {
    return parse_by_name(text, kProvenances);
}
std::optional<RelationshipType> parse_relationship_type(std::string_view text) {
    return parse_by_name(text, kAllRelationshipTypes);
}
std::optional<KnowledgeSource> parse_knowledge_source(std::string_view text) {
    return parse_by_name(text, kSources);
}
std::optional<MigrationType> parse_migration_type(std::string_view text) {
    return parse_by_name(text, kAllMigrationTypes);
}
std::optional<ApplicabilityLevel> parse_applicability_level(std::string_view text) {
    return parse_by_name(text, kLevels);
}
std::optional<Severity> parse_severity(std::string_view text) {
    return parse_by_name(text, kSeverities);
}
std::optional<IssueCode> parse_issue_code(std::string_view text) {
    return parse_by_name(text, kIssueCodes);
}
std::optional<RuleAction> parse_rule_action(std::string_view text) {
    return parse_by_name(text, kRuleActions);
}

RelationshipCategory category_of(RelationshipType type) {
    switch (type) {
        case RelationshipType::IsAGroupOf: return RelationshipCategory::Aggregation;
        case RelationshipType::IsAKindOf: return RelationshipCategory::Specialization;
        default: return RelationshipCategory::Association;
    }
}

std::string_view describe(MigrationType type) {
    switch (type) {
        case MigrationType::I:
            return "deploying business logic of a legacy application on cloud via IaaS service "
                   "delivery model";
        case MigrationType::II:
            return "replacing or reengineering legacy components with SaaS delivery model";
        case MigrationType::III:
            return "deploying legacy database components on cloud data storages";
        case MigrationType::IV:
            return "converting legacy database components to cloud database solutions";
        case MigrationType::V:
            return "deploying whole legacy application stack on cloud via IaaS service delivery "
                   "model";
    }
    return "";
}

bool rule_id_less(std::string_view a, std::string_view b) {
    // Compare runs of digits numerically, everything else bytewise.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ei = i;
            std::size_t ej = j;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
            const auto na = std::stoull(std::string(a.substr(i, ei - i)));
            const auto nb = std::stoull(std::string(b.substr(j, ej - j)));
            if (na != nb) return na < nb;
            i = ei;
            j = ej;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

const MethodFragment* Metamodel::find(const FragmentId& id) const {
    auto it = std::find_if(fragments.begin(), fragments.end(),
                           [&](const MethodFragment& f) { return f.id == id; });
    return it == fragments.end() ? nullptr : &*it;
}

std::vector<FragmentId> Metamodel::phase_order() const {
    std::vector<FragmentId> out;
    for (const auto& fragment : fragments) {
        if (fragment.kind == FragmentKind::Phase) {
            out.push_back(fragment.id);
        }
    }
    return out;
}

const FragmentInclusion* MethodModel::member(const FragmentId& id) const {
    auto it = std::find_if(members.begin(), members.end(),
                           [&](const FragmentInclusion& m) { return m.fragment == id; });
    return it == members.end() ? nullptr : &*it;
}

const MethodFragment* MethodModel::user_fragment(const FragmentId& id) const {
    auto it = std::find_if(user_fragments.begin(), user_fragments.end(),
                           [&](const MethodFragment& f) { return f.id == id; });
    return it == user_fragments.end() ? nullptr : &*it;
}

const MethodFragment* resolve(const Metamodel& metamodel, const MethodModel& method,
                              const FragmentId& id) {
    if (const auto* fragment = metamodel.find(id)) {
        return fragment;
    }
    return method.user_fragment(id);
}

void sort_issues(std::vector<ValidationIssue>& issues) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ValidationIssue& a, const ValidationIssue& b) {
                         return std::forward_as_tuple(a.severity, to_string(a.code), a.subjects,
                                                      a.message) <
                                std::forward_as_tuple(b.severity, to_string(b.code), b.subjects,
                                                      b.message);
                     });
}

std::vector<ValidationIssue> validate_metamodel(const Metamodel& metamodel) {
    std::vector<ValidationIssue> out;
    if (metamodel.version.empty()) {
        out.push_back(error(IssueCode::KindMismatch, "metamodel version is empty", {}));
    }

    std::set<FragmentId> seen;
    for (const auto& fragment : metamodel.fragments) {
        if (!seen.insert(fragment.id).second) {
            out.push_back(error(IssueCode::DuplicateId,
                                "fragment id " + quoted(fragment.id) + " is defined twice",
                                {fragment.id}));
        }
    }
    auto lookup = [&](const FragmentId& id) { return metamodel.find(id); };
    for (const auto& fragment : metamodel.fragments) {
        check_fragment_shape(fragment, lookup, out);
    }
    for (const auto& rel : metamodel.relationships) {
        check_relationship(rel, lookup, out);
    }

    std::set<std::pair<FragmentId, MigrationType>> entries;
    for (const auto& entry : metamodel.applicability) {
        if (lookup(entry.fragment) == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "applicability entry for " + quoted(entry.fragment) +
                                    " does not resolve",
                                {entry.fragment}));
        }
        if (!entries.emplace(entry.fragment, entry.migration_type).second) {
            out.push_back(error(IssueCode::DuplicateId,
                                "applicability of " + quoted(entry.fragment) + " for type " +
                                    std::string(to_string(entry.migration_type)) +
                                    " is defined twice",
                                {entry.fragment}));
        }
        if (entry.level == ApplicabilityLevel::Situational && !entry.situation_note) {
            out.push_back(error(IssueCode::KindMismatch,
                                "Situational entry for " + quoted(entry.fragment) +
                                    " has no situation note",
                                {entry.fragment}));
        }
    }

    for (const auto& suggestion : metamodel.techniques) {
        const auto* task = lookup(suggestion.task);
        const auto* technique = lookup(suggestion.technique);
        if (task == nullptr || technique == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "technique suggestion " + quoted(suggestion.technique) + " for " +
                                    quoted(suggestion.task) + " does not resolve",
                                {suggestion.task, suggestion.technique}));
            continue;
        }
        if (task->kind != FragmentKind::Task || technique->kind != FragmentKind::Technique) {
            out.push_back(error(IssueCode::KindMismatch,
                                "technique suggestion must pair a Task with a Technique",
                                {suggestion.task, suggestion.technique}));
        }
    }

    std::set<std::string> rule_ids;
    for (const auto& rule : metamodel.rules) {
        if (!rule_ids.insert(rule.id).second) {
            out.push_back(error(IssueCode::DuplicateId,
                                "rule id '" + rule.id + "' is defined twice", {}));
        }
        std::vector<FragmentId> phase_refs = rule.guard.phases;
        if (rule.selector.phase) {
            phase_refs.push_back(*rule.selector.phase);
        }
        for (const auto& phase_id : phase_refs) {
            const auto* phase = lookup(phase_id);
            if (phase == nullptr) {
                out.push_back(error(IssueCode::DanglingRef,
                                    "rule " + rule.id + " references unknown phase " +
                                        quoted(phase_id),
                                    {phase_id}));
            } else if (phase->kind != FragmentKind::Phase) {
                out.push_back(error(IssueCode::KindMismatch,
                                    "rule " + rule.id + " references " + quoted(phase_id) +
                                        " which is not a Phase",
                                    {phase_id}));
            }
        }
    }

    sort_issues(out);
    return out;
}

std::vector<ValidationIssue> check_conformance(const MethodModel& method,
                                               const Metamodel& metamodel) {
    std::vector<ValidationIssue> out;
    auto lookup = [&](const FragmentId& id) { return resolve(metamodel, method, id); };

    if (method.migration_types.empty()) {
        out.push_back(error(IssueCode::EmptySelection, "no migration type selected", {}));
    }
    if (method.phases.empty()) {
        out.push_back(error(IssueCode::EmptySelection, "no phase selected", {}));
    }
    for (const auto& phase_id : method.phases) {
        const auto* phase = lookup(phase_id);
        if (phase == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "selected phase " + quoted(phase_id) + " does not resolve",
                                {phase_id}));
        } else if (phase->kind != FragmentKind::Phase) {
            out.push_back(error(IssueCode::KindMismatch,
                                "selected phase " + quoted(phase_id) + " is a " +
                                    std::string(to_string(phase->kind)),
                                {phase_id}));
        }
    }

    std::set<FragmentId> user_ids;
    for (const auto& fragment : method.user_fragments) {
        if (metamodel.find(fragment.id) != nullptr || !user_ids.insert(fragment.id).second) {
            out.push_back(error(IssueCode::DuplicateId,
                                "user fragment id " + quoted(fragment.id) + " is already taken",
                                {fragment.id}));
        }
        if (fragment.kind == FragmentKind::Phase) {
            out.push_back(error(IssueCode::KindMismatch,
                                "methods cannot define their own phases", {fragment.id}));
        }
        check_fragment_shape(fragment, lookup, out);
    }

    std::set<FragmentId> member_ids;
    for (const auto& inclusion : method.members) {
        const auto& id = inclusion.fragment;
        if (!member_ids.insert(id).second) {
            out.push_back(error(IssueCode::DuplicateId,
                                "fragment " + quoted(id) + " is included twice", {id}));
            continue;
        }
        const auto* fragment = lookup(id);
        if (fragment == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "member " + quoted(id) + " does not resolve", {id}));
            continue;
        }
        if (fragment->kind == FragmentKind::Phase || fragment->kind == FragmentKind::Technique) {
            out.push_back(error(IssueCode::KindMismatch,
                                std::string(to_string(fragment->kind)) + " " + quoted(id) +
                                    " cannot be a member",
                                {id}));
            continue;
        }
        if (fragment->phase && std::find(method.phases.begin(), method.phases.end(),
                                         *fragment->phase) == method.phases.end()) {
            out.push_back(error(IssueCode::DanglingRef,
                                "member " + quoted(id) + " belongs to unselected phase " +
                                    quoted(*fragment->phase),
                                {id, *fragment->phase}));
        }
    }

    for (const auto& edge : method.sequences) {
        for (const auto& endpoint : {edge.predecessor, edge.successor}) {
            if (!member_ids.contains(endpoint)) {
                out.push_back(error(IssueCode::DanglingRef,
                                    "sequence endpoint " + quoted(endpoint) + " is not a member",
                                    {endpoint}));
            }
        }
    }

    for (const auto& binding : method.technique_bindings) {
        const auto* task = lookup(binding.task);
        const auto* technique = lookup(binding.technique);
        if (task == nullptr || !member_ids.contains(binding.task)) {
            out.push_back(error(IssueCode::DanglingRef,
                                "technique binding task " + quoted(binding.task) +
                                    " is not a member",
                                {binding.task, binding.technique}));
        } else if (task->kind != FragmentKind::Task) {
            out.push_back(error(IssueCode::KindMismatch,
                                "techniques bind to tasks, " + quoted(binding.task) + " is a " +
                                    std::string(to_string(task->kind)),
                                {binding.task, binding.technique}));
        }
        if (technique == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "technique " + quoted(binding.technique) + " does not resolve",
                                {binding.task, binding.technique}));
        } else if (technique->kind != FragmentKind::Technique) {
            out.push_back(error(IssueCode::KindMismatch,
                                quoted(binding.technique) + " is not a Technique",
                                {binding.task, binding.technique}));
        }
    }

    for (const auto& waiver : method.waivers) {
        if (lookup(waiver.fragment) == nullptr) {
            out.push_back(error(IssueCode::DanglingRef,
                                "waiver for " + quoted(waiver.fragment) + " does not resolve",
                                {waiver.fragment}));
        }
    }

    for (const auto& rel : method.relationships) {
        check_relationship(rel, lookup, out);
    }

    // Union of the mandatory sets of every selected migration type.
    std::set<FragmentId> waived;
    for (const auto& waiver : method.waivers) {
        waived.insert(waiver.fragment);
    }
    std::set<FragmentId> missing;
    for (const auto& entry : metamodel.applicability) {
        if (entry.level != ApplicabilityLevel::Mandatory ||
            std::find(method.migration_types.begin(), method.migration_types.end(),
                      entry.migration_type) == method.migration_types.end()) {
            continue;
        }
        const auto* fragment = metamodel.find(entry.fragment);
        if (fragment == nullptr || !fragment->phase ||
            std::find(method.phases.begin(), method.phases.end(), *fragment->phase) ==
                method.phases.end()) {
            continue;
        }
        if (!member_ids.contains(entry.fragment) && !waived.contains(entry.fragment)) {
            missing.insert(entry.fragment);
        }
    }
    for (const auto& id : missing) {
        out.push_back(issue(Severity::Warning, IssueCode::MissingMandatory,
                            "mandatory fragment " + quoted(id) + " (" + metamodel.find(id)->name +
                                ") is neither included nor waived",
                            {id}));
    }

    std::set<std::pair<FragmentId, FragmentId>> follows;
    for (const auto& rel : metamodel.relationships) {
        if (rel.type == RelationshipType::Follows) {
            follows.emplace(rel.source, rel.target);
        }
    }
    std::set<std::pair<FragmentId, FragmentId>> reported;
    for (const auto& edge : method.sequences) {
        if (follows.contains({edge.successor, edge.predecessor}) &&
            reported.emplace(edge.predecessor, edge.successor).second) {
            out.push_back(issue(Severity::Warning, IssueCode::IllogicalSequence,
                                "sequence " + quoted(edge.predecessor) + " -> " +
                                    quoted(edge.successor) +
                                    " reverses the catalog order " + quoted(edge.successor) +
                                    " -> " + quoted(edge.predecessor),
                                {edge.predecessor, edge.successor}));
        }
    }
    for (auto& component : cyclic_components(method.sequences)) {
        std::string names;
        for (const auto& id : component) {
            names += (names.empty() ? "" : ", ") + quoted(id);
        }
        out.push_back(issue(Severity::Warning, IssueCode::IllogicalSequence,
                            "sequences form a cycle through " + names, std::move(component)));
    }

    sort_issues(out);
    return out;
}

std::vector<FragmentRelationship> relationship_set(const Metamodel& metamodel,
                                                   std::optional<RelationshipType> filter) {
    std::vector<FragmentRelationship> out;
    std::copy_if(metamodel.relationships.begin(), metamodel.relationships.end(),
                 std::back_inserter(out),
                 [&](const FragmentRelationship& rel) { return !filter || rel.type == *filter; });
    return out;
}

std::vector<FragmentRelationship> relationship_set(const MethodModel& method,
                                                   std::optional<RelationshipType> filter) {
    std::vector<FragmentRelationship> out;
    std::copy_if(method.relationships.begin(), method.relationships.end(),
                 std::back_inserter(out),
                 [&](const FragmentRelationship& rel) { return !filter || rel.type == *filter; });
    return out;
}

std::size_t count_issues(std::span<const ValidationIssue> issues, Severity severity) {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(),
                      [&](const ValidationIssue& i) { return i.severity == severity; }));
}

std::string slugify(std::string_view name) {
    std::string out;
    bool pending_dash = false;
    for (char raw : name) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            if (pending_dash && !out.empty()) {
                out.push_back('-');
            }
            pending_dash = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_dash = true;
        }
    }
    return out;
}

}  // namespace mwb
