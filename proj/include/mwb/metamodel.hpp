#pragma once

// Domain types for the three modeling levels handled by the workbench:
//   M2  Metamodel        fragments, relationships, applicability, rules
//   M1  MethodModel      a method derived from (and conforming to) a metamodel
//   M0  MethodInstance   a method enacted with concrete techniques

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mwb {

class FragmentId {
public:
    FragmentId() = default;
    explicit FragmentId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const FragmentId&, const FragmentId&) = default;
    friend bool operator==(const FragmentId&, const FragmentId&) = default;

private:
    std::string value_;
};

enum class FragmentKind { Phase, Task, WorkProduct, Principle, Technique };
enum class Provenance { Catalog, UserDefined };
enum class RelationshipType { Uses, Follows, Produces, IsAGroupOf, IsAKindOf };
enum class RelationshipCategory { Association, Aggregation, Specialization };
/// L: taken from the literature; M: introduced while metamodeling.
enum class KnowledgeSource { L, M };
enum class MigrationType { I, II, III, IV, V };
enum class ApplicabilityLevel { Mandatory, Situational, Unnecessary };
enum class Severity { Error, Warning };
enum class IssueCode {
    DanglingRef,
    MissingMandatory,
    IllogicalSequence,
    EmptySelection,
    KindMismatch,
    DuplicateId,
};

inline constexpr FragmentKind kAllFragmentKinds[] = {
    FragmentKind::Phase, FragmentKind::Task, FragmentKind::WorkProduct,
    FragmentKind::Principle, FragmentKind::Technique};
inline constexpr MigrationType kAllMigrationTypes[] = {
    MigrationType::I, MigrationType::II, MigrationType::III, MigrationType::IV,
    MigrationType::V};
inline constexpr RelationshipType kAllRelationshipTypes[] = {
    RelationshipType::Uses, RelationshipType::Follows, RelationshipType::Produces,
    RelationshipType::IsAGroupOf, RelationshipType::IsAKindOf};

std::string_view to_string(FragmentKind kind);
std::string_view to_string(Provenance provenance);
std::string_view to_string(RelationshipType type);
std::string_view to_string(RelationshipCategory category);
std::string_view to_string(KnowledgeSource source);
std::string_view to_string(MigrationType type);
std::string_view to_string(ApplicabilityLevel level);
std::string_view to_string(Severity severity);
std::string_view to_string(IssueCode code);

// Parsers accept exactly the spelling produced by to_string.
std::optional<FragmentKind> parse_fragment_kind(std::string_view text);
std::optional<Provenance> parse_provenance(std::string_view text);
std::optional<RelationshipType> parse_relationship_type(std::string_view text);
std::optional<KnowledgeSource> parse_knowledge_source(std::string_view text);
std::optional<MigrationType> parse_migration_type(std::string_view text);
std::optional<ApplicabilityLevel> parse_applicability_level(std::string_view text);
std::optional<Severity> parse_severity(std::string_view text);
std::optional<IssueCode> parse_issue_code(std::string_view text);

RelationshipCategory category_of(RelationshipType type);

/// Long-form description of a migration type.
std::string_view describe(MigrationType type);

struct MethodFragment {
    FragmentId id;
    std::string name;
    FragmentKind kind = FragmentKind::Task;
    std::string definition;
    std::optional<FragmentId> phase;
    Provenance provenance = Provenance::Catalog;
    std::optional<FragmentId> parent;
    /// Free-form marker about where the definition comes from,
    /// e.g. "name-only" for placeholder definitions.
    std::optional<std::string> provenance_note;

    bool operator==(const MethodFragment&) const = default;
};

struct FragmentRelationship {
    RelationshipType type = RelationshipType::Uses;
    FragmentId source;
    FragmentId target;
    KnowledgeSource knowledge_source = KnowledgeSource::L;

    auto operator<=>(const FragmentRelationship&) const = default;
    bool operator==(const FragmentRelationship&) const = default;
};

struct ApplicabilityEntry {
    FragmentId fragment;
    MigrationType migration_type = MigrationType::I;
    ApplicabilityLevel level = ApplicabilityLevel::Situational;
    std::optional<std::string> situation_note;

    bool operator==(const ApplicabilityEntry&) const = default;
};

/// A technique the library suggests for operationalizing a task.
struct TechniqueSuggestion {
    FragmentId task;
    FragmentId technique;

    auto operator<=>(const TechniqueSuggestion&) const = default;
    bool operator==(const TechniqueSuggestion&) const = default;
};

// Transformation rules are data interpreted by the engine in transform.hpp.

/// Fires when both lists are satisfied; an empty list matches anything.
struct RuleGuard {
    std::vector<MigrationType> migration_types;
    std::vector<FragmentId> phases;

    bool operator==(const RuleGuard&) const = default;
};

/// Which fragments an action applies to. `phase` absent means every selected
/// phase; empty `levels` or `kinds` means no filtering on that axis.
struct FragmentSelector {
    std::optional<FragmentId> phase;
    std::vector<ApplicabilityLevel> levels;
    std::vector<FragmentKind> kinds;

    bool operator==(const FragmentSelector&) const = default;
};

enum class RuleAction { IncludeFragments, IncludeRelationships };

std::string_view to_string(RuleAction action);
std::optional<RuleAction> parse_rule_action(std::string_view text);

struct TransformationRule {
    std::string id;
    std::string name;
    std::string meaning;
    /// Where the encoding departs from the formal rule syntax.
    std::optional<std::string> syntax_note;
    RuleGuard guard;
    RuleAction action = RuleAction::IncludeFragments;
    FragmentSelector selector;
    /// Only for IncludeRelationships; empty means every type.
    std::vector<RelationshipType> relationship_types;

    bool operator==(const TransformationRule&) const = default;
};

/// Orders rule ids numerically segment by segment ("R04" < "R04.3" < "R05.1").
bool rule_id_less(std::string_view a, std::string_view b);

struct Metamodel {
    std::string version;
    /// Kept in document order; phase order is the order phases appear here.
    std::vector<MethodFragment> fragments;
    std::vector<FragmentRelationship> relationships;
    std::vector<ApplicabilityEntry> applicability;
    std::vector<TechniqueSuggestion> techniques;
    std::vector<TransformationRule> rules;

    const MethodFragment* find(const FragmentId& id) const;
    /// Phase fragment ids in catalog order.
    std::vector<FragmentId> phase_order() const;

    bool operator==(const Metamodel&) const = default;
};

struct FragmentInclusion {
    FragmentId fragment;
    std::optional<std::string> definition_override;
    /// Situation note carried over for members included as Situational.
    std::optional<std::string> note;

    bool operator==(const FragmentInclusion&) const = default;
};

struct SequenceEdge {
    FragmentId predecessor;
    FragmentId successor;

    auto operator<=>(const SequenceEdge&) const = default;
    bool operator==(const SequenceEdge&) const = default;
};

struct TechniqueBinding {
    FragmentId task;
    FragmentId technique;

    auto operator<=>(const TechniqueBinding&) const = default;
    bool operator==(const TechniqueBinding&) const = default;
};

struct Waiver {
    FragmentId fragment;
    std::string justification;

    bool operator==(const Waiver&) const = default;
};

struct MethodModel {
    std::string id;
    std::string name;
    std::string description;
    std::vector<MigrationType> migration_types;  // sorted, unique
    std::vector<FragmentId> phases;              // catalog phase order
    std::vector<MethodFragment> user_fragments;  // sorted by id
    std::vector<FragmentInclusion> members;      // (phase order, id)
    std::vector<FragmentRelationship> relationships;
    std::vector<SequenceEdge> sequences;  // as defined, order preserved
    std::vector<TechniqueBinding> technique_bindings;  // sorted
    std::string metamodel_version;
    std::vector<Waiver> waivers;  // sorted by fragment

    const FragmentInclusion* member(const FragmentId& id) const;
    const MethodFragment* user_fragment(const FragmentId& id) const;

    bool operator==(const MethodModel&) const = default;
};

struct MethodInstance {
    std::string id;
    std::string method;
    std::vector<TechniqueBinding> chosen_techniques;
    std::string enactment_notes;

    bool operator==(const MethodInstance&) const = default;
};

struct ValidationIssue {
    Severity severity = Severity::Error;
    IssueCode code = IssueCode::DanglingRef;
    std::string message;
    std::vector<FragmentId> subjects;

    bool operator==(const ValidationIssue&) const = default;
};

/// Resolves a fragment id against the metamodel first, then the method's
/// user-defined fragments. Returns nullptr when neither knows the id.
const MethodFragment* resolve(const Metamodel& metamodel, const MethodModel& method,
                              const FragmentId& id);

/// The ordering used for every issue list: severity, code, subjects, message.
void sort_issues(std::vector<ValidationIssue>& issues);

/// Structural checks on a metamodel (ids, kinds, references). Empty when valid.
std::vector<ValidationIssue> validate_metamodel(const Metamodel& metamodel);

/// Decides membership of `method` in the set of valid instances of
/// `metamodel`. Never throws; every problem becomes an issue.
std::vector<ValidationIssue> check_conformance(const MethodModel& method,
                                               const Metamodel& metamodel);

/// All relationships of the metamodel, optionally restricted to one type.
std::vector<FragmentRelationship> relationship_set(
    const Metamodel& metamodel, std::optional<RelationshipType> filter = std::nullopt);

/// Relationships carried by a method, including implicit specializations of
/// user-defined fragments.
std::vector<FragmentRelationship> relationship_set(
    const MethodModel& method, std::optional<RelationshipType> filter = std::nullopt);

std::size_t count_issues(std::span<const ValidationIssue> issues, Severity severity);

/// Lowercase hyphenated id derived from a display name.
std::string slugify(std::string_view name);

}  // namespace mwb

template <>
struct std::hash<mwb::FragmentId> {
    std::size_t operator()(const mwb::FragmentId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
