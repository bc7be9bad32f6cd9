#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwb/catalog.hpp"
#include "mwb/metamodel.hpp"

namespace mwb {

/// Vertical M2 -> M1 instantiation driven by the metamodel's rules.
///
/// Members are every fragment selected by an IncludeFragments rule whose
/// guard fires; with the shipped rules that is each fragment of a selected
/// phase that is Mandatory or Situational for at least one selected type.
/// Situational members carry their situation note, relationships among the
/// members are carried over and the initial sequences are the Follows edges
/// between members. The method id is the slug of `name`.
///
/// Throws EmptySelection when `types` or `phases` is empty, UnknownPhase when
/// a phase id does not name a Phase fragment.
MethodModel instantiate(const Metamodel& metamodel, const std::string& name,
                        std::span<const MigrationType> types, std::span<const FragmentId> phases,
                        const std::string& description = {});

/// Rules in rule-id order.
std::vector<TransformationRule> list_rules(const Metamodel& metamodel);

struct TypeApplicability {
    MigrationType migration_type = MigrationType::I;
    ApplicabilityLevel level = ApplicabilityLevel::Situational;
    std::optional<std::string> situation_note;

    bool operator==(const TypeApplicability&) const = default;
};

struct InclusionExplanation {
    FragmentId fragment;
    std::vector<TypeApplicability> per_type;
    /// First rule (in rule-id order) that would include the fragment when its
    /// phase is selected; absent when no rule does.
    std::optional<std::string> governing_rule;
    /// Annotation a member would carry: the first situation note among the
    /// selected types, unless the fragment is Mandatory for one of them.
    std::optional<std::string> note;

    bool operator==(const InclusionExplanation&) const = default;
};

/// Throws UnknownFragment.
InclusionExplanation explain_inclusion(const Metamodel& metamodel,
                                       std::span<const MigrationType> types,
                                       const FragmentId& fragment);

// Helpers shared by tailoring and import so that derived state is always
// computed the same way.

/// Situation-note annotation for a catalog member, see InclusionExplanation::note.
std::optional<std::string> annotation_for(const Metamodel& metamodel, const FragmentId& fragment,
                                          std::span<const MigrationType> types);

/// Relationships a method carries: metamodel relationships selected by the
/// fired IncludeRelationships rules plus IsAKindOf for every user fragment
/// with a parent. Sorted.
std::vector<FragmentRelationship> carried_relationships(const Metamodel& metamodel,
                                                        const MethodModel& method);

/// Sorts members, bindings and waivers, dedupes selections and recomputes
/// carried relationships. Every producer of a MethodModel ends with this.
void normalize(MethodModel& method, const Metamodel& metamodel);

}  // namespace mwb
