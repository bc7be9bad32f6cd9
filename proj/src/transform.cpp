#include "mwb/transform.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "mwb/errors.hpp"

namespace mwb {

namespace {

template <typename T>
bool contains(std::span<const T> items, const T& value) {
    return std::find(items.begin(), items.end(), value) != items.end();
}

template <typename T>
bool contains(const std::vector<T>& items, const T& value) {
    return std::find(items.begin(), items.end(), value) != items.end();
}

// (fragment, type) -> entry, built once per evaluation.
class ApplicabilityIndex {
public:
    explicit ApplicabilityIndex(const Metamodel& metamodel) {
        for (const auto& entry : metamodel.applicability) {
            entries_.emplace(std::pair{entry.fragment, entry.migration_type}, &entry);
        }
    }

    ApplicabilityLevel level(const FragmentId& fragment, MigrationType type) const {
        auto it = entries_.find({fragment, type});
        return it == entries_.end() ? ApplicabilityLevel::Situational : it->second->level;
    }

    std::optional<std::string> note(const FragmentId& fragment, MigrationType type) const {
        auto it = entries_.find({fragment, type});
        return it == entries_.end() ? std::nullopt : it->second->situation_note;
    }

private:
    std::map<std::pair<FragmentId, MigrationType>, const ApplicabilityEntry*> entries_;
};

bool guard_fires(const RuleGuard& guard, std::span<const MigrationType> types,
                 std::span<const FragmentId> phases) {
    const bool types_ok =
        guard.migration_types.empty() ||
        std::any_of(types.begin(), types.end(),
                    [&](MigrationType t) { return contains(guard.migration_types, t); });
    const bool phases_ok =
        guard.phases.empty() || std::any_of(phases.begin(), phases.end(), [&](const FragmentId& p) {
            return contains(guard.phases, p);
        });
    return types_ok && phases_ok;
}

bool phase_passes(const FragmentSelector& selector, const FragmentId& phase,
                  std::span<const FragmentId> selected) {
    if (!contains(selected, phase)) {
        return false;
    }
    return !selector.phase || *selector.phase == phase;
}

bool selects(const FragmentSelector& selector, const MethodFragment& fragment,
             std::span<const MigrationType> types, std::span<const FragmentId> phases,
             const ApplicabilityIndex& index) {
    if (!fragment.phase || !phase_passes(selector, *fragment.phase, phases)) {
        return false;
    }
    if (!selector.kinds.empty() && !contains(selector.kinds, fragment.kind)) {
        return false;
    }
    if (selector.levels.empty()) {
        return true;
    }
    return std::any_of(types.begin(), types.end(), [&](MigrationType t) {
        return contains(selector.levels, index.level(fragment.id, t));
    });
}

std::optional<std::string> annotation(const ApplicabilityIndex& index, const FragmentId& fragment,
                                      std::span<const MigrationType> types) {
    std::optional<std::string> note;
    for (MigrationType t : types) {
        const auto level = index.level(fragment, t);
        if (level == ApplicabilityLevel::Mandatory) {
            return std::nullopt;
        }
        if (!note && level == ApplicabilityLevel::Situational) {
            note = index.note(fragment, t);
        }
    }
    return note;
}

std::size_t phase_rank(const std::vector<FragmentId>& order, const FragmentId& phase) {
    auto it = std::find(order.begin(), order.end(), phase);
    return it == order.end() ? std::numeric_limits<std::size_t>::max()
                             : static_cast<std::size_t>(it - order.begin());
}

std::vector<MigrationType> sorted_types(std::span<const MigrationType> types) {
    std::vector<MigrationType> out(types.begin(), types.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::optional<std::string> annotation_for(const Metamodel& metamodel, const FragmentId& fragment,
                                          std::span<const MigrationType> types) {
    return annotation(ApplicabilityIndex(metamodel), fragment, sorted_types(types));
}

std::vector<FragmentRelationship> carried_relationships(const Metamodel& metamodel,
                                                        const MethodModel& method) {
    std::map<FragmentId, std::optional<FragmentId>> member_phase;
    for (const auto& inclusion : method.members) {
        const auto* fragment = resolve(metamodel, method, inclusion.fragment);
        member_phase[inclusion.fragment] = fragment ? fragment->phase : std::nullopt;
    }

    std::set<FragmentRelationship> out;
    for (const auto& rule : metamodel.rules) {
        if (rule.action != RuleAction::IncludeRelationships ||
            !guard_fires(rule.guard, method.migration_types, method.phases)) {
            continue;
        }
        auto endpoint_ok = [&](const FragmentId& id) {
            if (contains(method.phases, id)) {
                return !rule.selector.phase || *rule.selector.phase == id;
            }
            auto it = member_phase.find(id);
            return it != member_phase.end() && it->second &&
                   phase_passes(rule.selector, *it->second, method.phases);
        };
        for (const auto& rel : metamodel.relationships) {
            if ((rule.relationship_types.empty() || contains(rule.relationship_types, rel.type)) &&
                endpoint_ok(rel.source) && endpoint_ok(rel.target)) {
                out.insert(rel);
            }
        }
    }
    for (const auto& fragment : method.user_fragments) {
        if (fragment.parent) {
            out.insert(FragmentRelationship{RelationshipType::IsAKindOf, fragment.id,
                                            *fragment.parent, KnowledgeSource::M});
        }
    }
    return {out.begin(), out.end()};
}

void normalize(MethodModel& method, const Metamodel& metamodel) {
    method.migration_types = sorted_types(method.migration_types);

    const auto order = metamodel.phase_order();
    std::stable_sort(method.phases.begin(), method.phases.end(),
                     [&](const FragmentId& a, const FragmentId& b) {
                         return std::pair{phase_rank(order, a), a} < std::pair{phase_rank(order, b), b};
                     });
    method.phases.erase(std::unique(method.phases.begin(), method.phases.end()),
                        method.phases.end());

    std::sort(method.user_fragments.begin(), method.user_fragments.end(),
              [](const MethodFragment& a, const MethodFragment& b) { return a.id < b.id; });

    auto member_key = [&](const FragmentInclusion& inclusion) {
        const auto* fragment = resolve(metamodel, method, inclusion.fragment);
        const auto rank = fragment && fragment->phase ? phase_rank(order, *fragment->phase)
                                                      : std::numeric_limits<std::size_t>::max();
        return std::pair{rank, inclusion.fragment};
    };
    std::stable_sort(method.members.begin(), method.members.end(),
                     [&](const FragmentInclusion& a, const FragmentInclusion& b) {
                         return member_key(a) < member_key(b);
                     });

    std::sort(method.technique_bindings.begin(), method.technique_bindings.end());
    method.technique_bindings.erase(
        std::unique(method.technique_bindings.begin(), method.technique_bindings.end()),
        method.technique_bindings.end());

    std::stable_sort(method.waivers.begin(), method.waivers.end(),
                     [](const Waiver& a, const Waiver& b) { return a.fragment < b.fragment; });
    method.waivers.erase(std::unique(method.waivers.begin(), method.waivers.end(),
                                     [](const Waiver& a, const Waiver& b) {
                                         return a.fragment == b.fragment;
                                     }),
                         method.waivers.end());
    // A waiver records why a fragment is absent; members need none.
    std::erase_if(method.waivers,
                  [&](const Waiver& w) { return method.member(w.fragment) != nullptr; });

    method.relationships = carried_relationships(metamodel, method);
}

MethodModel instantiate(const Metamodel& metamodel, const std::string& name,
                        std::span<const MigrationType> types, std::span<const FragmentId> phases,
                        const std::string& description) {
    if (types.empty()) {
        throw Error(ErrorCode::EmptySelection, "select at least one migration type");
    }
    if (phases.empty()) {
        throw Error(ErrorCode::EmptySelection, "select at least one phase");
    }
    for (const auto& phase : phases) {
        const auto* fragment = metamodel.find(phase);
        if (fragment == nullptr || fragment->kind != FragmentKind::Phase) {
            throw Error(ErrorCode::UnknownPhase, "'" + phase.str() + "' is not a phase",
                        {phase.str()});
        }
    }

    MethodModel method;
    method.id = slugify(name);
    method.name = name;
    method.description = description;
    method.migration_types = sorted_types(types);
    method.phases.assign(phases.begin(), phases.end());
    method.metamodel_version = metamodel.version;

    const ApplicabilityIndex index(metamodel);
    std::set<FragmentId> included;
    for (const auto& rule : metamodel.rules) {
        if (rule.action != RuleAction::IncludeFragments ||
            !guard_fires(rule.guard, method.migration_types, method.phases)) {
            continue;
        }
        for (const auto& fragment : metamodel.fragments) {
            if (selects(rule.selector, fragment, method.migration_types, method.phases, index)) {
                included.insert(fragment.id);
            }
        }
    }
    for (const auto& id : included) {
        method.members.push_back(
            FragmentInclusion{id, std::nullopt, annotation(index, id, method.migration_types)});
    }
    normalize(method, metamodel);

    for (const auto& rel : relationship_set(metamodel, RelationshipType::Follows)) {
        if (included.contains(rel.source) && included.contains(rel.target)) {
            method.sequences.push_back(SequenceEdge{rel.source, rel.target});
        }
    }
    return method;
}

std::vector<TransformationRule> list_rules(const Metamodel& metamodel) {
    auto rules = metamodel.rules;
    std::stable_sort(rules.begin(), rules.end(),
                     [](const TransformationRule& a, const TransformationRule& b) {
                         return rule_id_less(a.id, b.id);
                     });
    return rules;
}

InclusionExplanation explain_inclusion(const Metamodel& metamodel,
                                       std::span<const MigrationType> types,
                                       const FragmentId& fragment_id) {
    const auto* fragment = metamodel.find(fragment_id);
    if (fragment == nullptr) {
        throw Error(ErrorCode::UnknownFragment, "unknown fragment '" + fragment_id.str() + "'",
                    {fragment_id.str()});
    }
    const ApplicabilityIndex index(metamodel);
    const auto selected_types = sorted_types(types);

    InclusionExplanation out;
    out.fragment = fragment_id;
    for (MigrationType t : selected_types) {
        out.per_type.push_back(
            TypeApplicability{t, index.level(fragment_id, t), index.note(fragment_id, t)});
    }
    if (fragment->phase) {
        const std::vector<FragmentId> phases{*fragment->phase};
        for (const auto& rule : list_rules(metamodel)) {
            if (rule.action == RuleAction::IncludeFragments &&
                guard_fires(rule.guard, selected_types, phases) &&
                selects(rule.selector, *fragment, selected_types, phases, index)) {
                out.governing_rule = rule.id;
                break;
            }
        }
    }
    out.note = annotation(index, fragment_id, selected_types);
    return out;
}

}  // namespace mwb
