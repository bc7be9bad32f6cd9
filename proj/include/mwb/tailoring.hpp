#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mwb/errors.hpp"
#include "mwb/metamodel.hpp"
#include "mwb/records.hpp"

namespace mwb {

/// Description of a fragment to add. With only `id` set and the id naming a
/// catalog fragment, the catalog fragment is (re-)included.
struct FragmentSpec {
    std::optional<FragmentId> id;
    std::string name;
    std::optional<FragmentKind> kind;
    std::optional<FragmentId> phase;
    std::string definition;

    bool operator==(const FragmentSpec&) const = default;
};

namespace action {

struct AddFragment {
    FragmentSpec fragment;
    bool operator==(const AddFragment&) const = default;
};

/// Creates a user-defined specialization of `parent` (same kind, same phase).
struct ExtendFragment {
    FragmentId parent;
    FragmentSpec child;
    bool operator==(const ExtendFragment&) const = default;
};

struct RemoveFragment {
    FragmentId id;
    std::optional<std::string> waiver;
    bool operator==(const RemoveFragment&) const = default;
};

/// Replaces the whole sequence list.
struct SetSequence {
    std::vector<SequenceEdge> edges;
    bool operator==(const SetSequence&) const = default;
};

struct BindTechnique {
    FragmentId task;
    FragmentId technique;
    bool operator==(const BindTechnique&) const = default;
};

struct UnbindTechnique {
    FragmentId task;
    FragmentId technique;
    bool operator==(const UnbindTechnique&) const = default;
};

/// Catalog fragments get a method-local override; user fragments are edited in place.
struct EditDefinition {
    FragmentId id;
    std::string definition;
    bool operator==(const EditDefinition&) const = default;
};

}  // namespace action

using TailoringAction =
    std::variant<action::AddFragment, action::ExtendFragment, action::RemoveFragment,
                 action::SetSequence, action::BindTechnique, action::UnbindTechnique,
                 action::EditDefinition>;

std::string_view action_name(const TailoringAction& action);

struct TailoringResult {
    MethodModel method;
    std::vector<ValidationIssue> issues;
};

/// Applies one edit and re-validates. The input is never modified.
/// Throws UnknownTarget, KindMismatch, DuplicateId (and VersionMismatch when
/// the method was built against another metamodel version).
TailoringResult apply(const MethodModel& method, const Metamodel& metamodel,
                      const TailoringAction& action);

/// Failure of action `index` (0-based) during replay.
class ReplayError : public Error {
public:
    ReplayError(std::size_t index, const Error& cause);

    std::size_t index() const noexcept { return index_; }
    ErrorCode cause() const noexcept { return cause_; }

private:
    std::size_t index_;
    ErrorCode cause_;
};

/// Left fold of apply; all-or-nothing.
TailoringResult replay(const MethodModel& method, const Metamodel& metamodel,
                       std::span<const TailoringAction> actions);

// Action scripts use the record grammar, one [action] record per edit.
std::vector<TailoringAction> parse_script(std::string_view text);
std::string write_script(std::span<const TailoringAction> actions);
records::Record action_record(const TailoringAction& action);
TailoringAction action_from_record(const records::Record& record);

}  // namespace mwb
