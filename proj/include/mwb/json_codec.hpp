#pragma once

// JSON shapes used by the service. schemas/*.json describes every one of them.

#include "json.hpp"

#include "mwb/errors.hpp"
#include "mwb/metamodel.hpp"
#include "mwb/repository.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"

namespace mwb::json {

using nlohmann::json;

json fragment(const MethodFragment& fragment);
json relationship(const FragmentRelationship& relationship);
json rule(const TransformationRule& rule);
json issue(const ValidationIssue& issue);
json issues(const std::vector<ValidationIssue>& issues);
json error(const Error& error);
json index_entry(const MethodIndexEntry& entry);
json instance(const MethodInstance& instance);
json explanation(const InclusionExplanation& explanation);

/// Catalog fragment with its applicability row, relationships and suggested techniques.
json fragment_detail(const Metamodel& metamodel, const MethodFragment& fragment);

/// A method with every member resolved, for clients that do not hold the catalog.
json method(const MethodModel& method, const Metamodel& metamodel);

// Request decoding. Every decoder rejects unknown keys and wrong types with ParseError.

TailoringAction action_from_json(const json& body);
json action_to_json(const TailoringAction& action);

struct CreateMethodRequest {
    std::string name;
    std::string description;
    std::vector<MigrationType> migration_types;
    std::vector<FragmentId> phases;
};
CreateMethodRequest create_request_from_json(const json& body);

struct CreateInstanceRequest {
    std::optional<std::string> id;
    std::vector<TechniqueBinding> chosen_techniques;
    std::string enactment_notes;
};
CreateInstanceRequest instance_request_from_json(const json& body);

/// Parses text, mapping syntax errors to ParseError.
json parse(std::string_view text);

}  // namespace mwb::json
