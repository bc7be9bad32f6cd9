#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwb/metamodel.hpp"
#include "mwb/records.hpp"

namespace mwb {

struct Applicability {
    ApplicabilityLevel level = ApplicabilityLevel::Situational;
    std::optional<std::string> situation_note;

    bool operator==(const Applicability&) const = default;
};

/// Parses a catalog document and checks every metamodel invariant.
/// Throws ParseError for malformed text and IntegrityError (listing every
/// offending id) for dangling references, duplicate ids or kind violations.
Metamodel load_catalog(std::string_view source);

/// Canonical, byte-deterministic rendering; load_catalog(export_catalog(m)) == m.
std::string export_catalog(const Metamodel& metamodel);

/// The catalog shipped with the workbench, embedded at build time.
std::string_view shipped_catalog_text();
const Metamodel& shipped_catalog();

/// Matrix lookup. Fragments without an entry for `type` are Situational
/// with no note. Throws UnknownFragment.
Applicability applicability_of(const Metamodel& metamodel, const FragmentId& fragment,
                               MigrationType type);

// Record codecs shared with the repository and script formats.
records::Record fragment_record(const MethodFragment& fragment, std::string type = "fragment");
MethodFragment fragment_from_record(const records::Record& record);
records::Record relationship_record(const FragmentRelationship& relationship);
FragmentRelationship relationship_from_record(const records::Record& record);

/// Records making up one metamodel, in canonical order (no header).
std::vector<records::Record> metamodel_records(const Metamodel& metamodel);
/// Inverse of metamodel_records; performs no integrity checks.
Metamodel metamodel_from_records(std::string version, const std::vector<records::Record>& records);

extern const std::vector<records::Schema> kCatalogSchemas;

}  // namespace mwb
