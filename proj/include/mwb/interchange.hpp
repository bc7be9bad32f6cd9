#pragma once

// Method interchange: the canonical XML document and a structured-text form
// that reuses the record grammar (non-canonical, used by the store and CLI).
// See docs/xml-format.md.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwb/metamodel.hpp"
#include "mwb/records.hpp"

namespace mwb {

/// Byte-deterministic XML rendering. Throws IntegrityError when the method
/// has Error-severity issues.
std::string export_xml(const MethodModel& method, const Metamodel& metamodel);

/// Inverse of export_xml. Throws ParseError for malformed or non-conforming
/// documents (unknown elements and attributes are rejected), VersionMismatch
/// when the document targets another metamodel version unless `force` is set,
/// in which case the method is rebound to `metamodel`.
MethodModel import_xml(std::string_view document, const Metamodel& metamodel,
                       bool force = false);

// Record codecs. A method is a [method] record followed by its parts.

std::vector<records::Record> method_records(const MethodModel& method,
                                            bool include_bindings = true);
/// `records` starts with the [method] record; performs no conformance checks.
MethodModel method_from_records(std::span<const records::Record> records);

std::vector<records::Record> instance_records(const MethodInstance& instance,
                                              bool include_bindings = true);
MethodInstance instance_from_records(std::span<const records::Record> records);

/// Splits a flat record list into groups, each starting at a record of `head`.
std::vector<std::span<const records::Record>> group_records(
    std::span<const records::Record> records, std::string_view head);

extern const std::vector<records::Schema> kMethodSchemas;

/// Standalone structured-text documents (header `document: method`).
std::string export_method_records(const MethodModel& method);
MethodModel import_method_records(std::string_view text);

}  // namespace mwb
