#pragma once

// Expected values kept apart from the implementation: the printed matrix
// excerpt, the seeded relationship tuples and a raw-scan selection.

#include <set>
#include <vector>

#include "mwb/metamodel.hpp"

namespace mwb::testing {

// One excerpt row as printed: a glyph per type I..V (c = check, x = cross)
// and the situation text.
struct ExcerptRow {
    const char* id;
    const char* glyphs;
    const char* situation;
};

const std::vector<ExcerptRow>& matrix_excerpt();

/// A checked cell is Mandatory when the text says "mandatory", Situational
/// when it says "depends on"; a crossed cell is Unnecessary. Throws on text
/// matching neither.
ApplicabilityLevel expected_level(const ExcerptRow& row, int type_index);

const std::vector<FragmentRelationship>& expected_relationships();

/// Fragments whose phase is selected and which some selected type does not
/// mark Unnecessary, scanning raw entries (absent means Situational).
std::set<FragmentId> brute_force_selection(const Metamodel& metamodel,
                                           const std::vector<MigrationType>& types,
                                           const std::vector<FragmentId>& phases);

/// Every non-empty subset of the phase order.
std::vector<std::vector<FragmentId>> phase_subsets(const Metamodel& metamodel);

}  // namespace mwb::testing
