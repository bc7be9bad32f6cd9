#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mwb::testing {

const std::vector<ExcerptRow>& matrix_excerpt() {
    static const std::vector<ExcerptRow> rows = {
    {"adapt-data", "xcccc",
     "The incorporation of this fragment for the migration types II, III, IV, V depends on the "
     "choice of a cloud platform and inconsistencies between legacy application platform and "
     "cloud platform."},
    {"analyze-business-requirements", "ccccc", "Mandatory"},
    {"choose-cloud-platform-provider", "ccccc", "Mandatory"},
    {"cloud-solution-architecture", "ccccc", "Mandatory"},
    {"decouple-application-components", "ccccc",
     "The incorporation of this principle depends on new designed architecture model and the "
     "distribution of application components in the cloud."},
    {"develop-integrators", "ccccc",
     "The incorporation of this fragment depends on the choice of a cloud platform and required "
     "effort to refactor/modify legacy codes. If the code refactoring, as supported by refactor "
     "codes, is costly, then developing integrators/adaptors can be served as an alternative "
     "solution to hide incompatibilities."},
    {"enable-elasticity", "ccxxc",
     "The incorporation of this fragment in the migration types I, II, and V depends on a need "
     "for the application elasticity."},
    {"encrypt-decrypt-database", "xcccc",
     "The incorporation of this fragment in the migration types depends on security "
     "requirements."},
    {"handle-transient-faults", "ccccc", "Mandatory"},
    {"identify-incompatibilities", "ccxcc", "Mandatory"},
    {"isolate-tenant-availability", "xcxxx", "This is a mandatory fragment for migration type II."},
    };
    return rows;
}

ApplicabilityLevel expected_level(const ExcerptRow& row, int type_index) {
    if (row.glyphs[type_index] == 'x') return ApplicabilityLevel::Unnecessary;
    std::string text = row.situation;
    std::transform(text.begin(), text.end(), text.begin(), ::tolower);
    if (text.find("mandatory") != std::string::npos) return ApplicabilityLevel::Mandatory;
    if (text.find("depends on") != std::string::npos) return ApplicabilityLevel::Situational;
    throw std::logic_error(std::string("unclassified excerpt text for ") + row.id);
}

const std::vector<FragmentRelationship>& expected_relationships() {
    using K = KnowledgeSource;
    using R = RelationshipType;
    auto rel = [](R type, const char* s, const char* t, K k) {
        return FragmentRelationship{type, FragmentId(s), FragmentId(t), k};
    };
    static const std::vector<FragmentRelationship> tuples = {
        rel(R::Uses, "analyze-business-requirements", "choose-cloud-platform-provider", K::L),
        rel(R::Uses, "design-cloud-solution", "define-plan", K::L),
        rel(R::Follows, "choose-cloud-platform-provider", "identify-incompatibilities", K::L),
        rel(R::Produces, "design-cloud-solution", "cloud-solution-architecture", K::L),
        rel(R::IsAGroupOf, "analyze-context", "plan", K::M),
        rel(R::IsAKindOf, "re-factor-codes", "resolve-incompatibilities", K::M),
        rel(R::IsAKindOf, "develop-integrators", "resolve-incompatibilities", K::M),
        rel(R::IsAKindOf, "adapt-data", "resolve-incompatibilities", K::M),
    };
    return tuples;
}

std::set<FragmentId> brute_force_selection(const Metamodel& metamodel,
                                           const std::vector<MigrationType>& types,
                                           const std::vector<FragmentId>& phases) {
    std::set<FragmentId> out;
    for (const auto& f : metamodel.fragments) {
        if (!f.phase) continue;
        if (std::find(phases.begin(), phases.end(), *f.phase) == phases.end()) continue;
        for (auto t : types) {
            std::string level = "Situational";
            for (const auto& e : metamodel.applicability) {
                if (e.fragment == f.id && e.migration_type == t) level = std::string(to_string(e.level));
            }
            if (level != "Unnecessary") {
                out.insert(f.id);
                break;
            }
        }
    }
    return out;
}

std::vector<std::vector<FragmentId>> phase_subsets(const Metamodel& metamodel) {
    const auto all = metamodel.phase_order();
    std::vector<std::vector<FragmentId>> out;
    for (unsigned mask = 1; mask < (1u << all.size()); ++mask) {
        std::vector<FragmentId> subset;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (mask & (1u << i)) subset.push_back(all[i]);
        }
        out.push_back(subset);
    }
    return out;
}

}  // namespace mwb::testing
