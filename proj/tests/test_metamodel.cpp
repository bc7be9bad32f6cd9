#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "mwb/catalog.hpp"
#include "mwb/interchange.hpp"
#include "mwb/transform.hpp"
#include "support.hpp"

using namespace mwb;
using mwb::testing::ids;

namespace {

const Metamodel& catalog() { return shipped_catalog(); }

std::vector<IssueCode> codes(const std::vector<ValidationIssue>& issues) {
    std::vector<IssueCode> out;
    for (const auto& i : issues) out.push_back(i.code);
    return out;
}

bool has(const std::vector<ValidationIssue>& issues, IssueCode code, const std::string& subject) {
    return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) {
        return i.code == code && std::find(i.subjects.begin(), i.subjects.end(),
                                           FragmentId(subject)) != i.subjects.end();
    });
}

}  // namespace

TEST_CASE("enumerations round-trip through their spelling") {
    for (auto k : kAllFragmentKinds) CHECK(parse_fragment_kind(to_string(k)) == k);
    for (auto t : kAllMigrationTypes) CHECK(parse_migration_type(to_string(t)) == t);
    for (auto r : kAllRelationshipTypes) CHECK(parse_relationship_type(to_string(r)) == r);
    for (auto l : {ApplicabilityLevel::Mandatory, ApplicabilityLevel::Situational,
                   ApplicabilityLevel::Unnecessary}) {
        CHECK(parse_applicability_level(to_string(l)) == l);
    }
    for (auto c : {IssueCode::DanglingRef, IssueCode::MissingMandatory, IssueCode::IllogicalSequence,
                   IssueCode::EmptySelection, IssueCode::KindMismatch, IssueCode::DuplicateId}) {
        CHECK(parse_issue_code(to_string(c)) == c);
    }
    CHECK_FALSE(parse_fragment_kind("task"));
    CHECK_FALSE(parse_migration_type("VI"));
    CHECK(std::size(kAllFragmentKinds) == 5);
    CHECK(std::size(kAllRelationshipTypes) == 5);
}

TEST_CASE("issue codes use the documented spelling") {
    CHECK(to_string(IssueCode::DanglingRef) == "DANGLING_REF");
    CHECK(to_string(IssueCode::MissingMandatory) == "MISSING_MANDATORY");
    CHECK(to_string(IssueCode::IllogicalSequence) == "ILLOGICAL_SEQUENCE");
    CHECK(to_string(IssueCode::EmptySelection) == "EMPTY_SELECTION");
    CHECK(to_string(IssueCode::KindMismatch) == "KIND_MISMATCH");
    CHECK(to_string(IssueCode::DuplicateId) == "DUPLICATE_ID");
}

TEST_CASE("relationship categories") {
    CHECK(category_of(RelationshipType::Uses) == RelationshipCategory::Association);
    CHECK(category_of(RelationshipType::Follows) == RelationshipCategory::Association);
    CHECK(category_of(RelationshipType::Produces) == RelationshipCategory::Association);
    CHECK(category_of(RelationshipType::IsAGroupOf) == RelationshipCategory::Aggregation);
    CHECK(category_of(RelationshipType::IsAKindOf) == RelationshipCategory::Specialization);
}

TEST_CASE("migration type descriptions match the matrix footnote") {
    CHECK(describe(MigrationType::I) ==
          "deploying business logic of a legacy application on cloud via IaaS service delivery model");
    CHECK(describe(MigrationType::II) ==
          "replacing or reengineering legacy components with SaaS delivery model");
    CHECK(describe(MigrationType::III) == "deploying legacy database components on cloud data storages");
    CHECK(describe(MigrationType::IV) ==
          "converting legacy database components to cloud database solutions");
    CHECK(describe(MigrationType::V) ==
          "deploying whole legacy application stack on cloud via IaaS service delivery model");
}

TEST_CASE("slugify") {
    CHECK(slugify("Analyze context") == "analyze-context");
    CHECK(slugify("Choose cloud platform/provider") == "choose-cloud-platform-provider");
    CHECK(slugify("Encrypt/decrypt database") == "encrypt-decrypt-database");
    CHECK(slugify("  Re-factor   codes!! ") == "re-factor-codes");
    CHECK(slugify("***").empty());
    CHECK(slugify("ABC 123") == "abc-123");
}

TEST_CASE("every catalog id is the slug of its name") {
    for (const auto& f : catalog().fragments) CHECK(f.id.str() == slugify(f.name));
}

TEST_CASE("rule ids order numerically by segment") {
    CHECK(rule_id_less("R00", "R01"));
    CHECK(rule_id_less("R01", "R01.1"));
    CHECK(rule_id_less("R01.1", "R04"));
    CHECK(rule_id_less("R04", "R04.3"));
    CHECK(rule_id_less("R04.3", "R05.1"));
    CHECK(rule_id_less("R2", "R10"));
    CHECK_FALSE(rule_id_less("R04", "R04"));
    CHECK_FALSE(rule_id_less("R05.1", "R04.3"));
}

TEST_CASE("fresh instantiations conform") {
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        std::vector<MigrationType> types;
        for (auto t : kAllMigrationTypes) {
            if (rng() % 2) types.push_back(t);
        }
        if (types.empty()) types.push_back(MigrationType::IV);
        std::vector<FragmentId> phases;
        for (const auto& p : catalog().phase_order()) {
            if (rng() % 2) phases.push_back(p);
        }
        if (phases.empty()) phases.push_back(FragmentId("maintain"));
        const auto method = instantiate(catalog(), "m", types, phases);
        CHECK(check_conformance(method, catalog()).empty());
    }
}

TEST_CASE("dangling member is one DANGLING_REF error") {
    auto method = testing::plan_only_v(catalog());
    method.members.push_back({FragmentId("no-such-fragment"), std::nullopt, std::nullopt});
    const auto issues = check_conformance(method, catalog());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].severity == Severity::Error);
    CHECK(issues[0].code == IssueCode::DanglingRef);
    CHECK(issues[0].subjects == ids({"no-such-fragment"}));
}

TEST_CASE("removed mandatory member without waiver") {
    auto method = testing::full_type_ii(catalog());
    std::erase_if(method.members, [](const FragmentInclusion& m) {
        return m.fragment.str() == "isolate-tenant-availability";
    });
    normalize(method, catalog());
    const auto issues = check_conformance(method, catalog());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].severity == Severity::Warning);
    CHECK(issues[0].code == IssueCode::MissingMandatory);
    CHECK(issues[0].subjects == ids({"isolate-tenant-availability"}));

    method.waivers.push_back({FragmentId("isolate-tenant-availability"), "single tenant"});
    CHECK(check_conformance(method, catalog()).empty());
}

TEST_CASE("missing mandatory set equals a scan of the matrix") {
    // Removing every member leaves exactly the mandatory entries of the selected types.
    for (auto t : kAllMigrationTypes) {
        const MigrationType types[] = {t};
        auto method = instantiate(catalog(), "m", types, testing::all_phases(catalog()));
        method.members.clear();
        method.sequences.clear();
        method.technique_bindings.clear();
        normalize(method, catalog());
        std::set<FragmentId> expected;
        for (const auto& e : catalog().applicability) {
            if (e.migration_type == t && e.level == ApplicabilityLevel::Mandatory) {
                expected.insert(e.fragment);
            }
        }
        std::set<FragmentId> reported;
        for (const auto& i : check_conformance(method, catalog())) {
            REQUIRE(i.code == IssueCode::MissingMandatory);
            reported.insert(i.subjects.begin(), i.subjects.end());
        }
        CHECK(reported == expected);
    }
}

TEST_CASE("reversed catalog follows edge is ILLOGICAL_SEQUENCE") {
    auto method = testing::full_type_ii(catalog());
    method.sequences = {{FragmentId("identify-incompatibilities"),
                         FragmentId("choose-cloud-platform-provider")}};
    const auto issues = check_conformance(method, catalog());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].severity == Severity::Warning);
    CHECK(issues[0].code == IssueCode::IllogicalSequence);
}

TEST_CASE("cycles are warnings") {
    auto method = testing::plan_only_v(catalog());
    method.sequences = {{FragmentId("analyze-context"), FragmentId("define-plan")},
                        {FragmentId("define-plan"), FragmentId("analyze-context")}};
    const auto issues = check_conformance(method, catalog());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == IssueCode::IllogicalSequence);
    CHECK(issues[0].severity == Severity::Warning);
}

TEST_CASE("kind and reference errors") {
    auto base = testing::full_type_ii(catalog());

    SUBCASE("technique bound to a work product") {
        auto m = base;
        m.technique_bindings.push_back({FragmentId("cloud-solution-architecture"),
                                        FragmentId("hybrid-scaling")});
        CHECK(has(check_conformance(m, catalog()), IssueCode::KindMismatch,
                  "cloud-solution-architecture"));
    }
    SUBCASE("binding a task to a non-technique") {
        auto m = base;
        m.technique_bindings.push_back({FragmentId("enable-elasticity"), FragmentId("define-plan")});
        CHECK(has(check_conformance(m, catalog()), IssueCode::KindMismatch, "define-plan"));
    }
    SUBCASE("phase as member") {
        auto m = base;
        m.members.push_back({FragmentId("plan"), std::nullopt, std::nullopt});
        CHECK(has(check_conformance(m, catalog()), IssueCode::KindMismatch, "plan"));
    }
    SUBCASE("sequence endpoint not a member") {
        auto m = testing::plan_only_v(catalog());
        m.sequences.push_back({FragmentId("analyze-context"), FragmentId("design-cloud-solution")});
        CHECK(has(check_conformance(m, catalog()), IssueCode::DanglingRef, "design-cloud-solution"));
    }
    SUBCASE("member from an unselected phase") {
        auto m = testing::plan_only_v(catalog());
        m.members.push_back({FragmentId("test-security"), std::nullopt, std::nullopt});
        CHECK(has(check_conformance(m, catalog()), IssueCode::DanglingRef, "test-security"));
    }
    SUBCASE("duplicate member") {
        auto m = base;
        m.members.push_back(m.members.front());
        CHECK(has(check_conformance(m, catalog()), IssueCode::DuplicateId,
                  m.members.front().fragment.str()));
    }
    SUBCASE("user fragment shadowing a catalog id") {
        auto m = base;
        MethodFragment f;
        f.id = FragmentId("define-plan");
        f.name = "Define plan";
        f.phase = FragmentId("plan");
        f.provenance = Provenance::UserDefined;
        m.user_fragments.push_back(f);
        CHECK(has(check_conformance(m, catalog()), IssueCode::DuplicateId, "define-plan"));
    }
    SUBCASE("empty selections") {
        auto m = base;
        m.migration_types.clear();
        m.phases.clear();
        m.members.clear();
        m.sequences.clear();
        m.technique_bindings.clear();
        m.relationships.clear();
        const auto found = codes(check_conformance(m, catalog()));
        CHECK(std::count(found.begin(), found.end(), IssueCode::EmptySelection) == 2);
    }
}

TEST_CASE("issues are ordered by severity, code and subject") {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto method = testing::random_tailored_method(rng, catalog());
        // Corrupt it in a few ways to get a mixed list.
        method.members.push_back({FragmentId("zz-missing"), std::nullopt, std::nullopt});
        method.members.push_back({FragmentId("aa-missing"), std::nullopt, std::nullopt});
        method.sequences.push_back({FragmentId("aa-missing"), FragmentId("zz-missing")});
        if (!method.members.empty()) method.members.erase(method.members.begin());
        const auto issues = check_conformance(method, catalog());
        for (std::size_t j = 1; j < issues.size(); ++j) {
            const auto& a = issues[j - 1];
            const auto& b = issues[j];
            const auto ka = std::make_tuple(a.severity, std::string(to_string(a.code)), a.subjects);
            const auto kb = std::make_tuple(b.severity, std::string(to_string(b.code)), b.subjects);
            CHECK(ka <= kb);
        }
        CHECK(check_conformance(method, catalog()) == issues);
    }
}

TEST_CASE("adding a member never adds MISSING_MANDATORY, removing never clears one") {
    auto count_missing = [](const MethodModel& m) {
        std::set<FragmentId> out;
        for (const auto& i : check_conformance(m, catalog())) {
            if (i.code == IssueCode::MissingMandatory) out.insert(i.subjects.begin(), i.subjects.end());
        }
        return out;
    };
    std::mt19937 rng(9);
    for (int i = 0; i < 100; ++i) {
        auto method = testing::random_tailored_method(rng, catalog());
        const auto before = count_missing(method);
        for (const auto& f : catalog().fragments) {
            if (!f.phase || method.member(f.id)) continue;
            if (std::find(method.phases.begin(), method.phases.end(), *f.phase) == method.phases.end()) continue;
            auto added = method;
            added.members.push_back({f.id, std::nullopt, std::nullopt});
            normalize(added, catalog());
            const auto after = count_missing(added);
            CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
        }
        if (!method.members.empty()) {
            auto removed = method;
            const auto victim = removed.members[rng() % removed.members.size()].fragment;
            std::erase_if(removed.members, [&](const auto& m) { return m.fragment == victim; });
            std::erase_if(removed.sequences, [&](const auto& e) {
                return e.predecessor == victim || e.successor == victim;
            });
            const auto after = count_missing(removed);
            CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
        }
    }
}

TEST_CASE("metamodel validation catches structural faults") {
    auto mm = catalog();
    CHECK(validate_metamodel(mm).empty());

    SUBCASE("self loop") {
        mm.relationships.push_back({RelationshipType::Uses, FragmentId("define-plan"),
                                    FragmentId("define-plan"), KnowledgeSource::M});
        CHECK_FALSE(validate_metamodel(mm).empty());
    }
    SUBCASE("aggregation into a non-phase") {
        mm.relationships.push_back({RelationshipType::IsAGroupOf, FragmentId("analyze-context"),
                                    FragmentId("define-plan"), KnowledgeSource::M});
        CHECK(has(validate_metamodel(mm), IssueCode::KindMismatch, "define-plan"));
    }
    SUBCASE("produces a task") {
        mm.relationships.push_back({RelationshipType::Produces, FragmentId("design-cloud-solution"),
                                    FragmentId("define-plan"), KnowledgeSource::M});
        CHECK(has(validate_metamodel(mm), IssueCode::KindMismatch, "define-plan"));
    }
    SUBCASE("task without phase") {
        mm.fragments[5].phase.reset();
        CHECK(has(validate_metamodel(mm), IssueCode::KindMismatch, mm.fragments[5].id.str()));
    }
    SUBCASE("technique with a phase") {
        auto& f = mm.fragments.back();
        REQUIRE(f.kind == FragmentKind::Technique);
        f.phase = FragmentId("enable");
        CHECK(has(validate_metamodel(mm), IssueCode::KindMismatch, f.id.str()));
    }
    SUBCASE("duplicate applicability") {
        mm.applicability.push_back(mm.applicability.front());
        CHECK(has(validate_metamodel(mm), IssueCode::DuplicateId, mm.applicability.front().fragment.str()));
    }
    SUBCASE("situational without note") {
        for (auto& e : mm.applicability) {
            if (e.level == ApplicabilityLevel::Situational) {
                e.situation_note.reset();
                CHECK_FALSE(validate_metamodel(mm).empty());
                break;
            }
        }
    }
    SUBCASE("parent of another kind") {
        MethodFragment f;
        f.id = FragmentId("child");
        f.name = "Child";
        f.kind = FragmentKind::WorkProduct;
        f.phase = FragmentId("plan");
        f.parent = FragmentId("define-plan");
        mm.fragments.push_back(f);
        CHECK(has(validate_metamodel(mm), IssueCode::KindMismatch, "child"));
    }
}
