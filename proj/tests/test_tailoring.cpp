#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "mwb/catalog.hpp"
#include "mwb/errors.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"
#include "support.hpp"

using namespace mwb;
using mwb::testing::ids;

namespace {

const Metamodel& catalog() { return shipped_catalog(); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::StorageError;
}

MethodModel run(const MethodModel& m, const TailoringAction& a) { return apply(m, catalog(), a).method; }

FragmentSpec named(std::string name, std::optional<FragmentKind> kind = std::nullopt,
                   std::optional<FragmentId> phase = std::nullopt) {
    FragmentSpec spec;
    spec.name = std::move(name);
    spec.kind = kind;
    spec.phase = std::move(phase);
    spec.definition = "Some text.";
    return spec;
}

std::vector<FragmentId> plan_tasks(const MethodModel& m) {
    std::vector<FragmentId> out;
    for (const auto& member : m.members) {
        const auto* f = resolve(catalog(), m, member.fragment);
        if (f->kind == FragmentKind::Task && f->phase == FragmentId("plan")) out.push_back(f->id);
    }
    return out;
}

MethodModel without_waivers(MethodModel m) {
    m.waivers.clear();
    return m;
}

}  // namespace

TEST_CASE("extending define-plan with three children") {
    const auto base = testing::plan_only_v(catalog());
    const auto actions = testing::define_plan_extension();
    const auto result = replay(base, catalog(), actions);
    CHECK(plan_tasks(result.method).size() == 7);
    CHECK(count_issues(result.issues, Severity::Error) == 0);
    CHECK(result.issues.empty());
    REQUIRE(result.method.user_fragments.size() == 3);
    std::set<std::string> names;
    for (const auto& f : result.method.user_fragments) {
        CHECK(f.provenance == Provenance::UserDefined);
        CHECK(f.parent == FragmentId("define-plan"));
        CHECK(f.kind == FragmentKind::Task);
        CHECK(f.phase == FragmentId("plan"));
        names.insert(f.name);
        // Implicit specialization edge.
        const auto kinds = relationship_set(result.method, RelationshipType::IsAKindOf);
        CHECK(std::find(kinds.begin(), kinds.end(),
                        FragmentRelationship{RelationshipType::IsAKindOf, f.id,
                                             FragmentId("define-plan"), KnowledgeSource::M}) !=
              kinds.end());
    }
    CHECK(names == std::set<std::string>{"Determine application disposition", "Plan migration",
                                         "Define migration road map"});
    CHECK(result.method.user_fragment(FragmentId("plan-migration-u1")));
    CHECK(base == testing::plan_only_v(catalog()));
}

TEST_CASE("binding three scaling techniques") {
    const auto result = replay(testing::full_type_ii(catalog()), catalog(), testing::scaling_bindings());
    CHECK(result.issues.empty());
    std::set<FragmentId> bound;
    for (const auto& b : result.method.technique_bindings) {
        CHECK(b.task == FragmentId("enable-elasticity"));
        bound.insert(b.technique);
    }
    CHECK(bound.size() == 3);
}

TEST_CASE("binding errors") {
    const auto base = testing::full_type_ii(catalog());
    CHECK(code_of([&] {
              run(base, action::BindTechnique{FragmentId("cloud-solution-architecture"),
                                              FragmentId("hybrid-scaling")});
          }) == ErrorCode::KindMismatch);
    CHECK(code_of([&] {
              run(base, action::BindTechnique{FragmentId("enable-elasticity"), FragmentId("define-plan")});
          }) == ErrorCode::KindMismatch);
    CHECK(code_of([&] {
              run(base, action::BindTechnique{FragmentId("enable-elasticity"), FragmentId("nope")});
          }) == ErrorCode::UnknownTarget);
    CHECK(code_of([&] {
              run(base, action::BindTechnique{FragmentId("nope"), FragmentId("hybrid-scaling")});
          }) == ErrorCode::UnknownTarget);
    CHECK(code_of([&] {
              run(base, action::UnbindTechnique{FragmentId("enable-elasticity"),
                                                FragmentId("hybrid-scaling")});
          }) == ErrorCode::UnknownTarget);
}

TEST_CASE("bind then unbind is the identity") {
    const auto base = testing::full_type_ii(catalog());
    const auto bound = run(base, action::BindTechnique{FragmentId("enable-elasticity"),
                                                       FragmentId("hybrid-scaling")});
    CHECK(bound != base);
    CHECK(run(bound, action::UnbindTechnique{FragmentId("enable-elasticity"),
                                             FragmentId("hybrid-scaling")}) == base);
    // Binding twice keeps one binding.
    const auto twice = run(bound, action::BindTechnique{FragmentId("enable-elasticity"),
                                                        FragmentId("hybrid-scaling")});
    CHECK(twice.technique_bindings.size() == 1);
}

TEST_CASE("removing members") {
    const auto base = testing::full_type_ii(catalog());

    SUBCASE("unknown id") {
        CHECK(code_of([&] { run(base, action::RemoveFragment{FragmentId("nope"), std::nullopt}); }) ==
              ErrorCode::UnknownTarget);
    }
    SUBCASE("mandatory without waiver: exactly one warning") {
        const auto r = apply(base, catalog(),
                             action::RemoveFragment{FragmentId("isolate-tenant-availability"), std::nullopt});
        REQUIRE(r.issues.size() == 1);
        CHECK(r.issues[0].code == IssueCode::MissingMandatory);
        CHECK(r.issues[0].severity == Severity::Warning);
        CHECK(r.issues[0].subjects == ids({"isolate-tenant-availability"}));
        CHECK_FALSE(r.method.member(FragmentId("isolate-tenant-availability")));
    }
    SUBCASE("mandatory with waiver") {
        const auto r = apply(base, catalog(),
                             action::RemoveFragment{FragmentId("isolate-tenant-availability"),
                                                    std::string("Single tenant deployment")});
        CHECK(r.issues.empty());
        REQUIRE(r.method.waivers.size() == 1);
        CHECK(r.method.waivers[0].justification == "Single tenant deployment");
    }
    SUBCASE("removal drops sequences and bindings") {
        auto m = replay(base, catalog(), testing::scaling_bindings()).method;
        m = run(m, action::RemoveFragment{FragmentId("enable-elasticity"), std::nullopt});
        CHECK(m.technique_bindings.empty());
        m = run(m, action::RemoveFragment{FragmentId("identify-incompatibilities"), std::nullopt});
        CHECK(m.sequences.empty());
    }
    SUBCASE("removing a parent member keeps its children valid") {
        auto m = replay(testing::plan_only_v(catalog()), catalog(), testing::define_plan_extension()).method;
        m = run(m, action::RemoveFragment{FragmentId("define-plan"), std::nullopt});
        CHECK(m.user_fragments.size() == 3);
        CHECK(count_issues(check_conformance(m, catalog()), Severity::Error) == 0);
    }
}

TEST_CASE("each mandatory removal yields one warning naming it") {
    const auto base = testing::full_type_ii(catalog());
    for (const auto& e : catalog().applicability) {
        if (e.migration_type != MigrationType::II || e.level != ApplicabilityLevel::Mandatory) continue;
        const auto r = apply(base, catalog(), action::RemoveFragment{e.fragment, std::nullopt});
        REQUIRE(r.issues.size() == 1);
        CHECK(r.issues[0].code == IssueCode::MissingMandatory);
        CHECK(r.issues[0].subjects == std::vector<FragmentId>{e.fragment});
    }
}

TEST_CASE("reversing the catalog follows edge warns") {
    const auto base = testing::full_type_ii(catalog());
    const auto r = apply(base, catalog(),
                         action::SetSequence{{{FragmentId("identify-incompatibilities"),
                                               FragmentId("choose-cloud-platform-provider")}}});
    // Oracle: reversed catalog Follows pairs among the new edges.
    std::size_t reversed = 0;
    for (const auto& rel : relationship_set(catalog(), RelationshipType::Follows)) {
        for (const auto& e : r.method.sequences) {
            if (e.predecessor == rel.target && e.successor == rel.source) ++reversed;
        }
    }
    REQUIRE(reversed == 1);
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].code == IssueCode::IllogicalSequence);
    CHECK(r.issues[0].severity == Severity::Warning);
}

TEST_CASE("sequence edits") {
    const auto base = testing::plan_only_v(catalog());
    const std::vector<SequenceEdge> edges = {{FragmentId("analyze-context"), FragmentId("define-plan")},
                                             {FragmentId("analyze-context"),
                                              FragmentId("analyze-migration-requirements")}};
    const auto m = run(base, action::SetSequence{edges});
    CHECK(m.sequences == edges);
    CHECK(run(m, action::SetSequence{}).sequences.empty());
    CHECK(code_of([&] {
              run(base, action::SetSequence{{{FragmentId("analyze-context"), FragmentId("test-security")}}});
          }) == ErrorCode::UnknownTarget);
}

TEST_CASE("adding fragments") {
    const auto base = testing::plan_only_v(catalog());

    SUBCASE("user task gets a generated id") {
        const auto m = run(base, action::AddFragment{named("Assess licences", FragmentKind::Task,
                                                           FragmentId("plan"))});
        REQUIRE(m.user_fragment(FragmentId("assess-licences-u1")));
        CHECK(m.member(FragmentId("assess-licences-u1")));
        const auto m2 = run(m, action::AddFragment{named("Assess licences", FragmentKind::Task,
                                                         FragmentId("plan"))});
        CHECK(m2.user_fragment(FragmentId("assess-licences-u2")));
    }
    SUBCASE("user technique is not a member") {
        const auto m = run(base, action::AddFragment{named("Chaos testing", FragmentKind::Technique)});
        REQUIRE(m.user_fragment(FragmentId("chaos-testing-u1")));
        CHECK_FALSE(m.member(FragmentId("chaos-testing-u1")));
        const auto bound = run(m, action::BindTechnique{FragmentId("define-plan"),
                                                        FragmentId("chaos-testing-u1")});
        CHECK(bound.technique_bindings.size() == 1);
    }
    SUBCASE("explicit id") {
        FragmentSpec spec = named("X", FragmentKind::Principle, FragmentId("plan"));
        spec.id = FragmentId("my-principle");
        const auto m = run(base, action::AddFragment{spec});
        CHECK(m.member(FragmentId("my-principle")));
        CHECK(code_of([&] { run(m, action::AddFragment{spec}); }) == ErrorCode::DuplicateId);
        spec.id = FragmentId("define-plan");
        CHECK(code_of([&] { run(base, action::AddFragment{spec}); }) == ErrorCode::DuplicateId);
    }
    SUBCASE("re-including a catalog fragment") {
        FragmentSpec spec;
        spec.id = FragmentId("define-plan");
        CHECK(code_of([&] { run(base, action::AddFragment{spec}); }) == ErrorCode::DuplicateId);
        spec.id = FragmentId("analyze-migration-cost");
        const auto m = run(base, action::AddFragment{spec});
        CHECK(m.member(FragmentId("analyze-migration-cost")));
        spec.id = FragmentId("test-security");
        CHECK(code_of([&] { run(base, action::AddFragment{spec}); }) == ErrorCode::UnknownTarget);
        spec.id = FragmentId("hybrid-scaling");
        CHECK(code_of([&] { run(base, action::AddFragment{spec}); }) == ErrorCode::KindMismatch);
    }
    SUBCASE("invalid specs") {
        CHECK(code_of([&] { run(base, action::AddFragment{named("P", FragmentKind::Phase)}); }) ==
              ErrorCode::KindMismatch);
        CHECK(code_of([&] { run(base, action::AddFragment{named("T", FragmentKind::Task)}); }) ==
              ErrorCode::KindMismatch);
        CHECK(code_of([&] {
                  run(base, action::AddFragment{named("T", FragmentKind::Technique, FragmentId("plan"))});
              }) == ErrorCode::KindMismatch);
        CHECK(code_of([&] {
                  run(base, action::AddFragment{named("T", FragmentKind::Task, FragmentId("enable"))});
              }) == ErrorCode::UnknownTarget);
        CHECK(code_of([&] {
                  run(base, action::AddFragment{named("T", FragmentKind::Task, FragmentId("define-plan"))});
              }) == ErrorCode::KindMismatch);
        CHECK(code_of([&] { run(base, action::AddFragment{named("", FragmentKind::Task)}); }) ==
              ErrorCode::ParseError);
    }
}

TEST_CASE("extension errors") {
    const auto base = testing::plan_only_v(catalog());
    CHECK(code_of([&] { run(base, action::ExtendFragment{FragmentId("nope"), named("C")}); }) ==
          ErrorCode::UnknownTarget);
    CHECK(code_of([&] { run(base, action::ExtendFragment{FragmentId("plan"), named("C")}); }) ==
          ErrorCode::KindMismatch);
    CHECK(code_of([&] {
              run(base, action::ExtendFragment{FragmentId("define-plan"), named("C", FragmentKind::WorkProduct)});
          }) == ErrorCode::KindMismatch);
    CHECK(code_of([&] {
              run(base, action::ExtendFragment{FragmentId("test-security"), named("C")});
          }) == ErrorCode::UnknownTarget);
    // Techniques extend into techniques, outside the member list.
    const auto m = run(base, action::ExtendFragment{FragmentId("hybrid-scaling"), named("Scheduled scaling")});
    const auto* f = m.user_fragment(FragmentId("scheduled-scaling-u1"));
    REQUIRE(f);
    CHECK(f->kind == FragmentKind::Technique);
    CHECK_FALSE(m.member(f->id));
    // Extending a user fragment.
    auto ext = replay(base, catalog(), testing::define_plan_extension()).method;
    ext = run(ext, action::ExtendFragment{FragmentId("plan-migration-u1"), named("Plan cut-over")});
    CHECK(ext.user_fragment(FragmentId("plan-cut-over-u1"))->parent == FragmentId("plan-migration-u1"));
}

TEST_CASE("definition overrides") {
    const auto base = testing::plan_only_v(catalog());
    const auto m = run(base, action::EditDefinition{FragmentId("define-plan"), "Write the plan."});
    CHECK(m.member(FragmentId("define-plan"))->definition_override == "Write the plan.");
    CHECK(catalog().find(FragmentId("define-plan"))->definition == "Define plan.");
    const auto back = run(m, action::EditDefinition{FragmentId("define-plan"), "Define plan."});
    CHECK(back == base);
    CHECK(code_of([&] { run(base, action::EditDefinition{FragmentId("test-security"), "x"}); }) ==
          ErrorCode::UnknownTarget);
    auto ext = replay(base, catalog(), testing::define_plan_extension()).method;
    ext = run(ext, action::EditDefinition{FragmentId("plan-migration-u1"), "Changed."});
    CHECK(ext.user_fragment(FragmentId("plan-migration-u1"))->definition == "Changed.");
}

TEST_CASE("version mismatch") {
    auto m = testing::plan_only_v(catalog());
    m.metamodel_version = "0";
    CHECK(code_of([&] { run(m, action::SetSequence{}); }) == ErrorCode::VersionMismatch);
}

TEST_CASE("add then remove restores the method") {
    std::mt19937 rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto base = testing::random_tailored_method(rng, catalog());
        auto action = testing::random_action(rng, catalog(), base);
        if (!std::holds_alternative<action::AddFragment>(action)) continue;
        TailoringResult added;
        try {
            added = apply(base, catalog(), action);
        } catch (const Error&) {
            continue;
        }
        // The new fragment is whatever appeared.
        std::optional<FragmentId> fresh;
        for (const auto& f : added.method.user_fragments) {
            if (!base.user_fragment(f.id)) fresh = f.id;
        }
        for (const auto& m : added.method.members) {
            if (!base.member(m.fragment)) fresh = m.fragment;
        }
        REQUIRE(fresh);
        const auto removed = run(added.method, action::RemoveFragment{*fresh, std::nullopt});
        CHECK(without_waivers(removed) == without_waivers(base));
    }
}

TEST_CASE("issues always equal a fresh conformance check") {
    std::mt19937 rng(37);
    for (int i = 0; i < 100; ++i) {
        auto method = testing::random_tailored_method(rng, catalog(), 4);
        for (int j = 0; j < 10; ++j) {
            const auto action = testing::random_action(rng, catalog(), method);
            const auto before = method;
            std::optional<MethodModel> next;
            try {
                const auto r = apply(method, catalog(), action);
                CHECK(r.issues == check_conformance(r.method, catalog()));
                CHECK(count_issues(r.issues, Severity::Error) == 0);
                next = r.method;
            } catch (const Error&) {
            }
            CHECK(before == method);  // apply never mutates its input
            if (next) method = *next;
        }
    }
}

TEST_CASE("replay") {
    const auto base = testing::plan_only_v(catalog());

    SUBCASE("empty script") {
        const auto r = replay(base, catalog(), {});
        CHECK(r.method == base);
        CHECK(r.issues == check_conformance(base, catalog()));
    }
    SUBCASE("failure is all-or-nothing and reports the index") {
        auto actions = testing::define_plan_extension();
        actions.insert(actions.begin() + 2, action::RemoveFragment{FragmentId("nope"), std::nullopt});
        const auto copy = base;
        try {
            replay(base, catalog(), actions);
            FAIL("expected ReplayError");
        } catch (const ReplayError& e) {
            CHECK(e.index() == 2);
            CHECK(e.cause() == ErrorCode::UnknownTarget);
            CHECK(e.code() == ErrorCode::UnknownTarget);
            CHECK(std::string(e.what()).rfind("action 2: ", 0) == 0);
        }
        CHECK(base == copy);
    }
    SUBCASE("replay equals a left fold of apply") {
        std::mt19937 rng(41);
        for (int i = 0; i < 50; ++i) {
            std::vector<TailoringAction> actions;
            auto folded = testing::random_tailored_method(rng, catalog(), 3);
            const auto start = folded;
            for (int j = 0; j < 6; ++j) {
                const auto a = testing::random_action(rng, catalog(), folded);
                try {
                    folded = apply(folded, catalog(), a).method;
                    actions.push_back(a);
                } catch (const Error&) {
                }
            }
            CHECK(replay(start, catalog(), actions).method == folded);
        }
    }
}

TEST_CASE("scripts round-trip") {
    std::mt19937 rng(43);
    for (int i = 0; i < 100; ++i) {
        const auto method = testing::random_tailored_method(rng, catalog(), 4);
        std::vector<TailoringAction> actions;
        for (int j = 0; j < 8; ++j) actions.push_back(testing::random_action(rng, catalog(), method));
        const auto text = write_script(actions);
        CHECK(parse_script(text) == actions);
        CHECK(write_script(parse_script(text)) == text);
    }
}

TEST_CASE("script parsing is strict") {
    const auto ok = "format-version: 1\n\n[action]\nop: SetSequence\nedge: a -> b\nedge: b -> c\n";
    const auto actions = parse_script(ok);
    REQUIRE(actions.size() == 1);
    CHECK(std::get<action::SetSequence>(actions[0]).edges.size() == 2);
    for (const char* bad : {
             "[action]\nop: SetSequence\n",
             "format-version: 2\n[action]\nop: SetSequence\n",
             "format-version: 1\n[action]\nop: Teleport\n",
             "format-version: 1\n[action]\nop: SetSequence\nedge: a b\n",
             "format-version: 1\n[action]\nop: RemoveFragment\n",
             "format-version: 1\n[action]\nop: RemoveFragment\nid: x\ntask: y\n",
             "format-version: 1\n[action]\nop: AddFragment\nname: x\nkind: Stage\n",
             "format-version: 1\n[step]\nop: SetSequence\n",
         }) {
        CAPTURE(bad);
        CHECK(code_of([&] { parse_script(bad); }) == ErrorCode::ParseError);
    }
}

TEST_CASE("action names") {
    CHECK(action_name(action::SetSequence{}) == "SetSequence");
    CHECK(action_name(action::EditDefinition{}) == "EditDefinition");
}
