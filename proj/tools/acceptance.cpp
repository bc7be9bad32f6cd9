// Acceptance runner: one PASS/FAIL line per primary criterion.
// `--emit-exports SEED` prints the exports of 200 random methods and exits;
// the round-trip check runs itself twice that way to compare across processes.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"

#include "mwb/catalog.hpp"
#include "mwb/cli.hpp"
#include "mwb/interchange.hpp"
#include "mwb/repository.hpp"
#include "mwb/service.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mwb;
using Clock = std::chrono::steady_clock;

namespace {

const Metamodel& catalog() { return shipped_catalog(); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::set<std::string> tasks_in_phase(const MethodModel& method, const std::string& phase) {
    std::set<std::string> out;
    for (const auto& m : method.members) {
        const auto* f = resolve(catalog(), method, m.fragment);
        if (f && f->kind == FragmentKind::Task && f->phase && f->phase->str() == phase) {
            out.insert(m.fragment.str());
        }
    }
    return out;
}

std::size_t count_code(const std::vector<ValidationIssue>& issues, IssueCode code) {
    return std::count_if(issues.begin(), issues.end(), [&](const auto& i) { return i.code == code; });
}

// ---- criteria ----

Outcome plan_only_replay() {
    Outcome o;
    const auto start = Clock::now();
    const auto method = testing::plan_only_v(catalog());
    const std::set<std::string> expected = {"analyze-context", "recover-legacy-application-knowledge",
                                            "analyze-migration-requirements", "define-plan"};
    const auto initial = tasks_in_phase(method, "plan");
    o.expect(initial == expected, "task members differ from the four expected");
    const auto extended = replay(method, catalog(), testing::define_plan_extension());
    const auto plan_tasks = tasks_in_phase(extended.method, "plan").size();
    o.expect(plan_tasks == 7, fmt::format("{} Plan tasks after extension, expected 7", plan_tasks));
    const auto errors = count_issues(check_conformance(extended.method, catalog()), Severity::Error);
    o.expect(errors == 0, fmt::format("{} errors", errors));
    const double elapsed = seconds_since(start);
    o.expect(elapsed < 1.0, fmt::format("took {:.3f} s", elapsed));
    o.detail = fmt::format("{} tasks, {} after extension, {} errors, {:.3f} s (< 1 s)", initial.size(), plan_tasks,
                           errors, elapsed);
    return o;
}

Outcome all_phases_replay() {
    Outcome o;
    const auto start = Clock::now();
    const auto method = testing::full_type_ii(catalog());
    int found = 0;
    for (const char* id :
         {"isolate-tenant-availability", "isolate-tenant-customizability", "isolate-tenant-data",
          "isolate-tenant-performance", "handle-transient-faults", "identify-incompatibilities",
          "analyze-business-requirements", "analyze-migration-cost", "analyze-migration-feasibility"}) {
        const bool present = method.member(FragmentId(id)) != nullptr;
        o.expect(present, std::string("missing ") + id);
        found += present;
    }
    std::string first;
    std::string second;
    try {
        const auto bound = replay(method, catalog(), testing::scaling_bindings());
        o.expect(bound.method.technique_bindings.size() == 3, "expected 3 bindings");
        o.expect(count_issues(bound.issues, Severity::Error) == 0, "binding produced errors");
        first = export_xml(bound.method, catalog());
        second = export_xml(import_xml(first, catalog()), catalog());
        o.expect(first == second, "export -> import -> export differs");
    } catch (const Error& e) {
        o.expect(false, std::string("binding failed: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    o.expect(elapsed < 1.0, fmt::format("took {:.3f} s", elapsed));
    o.detail = fmt::format("{}/9 fragments, 3 techniques bound, re-export {} ({} bytes), {:.3f} s (< 1 s)",
                           found, !first.empty() && first == second ? "identical" : "differs", first.size(), elapsed);
    return o;
}

Outcome matrix_fidelity() {
    Outcome o;
    int lookups = 0;
    int matched = 0;
    for (const auto& row : testing::matrix_excerpt()) {
        for (int i = 0; i < 5; ++i) {
            const auto type = kAllMigrationTypes[i];
            const auto got = applicability_of(catalog(), FragmentId(row.id), type);
            const auto level = testing::expected_level(row, i);
            bool ok = got.level == level;
            if (level == ApplicabilityLevel::Situational) {
                ok = ok && got.situation_note && *got.situation_note == row.situation;
            }
            o.expect(ok, fmt::format("{} type {}", row.id, to_string(type)));
            ++lookups;
            matched += ok;
        }
    }
    o.expect(lookups == 55, fmt::format("{} lookups", lookups));
    o.detail = fmt::format("{}/{} lookups exact", matched, lookups);
    return o;
}

Outcome relationship_fidelity() {
    Outcome o;
    // Sub-type to category, as defined for the relationship kinds.
    const std::map<RelationshipType, RelationshipCategory> categories = {
        {RelationshipType::Uses, RelationshipCategory::Association},
        {RelationshipType::Follows, RelationshipCategory::Association},
        {RelationshipType::Produces, RelationshipCategory::Association},
        {RelationshipType::IsAGroupOf, RelationshipCategory::Aggregation},
        {RelationshipType::IsAKindOf, RelationshipCategory::Specialization},
    };
    const auto got = relationship_set(catalog());
    const auto& expected = testing::expected_relationships();
    o.expect(got.size() == 8, fmt::format("{} tuples", got.size()));
    o.expect(std::set(got.begin(), got.end()) == std::set(expected.begin(), expected.end()),
             "tuple set differs");
    for (const auto& r : got) {
        o.expect(category_of(r.type) == categories.at(r.type),
                 fmt::format("category of {}", to_string(r.type)));
    }
    o.detail = fmt::format("{} tuples, types, categories and sources exact", got.size());
    return o;
}

Outcome engine_oracle() {
    Outcome o;
    const auto start = Clock::now();
    int cases = 0;
    int equal = 0;
    for (auto t : kAllMigrationTypes) {
        for (const auto& phases : testing::phase_subsets(catalog())) {
            const std::vector<MigrationType> types = {t};
            const auto method = instantiate(catalog(), "m", types, phases);
            std::set<FragmentId> members;
            for (const auto& m : method.members) members.insert(m.fragment);
            const bool ok = members == testing::brute_force_selection(catalog(), types, phases);
            o.expect(ok, fmt::format("type {} with {} phases", to_string(t), phases.size()));
            ++cases;
            equal += ok;
        }
    }
    const double elapsed = seconds_since(start);
    o.expect(cases == 75, fmt::format("{} cases", cases));
    o.expect(elapsed < 5.0, fmt::format("took {:.3f} s", elapsed));
    o.detail = fmt::format("{}/{} cases equal, {:.3f} s (< 5 s)", equal, cases, elapsed);
    return o;
}

std::string exports_for_seed(unsigned seed) {
    std::mt19937 rng(seed);
    std::string out;
    for (int i = 0; i < 200; ++i) {
        const auto method = testing::random_tailored_method(rng, catalog());
        out += export_xml(method, catalog());
        out += export_method_records(method);
    }
    return out;
}

std::optional<std::string> run_self(const std::string& args) {
    const auto self = std::filesystem::read_symlink("/proc/self/exe");
    const std::string command = "'" + self.string() + "' " + args;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) return std::nullopt;
    std::string out;
    std::array<char, 65536> buffer;
    std::size_t n;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
    if (::pclose(pipe) != 0) return std::nullopt;
    return out;
}

Outcome round_trips() {
    Outcome o;
    constexpr unsigned seed = 20261016;
    std::mt19937 rng(seed);
    testing::TempDir dir;
    auto store = Store::open(dir.path());
    store.ensure_metamodel(catalog());
    int xml_ok = 0;
    int store_ok = 0;
    for (int i = 0; i < 200; ++i) {
        auto method = testing::random_tailored_method(rng, catalog());
        method.id = "m" + std::to_string(i);
        try {
            xml_ok += import_xml(export_xml(method, catalog()), catalog()) == method;
            store.save_method(method);
            store_ok += store.load_method(method.id) == method;
        } catch (const Error& e) {
            o.expect(false, fmt::format("method {}: {}", i, e.what()));
        }
    }
    o.expect(xml_ok == 200, fmt::format("{}/200 XML round-trips", xml_ok));
    o.expect(store_ok == 200, fmt::format("{}/200 store round-trips", store_ok));

    const auto local = exports_for_seed(seed);
    const auto a = run_self(fmt::format("--emit-exports {}", seed));
    const auto b = run_self(fmt::format("--emit-exports {}", seed));
    o.expect(a && b, "could not run the export subprocesses");
    const bool deterministic = a && b && *a == *b && *a == local;
    o.expect(deterministic, "exports differ across runs");
    o.detail = fmt::format("{}/200 XML, {}/200 store, exports identical across 3 processes: {}", xml_ok,
                           store_ok, deterministic ? "yes" : "no");
    return o;
}

struct ServiceRun {
    Service service;
    std::thread thread;
    int port;
    explicit ServiceRun(const std::filesystem::path& store)
        : service(ServiceOptions{store, catalog(), std::nullopt}), port(service.bind("127.0.0.1", 0)) {
        thread = std::thread([this] { service.run(); });
        service.wait_until_ready();
    }
    ~ServiceRun() {
        service.stop();
        thread.join();
    }
};

int cli_code(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o;
    std::ostringstream e;
    const int code = run_cli(args, o, e);
    if (out) *out = o.str();
    return code;
}

Outcome validation_behavior() {
    Outcome o;
    const auto type_ii = testing::full_type_ii(catalog());

    const auto removed = apply(type_ii, catalog(),
                               action::RemoveFragment{FragmentId("isolate-tenant-availability"), std::nullopt});
    const auto missing = count_code(removed.issues, IssueCode::MissingMandatory);
    o.expect(missing == 1 && removed.issues.size() == 1 &&
                 removed.issues[0].severity == Severity::Warning,
             fmt::format("{} issues after removal", removed.issues.size()));

    auto dangling = type_ii;
    dangling.sequences.push_back(SequenceEdge{FragmentId("ghost-task"), FragmentId("define-plan")});
    const auto issues = check_conformance(dangling, catalog());
    const bool dangling_error = count_code(issues, IssueCode::DanglingRef) == 1 &&
                                count_issues(issues, Severity::Error) == 1;
    o.expect(dangling_error, "dangling reference not reported as one DANGLING_REF error");

    testing::TempDir dir;
    bool store_rejects = false;
    {
        auto store = Store::open(dir / "store");
        store.ensure_metamodel(catalog());
        try {
            store.save_method(dangling);
        } catch (const IntegrityError&) {
            store_rejects = !store.has_method(dangling.id);
        }
    }
    o.expect(store_rejects, "store accepted the dangling method");

    // The same document through the service and the CLI.
    auto xml = export_xml(type_ii, catalog());
    xml.insert(xml.find("<edge from="), "<edge from=\"ghost-task\" to=\"define-plan\"/>\n    ");
    testing::write_file(dir / "dangling.xml", xml);
    int status = 0;
    {
        ServiceRun run(dir / "service-store");
        httplib::Client client("127.0.0.1", run.port);
        if (auto res = client.Post("/methods/import", xml, "application/xml")) status = res->status;
    }
    o.expect(status == 409, fmt::format("service answered {}", status));
    const int exit_code =
        cli_code({"--store", (dir / "cli-store").string(), "method", "import", (dir / "dangling.xml").string()});
    o.expect(exit_code == 2, fmt::format("CLI exited {}", exit_code));

    const auto reversed = apply(type_ii, catalog(),
                                action::SetSequence{{SequenceEdge{FragmentId("identify-incompatibilities"),
                                                                  FragmentId("choose-cloud-platform-provider")}}});
    const auto illogical = count_code(reversed.issues, IssueCode::IllogicalSequence);
    o.expect(illogical == 1, fmt::format("{} ILLOGICAL_SEQUENCE", illogical));

    o.detail = fmt::format("{} MISSING_MANDATORY, DANGLING_REF {}, rejected by store/service {}/CLI exit {}, "
                           "{} ILLOGICAL_SEQUENCE",
                           missing, dangling_error ? "error" : "absent", status, exit_code, illogical);
    return o;
}

Outcome cli_goldens() {
    Outcome o;
    const auto golden = std::filesystem::path(MWB_SOURCE_DIR) / "tests" / "golden";
    testing::TempDir dir;
    const auto store = (dir / "store").string();
    int matched = 0;
    auto compare = [&](const std::vector<std::string>& args, const char* file) {
        std::string out;
        const int code = cli_code(args, &out);
        const bool ok = code == 0 && out == testing::read_file(golden / file);
        o.expect(ok, std::string(file) + " differs");
        matched += ok;
    };
    compare({"catalog", "list"}, "catalog_list.txt");
    compare({"--store", store, "method", "create", "--types", "V", "--phases", "plan"}, "method_create_v_plan.txt");
    compare({"--store", store, "method", "validate", "untitled-method"}, "method_validate_fresh.txt");
    o.detail = fmt::format("{}/3 outputs byte-identical", matched);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc == 3 && std::string(argv[1]) == "--emit-exports") {
        std::cout << exports_for_seed(static_cast<unsigned>(std::stoul(argv[2])));
        return 0;
    }
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"plan-only type V replay", plan_only_replay},
        {"type II all-phases replay", all_phases_replay},
        {"applicability matrix fidelity", matrix_fidelity},
        {"relationship fidelity", relationship_fidelity},
        {"rule engine oracle", engine_oracle},
        {"round-trip laws", round_trips},
        {"validation behavior", validation_behavior},
        {"CLI golden files", cli_goldens},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail;
        if (!o.pass) {
            std::cout << " [";
            for (std::size_t i = 0; i < o.failures.size() && i < 5; ++i) {
                std::cout << (i ? "; " : "") << o.failures[i];
            }
            std::cout << "]";
        }
        std::cout << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
