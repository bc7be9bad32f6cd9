#include "support.hpp"

#include <fstream>
#include <sstream>

#include <unistd.h>

namespace mwb::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
    std::string pattern = (fs::temp_directory_path() / "mwb-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::vector<FragmentId> ids(std::initializer_list<const char*> names) {
    std::vector<FragmentId> out;
    for (const auto* name : names) out.emplace_back(name);
    return out;
}

std::vector<FragmentId> all_phases(const Metamodel& metamodel) { return metamodel.phase_order(); }

MethodModel plan_only_v(const Metamodel& metamodel) {
    const MigrationType types[] = {MigrationType::V};
    return instantiate(metamodel, "Plant control migration", types, ids({"plan"}));
}

std::vector<TailoringAction> define_plan_extension() {
    std::vector<TailoringAction> out;
    for (const char* name :
         {"Determine application disposition", "Plan migration", "Define migration road map"}) {
        out.push_back(action::ExtendFragment{
            FragmentId("define-plan"), FragmentSpec{std::nullopt, name, std::nullopt, std::nullopt,
                                                    std::string(name) + "."}});
    }
    return out;
}

MethodModel full_type_ii(const Metamodel& metamodel) {
    const MigrationType types[] = {MigrationType::II};
    return instantiate(metamodel, "Telemetry service migration", types, all_phases(metamodel));
}

std::vector<TailoringAction> scaling_bindings() {
    std::vector<TailoringAction> out;
    for (const char* technique : {"reactive-scaling", "proactive-scaling", "hybrid-scaling"}) {
        out.push_back(action::BindTechnique{FragmentId("enable-elasticity"), FragmentId(technique)});
    }
    return out;
}

std::string random_text(std::mt19937& rng, bool allow_empty) {
    static const std::vector<std::string> pieces = {
        "plain words", "a & b", "<tag attr=\"x\">", "\"quoted\"", "it's", "line\nbreak",
        "tab\there", "cr\rhere", "crlf\r\nend", "back\\slash", "colon: value", "# hash",
        "[bracket]", "  padded  ", " ", "\n", "ünïcödé", "→ arrow",
        "]]>", "&amp; literal", "x", "trailing space ",
    };
    std::uniform_int_distribution<int> count(allow_empty ? 0 : 1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string out;
    for (int n = count(rng); n > 0; --n) out += pieces[pick(rng)];
    return out;
}

namespace {

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& items) {
    std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
    return items[d(rng)];
}

bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string random_name(std::mt19937& rng) {
    static const std::vector<std::string> words = {"Assess", "Migrate", "Review", "Tune",
                                                   "Audit", "Refine", "Port", "Check"};
    return pick(rng, words) + " " + random_text(rng, true);
}

}  // namespace

TailoringAction random_action(std::mt19937& rng, const Metamodel& metamodel,
                              const MethodModel& method) {
    std::vector<FragmentId> members;
    for (const auto& m : method.members) members.push_back(m.fragment);
    std::vector<FragmentId> techniques;
    for (const auto& f : metamodel.fragments) {
        if (f.kind == FragmentKind::Technique) techniques.push_back(f.id);
    }
    for (const auto& f : method.user_fragments) {
        if (f.kind == FragmentKind::Technique) techniques.push_back(f.id);
    }
    std::vector<FragmentId> absent_catalog;
    for (const auto& f : metamodel.fragments) {
        if (f.phase && method.member(f.id) == nullptr) absent_catalog.push_back(f.id);
    }
    const std::vector<FragmentKind> kinds = {FragmentKind::Task, FragmentKind::WorkProduct,
                                             FragmentKind::Principle, FragmentKind::Technique};
    auto any_member = [&] { return members.empty() ? FragmentId("missing") : pick(rng, members); };

    switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
        case 0: {
            if (!absent_catalog.empty() && chance(rng, 0.3)) {
                FragmentSpec spec;
                spec.id = pick(rng, absent_catalog);
                return action::AddFragment{spec};
            }
            FragmentSpec spec;
            spec.name = random_name(rng);
            spec.kind = pick(rng, kinds);
            if (*spec.kind != FragmentKind::Technique) spec.phase = pick(rng, method.phases);
            spec.definition = random_text(rng);
            if (chance(rng, 0.2)) spec.id = FragmentId("custom-" + std::to_string(rng() % 50));
            return action::AddFragment{spec};
        }
        case 1: {
            FragmentSpec child;
            child.name = random_name(rng);
            child.definition = random_text(rng);
            return action::ExtendFragment{any_member(), child};
        }
        case 2: {
            std::optional<std::string> waiver;
            if (chance(rng, 0.5)) waiver = random_text(rng, false);
            return action::RemoveFragment{any_member(), waiver};
        }
        case 3: {
            action::SetSequence sequence;
            if (!members.empty()) {
                for (int n = std::uniform_int_distribution<int>(0, 4)(rng); n > 0; --n) {
                    sequence.edges.push_back(SequenceEdge{pick(rng, members), pick(rng, members)});
                }
            }
            return sequence;
        }
        case 4:
            return action::BindTechnique{any_member(), pick(rng, techniques)};
        case 5:
            if (!method.technique_bindings.empty() && chance(rng, 0.8)) {
                const auto& b = pick(rng, method.technique_bindings);
                return action::UnbindTechnique{b.task, b.technique};
            }
            return action::UnbindTechnique{any_member(), pick(rng, techniques)};
        case 6: {
            const auto id = any_member();
            const auto* catalog = metamodel.find(id);
            if (catalog != nullptr && chance(rng, 0.3)) {
                return action::EditDefinition{id, catalog->definition};
            }
            return action::EditDefinition{id, random_text(rng)};
        }
        default: {
            if (!members.empty() && chance(rng, 0.5)) {
                return action::RemoveFragment{any_member(), std::nullopt};
            }
            return action::EditDefinition{FragmentId("no-such-fragment"), "x"};
        }
    }
}

MethodModel random_tailored_method(std::mt19937& rng, const Metamodel& metamodel,
                                   int max_actions) {
    std::vector<MigrationType> types;
    while (types.empty()) {
        for (auto t : kAllMigrationTypes) {
            if (chance(rng, 0.4)) types.push_back(t);
        }
    }
    std::vector<FragmentId> phases;
    while (phases.empty()) {
        for (const auto& p : metamodel.phase_order()) {
            if (chance(rng, 0.5)) phases.push_back(p);
        }
    }
    auto method = instantiate(metamodel, "Method " + std::to_string(rng() % 100000) + " " +
                                             random_text(rng),
                              types, phases, random_text(rng));
    const int steps = std::uniform_int_distribution<int>(0, max_actions)(rng);
    for (int i = 0; i < steps; ++i) {
        const auto action = random_action(rng, metamodel, method);
        try {
            auto result = apply(method, metamodel, action);
            if (count_issues(result.issues, Severity::Error) == 0) method = std::move(result.method);
        } catch (const Error&) {
            // Rejected actions leave the method as it was.
        }
    }
    return method;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace mwb::testing
