#pragma once

// Shared fixtures for the test executables.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mwb/catalog.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"

namespace mwb::testing {

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::vector<FragmentId> ids(std::initializer_list<const char*> names);
std::vector<FragmentId> all_phases(const Metamodel& metamodel);

/// Type V, Plan only.
MethodModel plan_only_v(const Metamodel& metamodel);
/// The three children added under define-plan.
std::vector<TailoringAction> define_plan_extension();
/// Type II over every phase.
MethodModel full_type_ii(const Metamodel& metamodel);
/// The three scaling techniques bound to enable-elasticity.
std::vector<TailoringAction> scaling_bindings();

/// Text exercising every escaping path of both formats.
std::string random_text(std::mt19937& rng, bool allow_empty = true);

/// A method produced by instantiation and a random sequence of successful
/// tailoring actions, never carrying Error-severity issues.
MethodModel random_tailored_method(std::mt19937& rng, const Metamodel& metamodel,
                                   int max_actions = 12);

/// A random action that may or may not apply to `method`.
TailoringAction random_action(std::mt19937& rng, const Metamodel& metamodel,
                              const MethodModel& method);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mwb::testing
