#pragma once

// File-backed tabular store. A store directory holds
//
//   MANIFEST                   store format version, current metamodel
//   Metamodel.records          one group per metamodel version
//   Method.records             one group per method model
//   MethodInstance.records     one group per method instance
//   SupportiveTechniques.records  technique bindings of methods and instances
//
// Every write rewrites the affected tables through a journaled commit, so a
// crash leaves either the old or the new state. See docs/record-format.md.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mwb/metamodel.hpp"

namespace mwb {

inline constexpr std::string_view kStoreFormatVersion = "1";

struct MethodIndexEntry {
    std::string id;
    std::string name;
    std::vector<MigrationType> migration_types;
    std::size_t fragment_count = 0;

    bool operator==(const MethodIndexEntry&) const = default;
};

/// Issues of an instance against its method: unknown tasks or techniques,
/// and choices that bind something other than a Task to a Technique.
std::vector<ValidationIssue> check_instance(const MethodInstance& instance,
                                            const MethodModel& method,
                                            const Metamodel& metamodel);

/// Single writer, many readers, across threads and processes. Readers only
/// ever observe committed states.
class Store {
public:
    /// Opens (creating when absent) the store at `directory` and finishes any
    /// interrupted commit. Throws StorageError, VersionMismatch for another
    /// store format version.
    static Store open(const std::filesystem::path& directory);

    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    ~Store();

    const std::filesystem::path& directory() const;

    /// Adds (or replaces) a metamodel version; the first one becomes current.
    void save_metamodel(const Metamodel& metamodel, bool make_current = false);
    /// Saves `metamodel` unless its version is already stored.
    void ensure_metamodel(const Metamodel& metamodel);
    Metamodel load_metamodel(const std::string& version) const;
    /// Throws NotFound when the store holds no metamodel.
    Metamodel current_metamodel() const;
    std::vector<std::string> metamodel_versions() const;

    /// Throws IntegrityError when the method has Error-severity issues
    /// against its stored metamodel (or that version is not stored), or when
    /// the overwrite would orphan technique choices of a stored instance.
    std::string save_method(const MethodModel& method);
    /// Throws NotFound.
    MethodModel load_method(const std::string& id) const;
    bool has_method(const std::string& id) const;
    /// Sorted by id.
    std::vector<MethodIndexEntry> list_methods() const;

    /// Throws NotFound for an unknown method, IntegrityError for invalid choices.
    std::string save_instance(const MethodInstance& instance);
    MethodInstance load_instance(const std::string& id) const;
    std::vector<std::string> list_instances() const;

private:
    struct Impl;
    explicit Store(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

}  // namespace mwb
