#include "mwb/repository.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "mwb/catalog.hpp"
#include "mwb/errors.hpp"
#include "mwb/interchange.hpp"
#include "mwb/records.hpp"

namespace fs = std::filesystem;

namespace mwb {

namespace {

constexpr const char* kManifest = "MANIFEST";
constexpr const char* kMetamodelTable = "Metamodel.records";
constexpr const char* kMethodTable = "Method.records";
constexpr const char* kInstanceTable = "MethodInstance.records";
constexpr const char* kTechniqueTable = "SupportiveTechniques.records";
constexpr const char* kJournal = "COMMIT";
constexpr const char* kLockFile = "LOCK";
constexpr const char* kTmpSuffix = ".tmp";

const char* const kTables[] = {kManifest, kMetamodelTable, kMethodTable, kInstanceTable,
                               kTechniqueTable};

[[noreturn]] void storage_error(const std::string& message) {
    throw Error(ErrorCode::StorageError, message);
}

[[noreturn]] void io_error(const std::string& what, const fs::path& path) {
    storage_error(what + " " + path.string() + ": " + std::strerror(errno));
}

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!fs::exists(path)) return std::nullopt;
        io_error("cannot read", path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_durably(const fs::path& path, const std::string& content) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) io_error("cannot create", path);
    const char* data = content.data();
    std::size_t left = content.size();
    while (left > 0) {
        const auto n = ::write(fd, data, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            io_error("cannot write", path);
        }
        data += n;
        left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        io_error("cannot sync", path);
    }
    ::close(fd);
}

void sync_directory(const fs::path& directory) {
    const int fd = ::open(directory.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (fd >= 0) {
        ::fsync(fd);
        ::close(fd);
    }
}

// Each acquisition opens its own descriptor: flock state belongs to the open
// file description, so sharing one across threads would let them unlock each other.
class FileLock {
public:
    FileLock(const fs::path& path, int mode)
        : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
        if (fd_ < 0) io_error("cannot open", path);
        while (::flock(fd_, mode) != 0) {
            if (errno != EINTR) {
                ::close(fd_);
                io_error("cannot lock", path);
            }
        }
    }
    ~FileLock() { ::close(fd_); }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_;
};

struct State {
    std::map<std::string, Metamodel> metamodels;
    std::optional<std::string> current;
    std::map<std::string, MethodModel> methods;
    std::map<std::string, MethodInstance> instances;
};

std::vector<records::Schema> metamodel_table_schemas() {
    std::vector<records::Schema> out = {{"metamodel", {"version"}, {}, {}}};
    out.insert(out.end(), kCatalogSchemas.begin(), kCatalogSchemas.end());
    return out;
}

const std::vector<records::Schema> kTechniqueSchemas = {
    {"binding", {"owner-kind", "owner", "task", "technique"}, {}, {}},
};

records::Document table_document(std::string_view name) {
    records::Document document;
    document.header = {{"format-version", std::string(records::kFormatVersion)},
                       {"table", std::string(name)}};
    return document;
}

records::Document parse_table(const std::string& text, std::string_view name,
                              std::span<const records::Schema> schemas) {
    try {
        auto document = records::parse(text);
        const std::vector<std::string> header = {"format-version", "table"};
        records::check(document, schemas, header);
        if (document.header_value("table") != std::string(name)) {
            storage_error(std::string(name) + " has a wrong table header");
        }
        return document;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StorageError) throw;
        storage_error(std::string(name) + " is corrupt: " + e.what());
    }
}

std::map<std::string, std::string> serialize(const State& state) {
    std::map<std::string, std::string> files;

    records::Document manifest;
    manifest.header = {{"format-version", std::string(records::kFormatVersion)},
                       {"store-format-version", std::string(kStoreFormatVersion)}};
    if (state.current) manifest.header.push_back({"current-metamodel", *state.current});
    files[kManifest] = records::write(manifest);

    auto metamodels = table_document("Metamodel");
    for (const auto& [version, metamodel] : state.metamodels) {
        records::Record head("metamodel");
        head.add("version", version);
        metamodels.records.push_back(std::move(head));
        auto body = metamodel_records(metamodel);
        metamodels.records.insert(metamodels.records.end(), body.begin(), body.end());
    }
    files[kMetamodelTable] = records::write(metamodels);

    auto methods = table_document("Method");
    auto techniques = table_document("SupportiveTechniques");
    auto add_binding = [&](std::string_view kind, const std::string& owner,
                           const TechniqueBinding& binding) {
        records::Record record("binding");
        record.add("owner-kind", std::string(kind))
            .add("owner", owner)
            .add("task", binding.task.str())
            .add("technique", binding.technique.str());
        techniques.records.push_back(std::move(record));
    };
    for (const auto& [id, method] : state.methods) {
        auto body = method_records(method, false);
        methods.records.insert(methods.records.end(), body.begin(), body.end());
        for (const auto& binding : method.technique_bindings) add_binding("method", id, binding);
    }
    files[kMethodTable] = records::write(methods);

    auto instances = table_document("MethodInstance");
    for (const auto& [id, instance] : state.instances) {
        auto body = instance_records(instance, false);
        instances.records.insert(instances.records.end(), body.begin(), body.end());
        for (const auto& binding : instance.chosen_techniques) add_binding("instance", id, binding);
    }
    files[kInstanceTable] = records::write(instances);
    files[kTechniqueTable] = records::write(techniques);
    return files;
}

State deserialize(const fs::path& directory) {
    State state;
    const auto manifest_text = read_file(directory / kManifest);
    if (!manifest_text) storage_error("store has no MANIFEST: " + directory.string());
    try {
        const auto manifest = records::parse(*manifest_text);
        const std::vector<std::string> header = {"format-version", "store-format-version",
                                                 "current-metamodel"};
        records::check(manifest, {}, header);
        state.current = manifest.header_value("current-metamodel");
    } catch (const Error& e) {
        storage_error(std::string("MANIFEST is corrupt: ") + e.what());
    }

    auto load = [&](const char* file, std::string_view name,
                    std::span<const records::Schema> schemas) -> std::optional<records::Document> {
        auto text = read_file(directory / file);
        if (!text) return std::nullopt;
        return parse_table(*text, name, schemas);
    };

    try {
        const auto mm_schemas = metamodel_table_schemas();
        if (auto document = load(kMetamodelTable, "Metamodel", mm_schemas)) {
            for (auto group : group_records(document->records, "metamodel")) {
                const auto& version = group.front().require("version");
                std::vector<records::Record> body(group.begin() + 1, group.end());
                state.metamodels.emplace(version, metamodel_from_records(version, body));
            }
        }
        if (auto document = load(kMethodTable, "Method", kMethodSchemas)) {
            for (auto group : group_records(document->records, "method")) {
                auto method = method_from_records(group);
                state.methods.emplace(method.id, std::move(method));
            }
        }
        if (auto document = load(kInstanceTable, "MethodInstance", kMethodSchemas)) {
            for (auto group : group_records(document->records, "instance")) {
                auto instance = instance_from_records(group);
                state.instances.emplace(instance.id, std::move(instance));
            }
        }
        if (auto document = load(kTechniqueTable, "SupportiveTechniques", kTechniqueSchemas)) {
            for (const auto& record : document->records) {
                const auto& kind = record.require("owner-kind");
                const auto& owner = record.require("owner");
                TechniqueBinding binding{FragmentId(record.require("task")),
                                         FragmentId(record.require("technique"))};
                if (kind == "method" && state.methods.contains(owner)) {
                    state.methods[owner].technique_bindings.push_back(binding);
                } else if (kind == "instance" && state.instances.contains(owner)) {
                    state.instances[owner].chosen_techniques.push_back(binding);
                } else {
                    storage_error("SupportiveTechniques references unknown " + kind + " '" +
                                  owner + "'");
                }
            }
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StorageError) throw;
        storage_error(std::string("store is corrupt: ") + e.what());
    }
    return state;
}

ValidationIssue issue(IssueCode code, std::string message, std::vector<FragmentId> subjects = {}) {
    return ValidationIssue{Severity::Error, code, std::move(message), std::move(subjects)};
}

}  // namespace

std::vector<ValidationIssue> check_instance(const MethodInstance& instance,
                                            const MethodModel& method,
                                            const Metamodel& metamodel) {
    std::vector<ValidationIssue> issues;
    if (instance.method != method.id) {
        issues.push_back(issue(IssueCode::DanglingRef, "instance '" + instance.id +
                                                           "' does not enact method '" +
                                                           method.id + "'"));
    }
    for (const auto& choice : instance.chosen_techniques) {
        const auto* task = resolve(metamodel, method, choice.task);
        if (task == nullptr || method.member(choice.task) == nullptr) {
            issues.push_back(issue(IssueCode::DanglingRef,
                                   "chosen task '" + choice.task.str() + "' is not a member",
                                   {choice.task}));
        } else if (task->kind != FragmentKind::Task) {
            issues.push_back(issue(IssueCode::KindMismatch,
                                   "'" + choice.task.str() + "' is not a Task", {choice.task}));
        }
        const auto* technique = resolve(metamodel, method, choice.technique);
        if (technique == nullptr) {
            issues.push_back(issue(IssueCode::DanglingRef,
                                   "unknown technique '" + choice.technique.str() + "'",
                                   {choice.technique}));
        } else if (technique->kind != FragmentKind::Technique) {
            issues.push_back(issue(IssueCode::KindMismatch,
                                   "'" + choice.technique.str() + "' is not a Technique",
                                   {choice.technique}));
        }
        const auto& bound = method.technique_bindings;
        if (std::find(bound.begin(), bound.end(), choice) == bound.end()) {
            issues.push_back(issue(IssueCode::DanglingRef,
                                   "'" + choice.technique.str() + "' is not bound to '" +
                                       choice.task.str() + "' in the method",
                                   {choice.task, choice.technique}));
        }
    }
    sort_issues(issues);
    return issues;
}

struct Store::Impl {
    fs::path directory;
    fs::path lock_path;

    // Finishes a commit whose journal survived a crash, or discards the
    // temporaries of one that never reached its journal. Needs the exclusive lock.
    void recover() const {
        const auto journal = read_file(directory / kJournal);
        if (journal) {
            std::istringstream lines(*journal);
            std::string name;
            while (std::getline(lines, name)) {
                if (name.empty()) continue;
                const auto tmp = directory / (name + kTmpSuffix);
                if (fs::exists(tmp)) fs::rename(tmp, directory / name);
            }
            sync_directory(directory);
            fs::remove(directory / kJournal);
        }
        for (const auto* name : kTables) {
            fs::remove(directory / (std::string(name) + kTmpSuffix));
        }
    }

    bool needs_recovery() const { return fs::exists(directory / kJournal); }

    void commit(const State& state) const {
        const auto files = serialize(state);
        std::string journal;
        for (const auto& [name, content] : files) {
            if (read_file(directory / name) == content) continue;
            write_durably(directory / (name + kTmpSuffix), content);
            journal += name + "\n";
        }
        if (journal.empty()) return;
        write_durably(directory / (std::string(kJournal) + kTmpSuffix), journal);
        fs::rename(directory / (std::string(kJournal) + kTmpSuffix), directory / kJournal);
        sync_directory(directory);
        recover();
    }

    State read() const {
        {
            FileLock lock(lock_path, LOCK_SH);
            if (!needs_recovery()) return deserialize(directory);
        }
        FileLock lock(lock_path, LOCK_EX);
        recover();
        return deserialize(directory);
    }

    template <typename Mutation>
    auto write(Mutation&& mutation) {
        FileLock lock(lock_path, LOCK_EX);
        recover();
        auto state = deserialize(directory);
        auto result = mutation(state);
        commit(state);
        return result;
    }
};

Store::Store(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&&) noexcept = default;
Store::~Store() = default;

Store Store::open(const fs::path& directory) {
    auto impl = std::make_unique<Impl>();
    impl->directory = directory;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) storage_error("cannot create store " + directory.string() + ": " + ec.message());
    impl->lock_path = directory / kLockFile;

    FileLock lock(impl->lock_path, LOCK_EX);
    impl->recover();
    const auto manifest = read_file(directory / kManifest);
    if (!manifest) {
        impl->commit(State{});
    } else {
        std::optional<std::string> version;
        try {
            version = records::parse(*manifest).header_value("store-format-version");
        } catch (const Error& e) {
            storage_error(std::string("MANIFEST is corrupt: ") + e.what());
        }
        if (version != std::string(kStoreFormatVersion)) {
            throw Error(ErrorCode::VersionMismatch,
                        "store format version '" + version.value_or("") + "' is not supported",
                        {version.value_or("")});
        }
    }
    return Store(std::move(impl));
}

const fs::path& Store::directory() const { return impl_->directory; }

void Store::save_metamodel(const Metamodel& metamodel, bool make_current) {
    if (auto issues = validate_metamodel(metamodel); !issues.empty()) {
        throw IntegrityError(std::move(issues));
    }
    impl_->write([&](State& state) {
        if (auto it = state.metamodels.find(metamodel.version);
            it != state.metamodels.end() && it->second != metamodel) {
            for (const auto& [id, method] : state.methods) {
                if (method.metamodel_version != metamodel.version) continue;
                auto issues = check_conformance(method, metamodel);
                if (count_issues(issues, Severity::Error) > 0) throw IntegrityError(std::move(issues));
            }
        }
        state.metamodels[metamodel.version] = metamodel;
        if (make_current || !state.current) state.current = metamodel.version;
        return 0;
    });
}

void Store::ensure_metamodel(const Metamodel& metamodel) {
    const auto versions = metamodel_versions();
    if (std::find(versions.begin(), versions.end(), metamodel.version) == versions.end()) {
        save_metamodel(metamodel);
    }
}

Metamodel Store::load_metamodel(const std::string& version) const {
    auto state = impl_->read();
    auto it = state.metamodels.find(version);
    if (it == state.metamodels.end()) {
        throw Error(ErrorCode::NotFound, "metamodel version '" + version + "' is not stored",
                    {version});
    }
    return it->second;
}

Metamodel Store::current_metamodel() const {
    auto state = impl_->read();
    if (!state.current || !state.metamodels.contains(*state.current)) {
        throw Error(ErrorCode::NotFound, "store holds no current metamodel");
    }
    return state.metamodels.at(*state.current);
}

std::vector<std::string> Store::metamodel_versions() const {
    std::vector<std::string> out;
    for (const auto& [version, metamodel] : impl_->read().metamodels) out.push_back(version);
    return out;
}

std::string Store::save_method(const MethodModel& method) {
    return impl_->write([&](State& state) {
        if (method.id.empty()) {
            throw IntegrityError({issue(IssueCode::DanglingRef, "method id is empty")});
        }
        auto mm = state.metamodels.find(method.metamodel_version);
        if (mm == state.metamodels.end()) {
            throw IntegrityError({issue(IssueCode::DanglingRef,
                                        "metamodel version '" + method.metamodel_version +
                                            "' is not stored")});
        }
        auto issues = check_conformance(method, mm->second);
        if (count_issues(issues, Severity::Error) > 0) throw IntegrityError(std::move(issues));
        for (const auto& [id, instance] : state.instances) {
            if (instance.method != method.id) continue;
            auto orphaned = check_instance(instance, method, mm->second);
            if (!orphaned.empty()) throw IntegrityError(std::move(orphaned));
        }
        state.methods[method.id] = method;
        return method.id;
    });
}

MethodModel Store::load_method(const std::string& id) const {
    auto state = impl_->read();
    auto it = state.methods.find(id);
    if (it == state.methods.end()) {
        throw Error(ErrorCode::NotFound, "no method '" + id + "'", {id});
    }
    return it->second;
}

bool Store::has_method(const std::string& id) const {
    return impl_->read().methods.contains(id);
}

std::vector<MethodIndexEntry> Store::list_methods() const {
    std::vector<MethodIndexEntry> out;
    for (const auto& [id, method] : impl_->read().methods) {
        out.push_back(MethodIndexEntry{id, method.name, method.migration_types, method.members.size()});
    }
    return out;
}

std::string Store::save_instance(const MethodInstance& instance) {
    return impl_->write([&](State& state) {
        if (instance.id.empty()) {
            throw IntegrityError({issue(IssueCode::DanglingRef, "instance id is empty")});
        }
        auto method = state.methods.find(instance.method);
        if (method == state.methods.end()) {
            throw Error(ErrorCode::NotFound, "no method '" + instance.method + "'",
                        {instance.method});
        }
        const auto& metamodel = state.metamodels.at(method->second.metamodel_version);
        auto issues = check_instance(instance, method->second, metamodel);
        if (!issues.empty()) throw IntegrityError(std::move(issues));
        auto stored = instance;
        auto& choices = stored.chosen_techniques;
        std::sort(choices.begin(), choices.end());
        choices.erase(std::unique(choices.begin(), choices.end()), choices.end());
        state.instances[stored.id] = std::move(stored);
        return instance.id;
    });
}

MethodInstance Store::load_instance(const std::string& id) const {
    auto state = impl_->read();
    auto it = state.instances.find(id);
    if (it == state.instances.end()) {
        throw Error(ErrorCode::NotFound, "no instance '" + id + "'", {id});
    }
    return it->second;
}

std::vector<std::string> Store::list_instances() const {
    std::vector<std::string> out;
    for (const auto& [id, instance] : impl_->read().instances) out.push_back(id);
    return out;
}

}  // namespace mwb
