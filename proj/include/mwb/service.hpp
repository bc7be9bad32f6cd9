#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "mwb/metamodel.hpp"

namespace mwb {

struct ServiceOptions {
    std::filesystem::path store;
    /// Seeded into an empty store; the store's current metamodel serves the catalog views.
    Metamodel catalog;
    /// Static files served under /app when set.
    std::optional<std::filesystem::path> app_directory;
};

/// HTTP/JSON facade over the workbench. Request handling is concurrent;
/// writes to one method id are serialized.
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds `host:port` (port 0 picks a free one) and returns the bound port,
    /// or -1 on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool run();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mwb
