#include "mwb/service.hpp"

#include <map>
#include <mutex>

#include "httplib.h"

#include "mwb/catalog.hpp"
#include "mwb/interchange.hpp"
#include "mwb/json_codec.hpp"
#include "mwb/repository.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"

namespace mwb {

namespace {

using httplib::Request;
using httplib::Response;
using Json = nlohmann::json;

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::EmptySelection:
        case ErrorCode::UnknownPhase:
        case ErrorCode::UnknownFragment:
            return 400;
        case ErrorCode::NotFound:
            return 404;
        case ErrorCode::IntegrityError:
        case ErrorCode::VersionMismatch:
        case ErrorCode::DuplicateId:
            return 409;
        case ErrorCode::UnknownTarget:
        case ErrorCode::KindMismatch:
            return 422;
        case ErrorCode::StorageError:
            return 500;
    }
    return 500;
}

void send(Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, int status, const Error& e) { send(res, status, json::error(e)); }

// Raised by the action route so that any failure of apply() becomes a 422.
struct ActionFailure {
    Error error;
};

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const Request& req, Response& res) {
        try {
            handler(req, res);
        } catch (const ActionFailure& failure) {
            send_error(res, 422, failure.error);
        } catch (const Error& e) {
            send_error(res, status_for(e.code()), e);
        } catch (const std::exception& e) {
            send_error(res, 500, Error(ErrorCode::StorageError, e.what()));
        }
    };
}

bool truthy(const Request& req, const std::string& key) {
    if (!req.has_param(key)) return false;
    const auto value = req.get_param_value(key);
    return value.empty() || value == "true" || value == "1";
}

}  // namespace

struct Service::Impl {
    httplib::Server server;
    Store store;
    std::mutex locks_mutex;
    std::map<std::string, std::shared_ptr<std::mutex>> method_locks;

    explicit Impl(const ServiceOptions& options) : store(Store::open(options.store)) {
        store.ensure_metamodel(options.catalog);
        if (options.app_directory) {
            server.set_mount_point("/app", options.app_directory->string());
        }
        routes();
    }

    std::shared_ptr<std::mutex> lock_for(const std::string& id) {
        std::lock_guard guard(locks_mutex);
        auto& slot = method_locks[id];
        if (!slot) slot = std::make_shared<std::mutex>();
        return slot;
    }

    Json method_response(const MethodModel& method, const Metamodel& metamodel) {
        return {{"method", json::method(method, metamodel)},
                {"issues", json::issues(check_conformance(method, metamodel))}};
    }

    // Saves unless the id is taken (and `replace` is off). The caller holds the method lock.
    void save_new(const MethodModel& method, bool replace) {
        if (!replace && store.has_method(method.id)) {
            throw Error(ErrorCode::DuplicateId, "method '" + method.id + "' already exists",
                        {method.id});
        }
        store.save_method(method);
    }

    void routes() {
        server.Get("/catalog/fragments", guarded([this](const Request& req, Response& res) {
            const auto catalog = store.current_metamodel();
            std::optional<FragmentKind> kind;
            if (req.has_param("kind")) {
                kind = parse_fragment_kind(req.get_param_value("kind"));
                if (!kind) {
                    throw Error(ErrorCode::ParseError,
                                "invalid kind '" + req.get_param_value("kind") + "'");
                }
            }
            std::optional<FragmentId> phase;
            if (req.has_param("phase")) phase = FragmentId(req.get_param_value("phase"));
            std::vector<const MethodFragment*> selected;
            for (const auto& f : catalog.fragments) {
                if (kind && f.kind != *kind) continue;
                if (phase && f.phase != phase) continue;
                selected.push_back(&f);
            }
            std::sort(selected.begin(), selected.end(),
                      [](const auto* a, const auto* b) { return a->id < b->id; });
            Json out = Json::array();
            for (const auto* f : selected) out.push_back(json::fragment(*f));
            send(res, 200, out);
        }));

        server.Get(R"(/catalog/fragments/([^/]+))", guarded([this](const Request& req, Response& res) {
            const auto catalog = store.current_metamodel();
            const FragmentId id(req.matches[1].str());
            const auto* f = catalog.find(id);
            if (f == nullptr) {
                throw Error(ErrorCode::NotFound, "no fragment '" + id.str() + "'", {id.str()});
            }
            send(res, 200, json::fragment_detail(catalog, *f));
        }));

        server.Get("/catalog/relationships", guarded([this](const Request& req, Response& res) {
            const auto catalog = store.current_metamodel();
            std::optional<RelationshipType> type;
            if (req.has_param("type")) {
                type = parse_relationship_type(req.get_param_value("type"));
                if (!type) {
                    throw Error(ErrorCode::ParseError,
                                "invalid relationship type '" + req.get_param_value("type") + "'");
                }
            }
            Json out = Json::array();
            for (const auto& r : relationship_set(catalog, type)) out.push_back(json::relationship(r));
            send(res, 200, out);
        }));

        server.Get("/catalog/rules", guarded([this](const Request&, Response& res) {
            Json out = Json::array();
            for (const auto& r : list_rules(store.current_metamodel())) out.push_back(json::rule(r));
            send(res, 200, out);
        }));

        server.Post("/methods", guarded([this](const Request& req, Response& res) {
            const auto request = json::create_request_from_json(json::parse(req.body));
            const auto catalog = store.current_metamodel();
            auto method = instantiate(catalog, request.name, request.migration_types,
                                      request.phases, request.description);
            auto lock = lock_for(method.id);
            std::lock_guard guard(*lock);
            save_new(method, truthy(req, "replace"));
            send(res, 201, method_response(method, catalog));
        }));

        server.Get("/methods", guarded([this](const Request&, Response& res) {
            Json out = Json::array();
            for (const auto& entry : store.list_methods()) out.push_back(json::index_entry(entry));
            send(res, 200, out);
        }));

        server.Post("/methods/import", guarded([this](const Request& req, Response& res) {
            const auto catalog = store.current_metamodel();
            auto method = import_xml(req.body, catalog, truthy(req, "force"));
            auto lock = lock_for(method.id);
            std::lock_guard guard(*lock);
            save_new(method, truthy(req, "replace"));
            send(res, 201, method_response(method, catalog));
        }));

        server.Get(R"(/methods/([^/]+))", guarded([this](const Request& req, Response& res) {
            const auto method = store.load_method(req.matches[1].str());
            send(res, 200, method_response(method, store.load_metamodel(method.metamodel_version)));
        }));

        server.Post(R"(/methods/([^/]+)/actions)", guarded([this](const Request& req, Response& res) {
            const auto action = json::action_from_json(json::parse(req.body));
            const auto id = req.matches[1].str();
            auto lock = lock_for(id);
            std::lock_guard guard(*lock);
            const auto method = store.load_method(id);
            const auto metamodel = store.load_metamodel(method.metamodel_version);
            TailoringResult result;
            try {
                result = apply(method, metamodel, action);
            } catch (const Error& e) {
                throw ActionFailure{e};
            }
            store.save_method(result.method);
            send(res, 200, {{"method", json::method(result.method, metamodel)},
                            {"issues", json::issues(result.issues)}});
        }));

        server.Post(R"(/methods/([^/]+)/validate)", guarded([this](const Request& req, Response& res) {
            const auto method = store.load_method(req.matches[1].str());
            const auto issues = check_conformance(method, store.load_metamodel(method.metamodel_version));
            send(res, 200, {{"issues", json::issues(issues)},
                            {"errors", count_issues(issues, Severity::Error)},
                            {"warnings", count_issues(issues, Severity::Warning)}});
        }));

        server.Get(R"(/methods/([^/]+)/export\.xml)", guarded([this](const Request& req, Response& res) {
            const auto method = store.load_method(req.matches[1].str());
            res.status = 200;
            res.set_content(export_xml(method, store.load_metamodel(method.metamodel_version)),
                            "application/xml; charset=utf-8");
        }));

        server.Post(R"(/methods/([^/]+)/instances)", guarded([this](const Request& req, Response& res) {
            const auto request = json::instance_request_from_json(json::parse(req.body));
            const auto method_id = req.matches[1].str();
            auto lock = lock_for(method_id);
            std::lock_guard guard(*lock);
            store.load_method(method_id);  // 404 before anything else
            MethodInstance instance;
            instance.method = method_id;
            instance.chosen_techniques = request.chosen_techniques;
            instance.enactment_notes = request.enactment_notes;
            const auto existing = store.list_instances();
            if (request.id) {
                if (std::find(existing.begin(), existing.end(), *request.id) != existing.end() &&
                    !truthy(req, "replace")) {
                    throw Error(ErrorCode::DuplicateId,
                                "instance '" + *request.id + "' already exists", {*request.id});
                }
                instance.id = *request.id;
            } else {
                for (int n = 1;; ++n) {
                    instance.id = method_id + "-i" + std::to_string(n);
                    if (std::find(existing.begin(), existing.end(), instance.id) == existing.end()) break;
                }
            }
            store.save_instance(instance);
            send(res, 201, json::instance(store.load_instance(instance.id)));
        }));

        server.Get(R"(/methods/([^/]+)/instances/([^/]+))",
                   guarded([this](const Request& req, Response& res) {
                       auto instance = store.load_instance(req.matches[2].str());
                       if (instance.method != req.matches[1].str()) {
                           throw Error(ErrorCode::NotFound,
                                       "no instance '" + instance.id + "' for this method",
                                       {instance.id});
                       }
                       send(res, 200, json::instance(instance));
                   }));
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(options)) {}
Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mwb
