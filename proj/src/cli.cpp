#include "mwb/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "mwb/catalog.hpp"
#include "mwb/errors.hpp"
#include "mwb/interchange.hpp"
#include "mwb/repository.hpp"
#include "mwb/service.hpp"
#include "mwb/tailoring.hpp"
#include "mwb/transform.hpp"

namespace mwb {

namespace {

constexpr const char* kDefaultStore = ".mwb-store";

using Row = std::vector<std::string>;

// Left-aligned columns separated by two spaces; no trailing blanks.
void print_table(std::ostream& out, const Row& header, const std::vector<Row>& rows) {
    std::vector<std::size_t> widths(header.size(), 0);
    auto measure = [&](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    };
    measure(header);
    for (const auto& row : rows) measure(row);
    auto line = [&](const Row& row) {
        std::string text;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i + 1 == row.size()) {
                text += row[i];
            } else {
                text += fmt::format("{:<{}}  ", row[i], widths[i]);
            }
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

std::string plural(std::size_t n, std::string_view word) {
    return fmt::format("{} {}{}", n, word, n == 1 ? "" : "s");
}

std::string join(const std::vector<std::string>& items, std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += separator;
        out += items[i];
    }
    return out;
}

std::string type_names(const std::vector<MigrationType>& types) {
    std::vector<std::string> names;
    for (auto t : types) names.emplace_back(to_string(t));
    return join(names, ",");
}

std::string id_names(const std::vector<FragmentId>& ids) {
    std::vector<std::string> names;
    for (const auto& id : ids) names.push_back(id.str());
    return join(names, ",");
}

std::string one_line(std::string_view text) {
    std::string out(text);
    std::replace(out.begin(), out.end(), '\n', ' ');
    return out;
}

std::vector<MigrationType> parse_types_option(const std::string& text) {
    std::vector<MigrationType> out;
    for (const auto& item : records::split_list(text)) {
        auto type = parse_migration_type(item);
        if (!type) throw Error(ErrorCode::ParseError, "invalid migration type '" + item + "'");
        out.push_back(*type);
    }
    return out;
}

std::vector<FragmentId> parse_ids_option(const std::string& text) {
    std::vector<FragmentId> out;
    for (auto& item : records::split_list(text)) out.emplace_back(std::move(item));
    return out;
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read '" + path + "'", {path});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) {
        throw Error(ErrorCode::StorageError, "cannot write '" + path + "'", {path});
    }
}

bool looks_like_xml(std::string_view text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    return start != std::string_view::npos && text[start] == '<';
}

void print_issues(std::ostream& out, const std::vector<ValidationIssue>& issues) {
    for (const auto& issue : issues) {
        std::string subjects;
        if (!issue.subjects.empty()) subjects = " (" + id_names(issue.subjects) + ")";
        out << fmt::format("{}[{}]: {}{}\n",
                           issue.severity == Severity::Error ? "error" : "warning",
                           to_string(issue.code), issue.message, subjects);
    }
    out << plural(count_issues(issues, Severity::Error), "error") << ", "
        << plural(count_issues(issues, Severity::Warning), "warning") << '\n';
}

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err, const CliEnvironment& environment)
        : out_(out), err_(err), environment_(environment) {}

    int run(const std::vector<std::string>& args);

private:
    // ---- shared state ----

    const Metamodel& catalog() {
        if (!catalog_) {
            catalog_ = catalog_path_.empty() ? shipped_catalog()
                                             : load_catalog(read_text(catalog_path_));
        }
        return *catalog_;
    }

    std::string store_path() const {
        if (!store_path_.empty()) return store_path_;
        return environment_.default_store.value_or(kDefaultStore);
    }

    Store& store() {
        if (!store_) {
            store_.emplace(Store::open(store_path()));
            store_->ensure_metamodel(catalog());
        }
        return *store_;
    }

    struct Source {
        MethodModel method;
        Metamodel metamodel;
        std::optional<std::string> file;
        bool xml = false;
    };

    // <id|FILE>: an existing file is read as XML or records, anything else is a store id.
    Source load_source(const std::string& reference) {
        if (reference != "-" && !std::filesystem::is_regular_file(reference)) {
            auto method = store().load_method(reference);
            auto metamodel = store().load_metamodel(method.metamodel_version);
            return Source{std::move(method), std::move(metamodel), std::nullopt, false};
        }
        const auto text = read_text(reference);
        if (looks_like_xml(text)) {
            return Source{import_xml(text, catalog(), force_), catalog(), reference, true};
        }
        auto method = import_method_records(text);
        if (method.metamodel_version != catalog().version) {
            throw Error(ErrorCode::VersionMismatch,
                        "'" + reference + "' targets metamodel version '" +
                            method.metamodel_version + "'",
                        {method.metamodel_version});
        }
        return Source{std::move(method), catalog(), reference, false};
    }

    void write_method_file(const std::string& path, const MethodModel& method,
                           const Metamodel& metamodel) {
        const bool xml = path.size() >= 4 && path.compare(path.size() - 4, 4, ".xml") == 0;
        write_text(path, xml ? export_xml(method, metamodel) : export_method_records(method), out_);
    }

    // ---- output ----

    void show_method(const MethodModel& method, const Metamodel& metamodel) {
        if (format_ == "records") {
            out_ << export_method_records(method);
            return;
        }
        out_ << fmt::format("method {} \"{}\"\n", method.id, method.name);
        if (!method.description.empty()) out_ << "description: " << one_line(method.description) << '\n';
        out_ << "migration types: " << type_names(method.migration_types) << '\n';
        out_ << "phases: " << id_names(method.phases) << '\n';
        out_ << "metamodel version: " << method.metamodel_version << "\n\n";

        std::vector<Row> rows;
        for (const auto& inclusion : method.members) {
            const auto* f = resolve(metamodel, method, inclusion.fragment);
            Row row{f && f->phase ? f->phase->str() : "?", inclusion.fragment.str(),
                    f ? std::string(to_string(f->kind)) : "?",
                    f ? std::string(to_string(f->provenance)) : "?"};
            std::string note = inclusion.note ? one_line(*inclusion.note) : "-";
            if (inclusion.definition_override) note = "(definition overridden) " + note;
            if (f && f->parent) note = "extends " + f->parent->str() + "; " + note;
            row.push_back(note);
            rows.push_back(std::move(row));
        }
        print_table(out_, {"PHASE", "ID", "KIND", "PROVENANCE", "NOTE"}, rows);

        if (!method.sequences.empty()) {
            out_ << "\nsequences:\n";
            for (const auto& e : method.sequences) {
                out_ << "  " << e.predecessor.str() << " -> " << e.successor.str() << '\n';
            }
        }
        if (!method.technique_bindings.empty()) {
            out_ << "\ntechniques:\n";
            for (const auto& b : method.technique_bindings) {
                out_ << "  " << b.task.str() << ": " << b.technique.str() << '\n';
            }
        }
        if (!method.waivers.empty()) {
            out_ << "\nwaived:\n";
            for (const auto& w : method.waivers) {
                out_ << "  " << w.fragment.str() << ": " << one_line(w.justification) << '\n';
            }
        }
        out_ << '\n'
             << plural(method.members.size(), "member") << ", "
             << plural(method.relationships.size(), "relationship") << ", "
             << plural(method.sequences.size(), "sequence") << '\n';
    }

    // Returns the exit code for a set of issues.
    int report(const std::vector<ValidationIssue>& issues) {
        if (format_ != "records") print_issues(out_, issues);
        return count_issues(issues, Severity::Error) > 0 ? 2 : 0;
    }

    // ---- commands ----

    int catalog_list() {
        std::optional<FragmentKind> kind;
        if (!kind_filter_.empty()) {
            kind = parse_fragment_kind(kind_filter_);
            if (!kind) throw Error(ErrorCode::ParseError, "invalid kind '" + kind_filter_ + "'");
        }
        std::vector<const MethodFragment*> selected;
        for (const auto& f : catalog().fragments) {
            if (kind && f.kind != *kind) continue;
            if (!phase_filter_.empty() && (!f.phase || f.phase->str() != phase_filter_)) continue;
            selected.push_back(&f);
        }
        std::sort(selected.begin(), selected.end(),
                  [](const auto* a, const auto* b) { return a->id < b->id; });
        if (format_ == "records") {
            records::Document document;
            document.header.push_back({"format-version", std::string(records::kFormatVersion)});
            for (const auto* f : selected) document.records.push_back(fragment_record(*f));
            out_ << records::write(document);
            return 0;
        }
        std::vector<Row> rows;
        for (const auto* f : selected) {
            rows.push_back({f->id.str(), std::string(to_string(f->kind)),
                            f->phase ? f->phase->str() : "-", f->name});
        }
        print_table(out_, {"ID", "KIND", "PHASE", "NAME"}, rows);
        return 0;
    }

    int catalog_show() {
        const auto& mm = catalog();
        const auto* f = mm.find(FragmentId(fragment_arg_));
        if (f == nullptr) {
            throw Error(ErrorCode::UnknownFragment, "unknown fragment '" + fragment_arg_ + "'",
                        {fragment_arg_});
        }
        if (format_ == "records") {
            records::Document document;
            document.header.push_back({"format-version", std::string(records::kFormatVersion)});
            document.records.push_back(fragment_record(*f));
            out_ << records::write(document);
            return 0;
        }
        out_ << "id: " << f->id.str() << '\n'
             << "name: " << f->name << '\n'
             << "kind: " << to_string(f->kind) << '\n'
             << "phase: " << (f->phase ? f->phase->str() : "-") << '\n'
             << "provenance: " << to_string(f->provenance) << '\n'
             << "definition: " << one_line(f->definition) << "\n\n";
        if (f->phase) {
            std::vector<Row> rows;
            for (auto type : kAllMigrationTypes) {
                const auto a = applicability_of(mm, f->id, type);
                rows.push_back({std::string(to_string(type)), std::string(to_string(a.level)),
                                a.situation_note ? one_line(*a.situation_note) : "-"});
            }
            print_table(out_, {"TYPE", "LEVEL", "NOTE"}, rows);
        }
        std::vector<std::string> lines;
        for (const auto& r : relationship_set(mm)) {
            if (r.source == f->id || r.target == f->id) {
                lines.push_back(fmt::format("  {} {} -> {} ({})", to_string(r.type), r.source.str(),
                                            r.target.str(), to_string(r.knowledge_source)));
            }
        }
        if (!lines.empty()) out_ << "\nrelationships:\n" << join(lines, "\n") << '\n';
        lines.clear();
        for (const auto& s : mm.techniques) {
            if (s.task == f->id) lines.push_back("  " + s.technique.str());
            if (s.technique == f->id) lines.push_back("  suggested for " + s.task.str());
        }
        if (!lines.empty()) out_ << "\ntechniques:\n" << join(lines, "\n") << '\n';
        return 0;
    }

    int method_create() {
        auto method = instantiate(catalog(), name_, parse_types_option(types_),
                                  parse_ids_option(phases_), description_);
        if (!out_path_.empty()) {
            write_method_file(out_path_, method, catalog());
        } else {
            if (!replace_ && store().has_method(method.id)) {
                throw Error(ErrorCode::DuplicateId,
                            "method '" + method.id + "' already exists (use --replace)",
                            {method.id});
            }
            store().save_method(method);
        }
        show_method(method, catalog());
        return report(check_conformance(method, catalog()));
    }

    int method_show() {
        auto source = load_source(method_arg_);
        show_method(source.method, source.metamodel);
        return 0;
    }

    int method_list() {
        std::vector<Row> rows;
        for (const auto& entry : store().list_methods()) {
            rows.push_back({entry.id, type_names(entry.migration_types),
                            std::to_string(entry.fragment_count), entry.name});
        }
        print_table(out_, {"ID", "TYPES", "MEMBERS", "NAME"}, rows);
        return 0;
    }

    int method_tailor() {
        auto source = load_source(method_arg_);
        const auto actions = parse_script(read_text(script_path_));
        auto result = replay(source.method, source.metamodel, actions);
        const bool has_errors = count_issues(result.issues, Severity::Error) > 0;
        if (!out_path_.empty()) {
            if (!has_errors) write_method_file(out_path_, result.method, source.metamodel);
        } else if (source.file) {
            if (!has_errors) write_method_file(*source.file, result.method, source.metamodel);
        } else if (!has_errors) {
            store().save_method(result.method);
        }
        out_ << "applied " << plural(actions.size(), "action") << " to " << result.method.id << '\n';
        if (has_errors) out_ << "not saved: the result has errors\n";
        return report(result.issues);
    }

    int method_validate() {
        auto source = load_source(method_arg_);
        return report(check_conformance(source.method, source.metamodel));
    }

    int method_export() {
        auto source = load_source(method_arg_);
        if (xml_path_.empty() == records_path_.empty()) {
            throw Error(ErrorCode::ParseError, "give exactly one of --xml FILE or --records FILE");
        }
        if (!xml_path_.empty()) {
            write_text(xml_path_, export_xml(source.method, source.metamodel), out_);
        } else {
            write_text(records_path_, export_method_records(source.method), out_);
        }
        return 0;
    }

    int method_import() {
        const auto text = read_text(file_arg_);
        const auto metamodel = store().current_metamodel();
        auto method = looks_like_xml(text) ? import_xml(text, metamodel, force_)
                                           : import_method_records(text);
        if (!replace_ && store().has_method(method.id)) {
            throw Error(ErrorCode::DuplicateId,
                        "method '" + method.id + "' already exists (use --replace)", {method.id});
        }
        store().save_method(method);
        out_ << "imported method " << method.id << '\n';
        return report(check_conformance(method, store().load_metamodel(method.metamodel_version)));
    }

    int instance_create() {
        const auto method = store().load_method(method_arg_);
        MethodInstance instance;
        instance.method = method.id;
        instance.enactment_notes = notes_;
        for (const auto& choice : choices_) {
            const auto eq = choice.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorCode::ParseError, "--choose expects TASK=TECHNIQUE");
            }
            instance.chosen_techniques.push_back(
                TechniqueBinding{FragmentId(choice.substr(0, eq)), FragmentId(choice.substr(eq + 1))});
        }
        const auto existing = store().list_instances();
        if (!instance_id_.empty()) {
            instance.id = instance_id_;
        } else {
            for (int n = 1;; ++n) {
                instance.id = method.id + "-i" + std::to_string(n);
                if (std::find(existing.begin(), existing.end(), instance.id) == existing.end()) break;
            }
        }
        store().save_instance(instance);
        out_ << "saved instance " << instance.id << " of " << method.id << '\n';
        return 0;
    }

    int instance_show() {
        const auto instance = store().load_instance(instance_id_);
        out_ << "instance " << instance.id << " of " << instance.method << '\n';
        if (!instance.enactment_notes.empty()) {
            out_ << "notes: " << one_line(instance.enactment_notes) << '\n';
        }
        for (const auto& b : instance.chosen_techniques) {
            out_ << "  " << b.task.str() << ": " << b.technique.str() << '\n';
        }
        return 0;
    }

    int rules_list() {
        for (const auto& rule : list_rules(catalog())) {
            out_ << fmt::format("{}  {}  {}\n", rule.id, to_string(rule.action), rule.name);
            out_ << "    " << one_line(rule.meaning) << '\n';
        }
        return 0;
    }

    int rules_explain() {
        const auto e = explain_inclusion(catalog(), parse_types_option(types_), FragmentId(fragment_arg_));
        std::vector<Row> rows;
        for (const auto& t : e.per_type) {
            rows.push_back({std::string(to_string(t.migration_type)), std::string(to_string(t.level)),
                            t.situation_note ? one_line(*t.situation_note) : "-"});
        }
        out_ << "fragment: " << e.fragment.str() << '\n';
        print_table(out_, {"TYPE", "LEVEL", "NOTE"}, rows);
        out_ << "governing rule: " << e.governing_rule.value_or("none") << '\n';
        out_ << "annotation: " << (e.note ? one_line(*e.note) : "-") << '\n';
        return 0;
    }

    int serve() {
        const auto colon = addr_.rfind(':');
        if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "--addr expects HOST:PORT");
        const auto host = addr_.substr(0, colon);
        int port = 0;
        try {
            port = std::stoi(addr_.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "invalid port in '" + addr_ + "'");
        }
        ServiceOptions options{store_path(), catalog(), std::nullopt};
        if (!app_dir_.empty()) options.app_directory = app_dir_;
        Service service(std::move(options));
        const int bound = service.bind(host, port);
        if (bound < 0) throw Error(ErrorCode::StorageError, "cannot listen on " + addr_);
        out_ << "listening on http://" << host << ':' << bound << std::endl;
        return service.run() ? 0 : 1;
    }

    std::ostream& out_;
    std::ostream& err_;
    const CliEnvironment& environment_;

    std::optional<Metamodel> catalog_;
    std::optional<Store> store_;

    std::string store_path_;
    std::string catalog_path_;
    std::string format_ = "table";
    std::string kind_filter_;
    std::string phase_filter_;
    std::string fragment_arg_;
    std::string method_arg_;
    std::string file_arg_;
    std::string name_ = "Untitled method";
    std::string description_;
    std::string types_;
    std::string phases_;
    std::string out_path_;
    std::string script_path_;
    std::string xml_path_;
    std::string records_path_;
    std::string instance_id_;
    std::string notes_;
    std::vector<std::string> choices_;
    std::string addr_ = "127.0.0.1:8080";
    std::string app_dir_;
    bool replace_ = false;
    bool force_ = false;
};

int Cli::run(const std::vector<std::string>& args) {
    CLI::App app{"Method engineering workbench", "mwb"};
    app.require_subcommand(1);
    app.fallthrough();  // --store and --catalog also work after the subcommand
    app.add_option("--store", store_path_, "Store directory (default: $MWB_STORE or .mwb-store)");
    app.add_option("--catalog", catalog_path_, "Catalog file to use instead of the shipped one");
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format_, "Output format")
            ->check(CLI::IsMember({"table", "records"}));
    };

    int (Cli::*command)() = nullptr;
    auto bind = [&](CLI::App* cmd, int (Cli::*handler)()) {
        cmd->callback([&command, handler] { command = handler; });
    };

    auto* catalog_cmd = app.add_subcommand("catalog", "Inspect the fragment catalog");
    catalog_cmd->require_subcommand(1);
    auto* catalog_list_cmd = catalog_cmd->add_subcommand("list", "List catalog fragments");
    catalog_list_cmd->add_option("--kind", kind_filter_, "Only fragments of this kind");
    catalog_list_cmd->add_option("--phase", phase_filter_, "Only fragments of this phase");
    add_format(catalog_list_cmd);
    bind(catalog_list_cmd, &Cli::catalog_list);
    auto* catalog_show_cmd = catalog_cmd->add_subcommand("show", "Show one fragment");
    catalog_show_cmd->add_option("id", fragment_arg_, "Fragment id")->required();
    add_format(catalog_show_cmd);
    bind(catalog_show_cmd, &Cli::catalog_show);

    auto* method_cmd = app.add_subcommand("method", "Create, tailor and share methods");
    method_cmd->require_subcommand(1);
    auto* create = method_cmd->add_subcommand("create", "Instantiate a method from the catalog");
    create->add_option("--name", name_, "Method name");
    create->add_option("--description", description_, "Method description");
    create->add_option("--types", types_, "Migration types, e.g. II,V")->required();
    create->add_option("--phases", phases_, "Phase ids, e.g. plan,design")->required();
    create->add_option("--out", out_path_, "Write to FILE (.xml for XML) instead of the store");
    create->add_flag("--replace", replace_, "Overwrite a stored method with the same id");
    add_format(create);
    bind(create, &Cli::method_create);

    auto* show = method_cmd->add_subcommand("show", "Show a method");
    show->add_option("method", method_arg_, "Store id or file")->required();
    add_format(show);
    bind(show, &Cli::method_show);

    auto* list = method_cmd->add_subcommand("list", "List stored methods");
    bind(list, &Cli::method_list);

    auto* tailor = method_cmd->add_subcommand("tailor", "Replay an action script on a method");
    tailor->add_option("method", method_arg_, "Store id or file")->required();
    tailor->add_option("--script", script_path_, "Action script")->required();
    tailor->add_option("--out", out_path_, "Write the result to FILE");
    bind(tailor, &Cli::method_tailor);

    auto* validate = method_cmd->add_subcommand("validate", "Check conformance");
    validate->add_option("method", method_arg_, "Store id or file")->required();
    bind(validate, &Cli::method_validate);

    auto* export_cmd = method_cmd->add_subcommand("export", "Export a method");
    export_cmd->add_option("method", method_arg_, "Store id or file")->required();
    export_cmd->add_option("--xml", xml_path_, "XML output file, - for standard output");
    export_cmd->add_option("--records", records_path_, "Record output file, - for standard output");
    bind(export_cmd, &Cli::method_export);

    auto* import_cmd = method_cmd->add_subcommand("import", "Import a method into the store");
    import_cmd->add_option("file", file_arg_, "XML or record file")->required();
    import_cmd->add_flag("--force", force_, "Bind to the current metamodel despite a version mismatch");
    import_cmd->add_flag("--replace", replace_, "Overwrite a stored method with the same id");
    bind(import_cmd, &Cli::method_import);

    auto* instance_cmd = app.add_subcommand("instance", "Record method enactments");
    instance_cmd->require_subcommand(1);
    auto* instance_create_cmd = instance_cmd->add_subcommand("create", "Enact a stored method");
    instance_create_cmd->add_option("method", method_arg_, "Stored method id")->required();
    instance_create_cmd->add_option("--id", instance_id_, "Instance id");
    instance_create_cmd->add_option("--choose", choices_, "TASK=TECHNIQUE, repeatable");
    instance_create_cmd->add_option("--notes", notes_, "Enactment notes");
    bind(instance_create_cmd, &Cli::instance_create);
    auto* instance_show_cmd = instance_cmd->add_subcommand("show", "Show an instance");
    instance_show_cmd->add_option("id", instance_id_, "Instance id")->required();
    bind(instance_show_cmd, &Cli::instance_show);

    auto* rules_cmd = app.add_subcommand("rules", "Inspect transformation rules");
    rules_cmd->require_subcommand(1);
    bind(rules_cmd->add_subcommand("list", "List rules"), &Cli::rules_list);
    auto* explain = rules_cmd->add_subcommand("explain", "Explain why a fragment is included");
    explain->add_option("fragment", fragment_arg_, "Fragment id")->required();
    explain->add_option("--types", types_, "Migration types")->required();
    bind(explain, &Cli::rules_explain);

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--addr", addr_, "HOST:PORT (port 0 picks a free port)");
    serve_cmd->add_option("--app", app_dir_, "Directory served under /app");
    bind(serve_cmd, &Cli::serve);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out_, err_);
        err_ << "error[" << to_string(ErrorCode::ParseError) << "]: " << e.what() << '\n';
        return 1;
    }

    try {
        return (this->*command)();
    } catch (const IntegrityError& e) {
        err_ << "error[" << to_string(e.code()) << "]: rejected, the method has errors\n";
        print_issues(err_, e.issues());
        return 2;
    } catch (const Error& e) {
        err_ << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err_ << "error[" << to_string(ErrorCode::StorageError) << "]: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& environment) {
    Cli cli(out, err, environment);
    return cli.run(args);
}

}  // namespace mwb
