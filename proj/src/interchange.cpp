#include "mwb/interchange.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "mwb/catalog.hpp"
#include "mwb/errors.hpp"
#include "mwb/transform.hpp"

namespace mwb {

namespace {

namespace pt = boost::property_tree;

using Attributes = std::vector<std::pair<std::string, std::string>>;

[[noreturn]] void parse_error(const std::string& message) {
    throw Error(ErrorCode::ParseError, message);
}

std::string xml_escape(std::string_view text, bool attribute) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\r': out += "&#13;"; break;
            case '"': out += attribute ? "&quot;" : "\""; break;
            case '\n': out += attribute ? "&#10;" : "\n"; break;
            case '\t': out += attribute ? "&#9;" : "\t"; break;
            default: out += c;
        }
    }
    return out;
}

class XmlWriter {
public:
    XmlWriter() { out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

    void open(std::string_view name, const Attributes& attrs = {}, bool empty = false) {
        indent();
        out_ << '<' << name;
        for (const auto& [key, value] : attrs) {
            out_ << ' ' << key << "=\"" << xml_escape(value, true) << '"';
        }
        if (empty) {
            out_ << "/>\n";
        } else {
            out_ << ">\n";
            ++depth_;
        }
    }

    void empty(std::string_view name, const Attributes& attrs) { open(name, attrs, true); }

    void close(std::string_view name) {
        --depth_;
        indent();
        out_ << "</" << name << ">\n";
    }

    void text(std::string_view name, std::string_view content) {
        indent();
        out_ << '<' << name << '>' << xml_escape(content, false) << "</" << name << ">\n";
    }

    std::string str() const { return out_.str(); }

private:
    void indent() {
        for (int i = 0; i < depth_; ++i) out_ << "  ";
    }

    std::ostringstream out_;
    int depth_ = 0;
};

std::string type_list(const std::vector<MigrationType>& types) {
    std::vector<std::string> names;
    for (auto t : types) names.emplace_back(to_string(t));
    return records::join_list(names);
}

std::vector<MigrationType> parse_types(const std::string& text) {
    std::vector<MigrationType> out;
    for (const auto& item : records::split_list(text)) {
        auto type = parse_migration_type(item);
        if (!type) parse_error("invalid migration type '" + item + "'");
        out.push_back(*type);
    }
    return out;
}

// One <fragment> element: a member, a waived catalog fragment or a library entry.
struct FragmentElement {
    const MethodFragment* fragment = nullptr;
    std::string definition;
    std::optional<std::string> waiver;
};

void write_fragment(XmlWriter& xml, const FragmentElement& element, const MethodModel& method,
                    bool library) {
    const auto& f = *element.fragment;
    Attributes attrs = {
        {"id", f.id.str()},
        {"name", f.name},
        {"kind", std::string(to_string(f.kind))},
        {"provenance", std::string(to_string(f.provenance))},
    };
    if (library && f.phase) attrs.emplace_back("phase", f.phase->str());
    if (f.provenance == Provenance::UserDefined && f.parent) {
        attrs.emplace_back("parent", f.parent->str());
    }
    xml.open("fragment", attrs);
    xml.text("definition", element.definition);
    for (const auto& binding : method.technique_bindings) {
        if (binding.task == f.id) {
            xml.empty("technique", {{"id", binding.technique.str()}});
        }
    }
    if (element.waiver) {
        xml.text("waiver", *element.waiver);
    }
    xml.close("fragment");
}

// ---- import helpers over the property tree ----

const pt::ptree kEmpty;

const pt::ptree& attributes_of(const pt::ptree& node) {
    auto it = node.find("<xmlattr>");
    return it == node.not_found() ? kEmpty : it->second;
}

void allow_attributes(const pt::ptree& node, std::string_view element,
                      std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : attributes_of(node)) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            parse_error("unknown attribute '" + key + "' on <" + std::string(element) + ">");
        }
    }
}

std::optional<std::string> attribute(const pt::ptree& node, const std::string& key) {
    const auto& attrs = attributes_of(node);
    auto it = attrs.find(key);
    if (it == attrs.not_found()) return std::nullopt;
    return it->second.data();
}

std::string required_attribute(const pt::ptree& node, std::string_view element,
                               const std::string& key) {
    auto value = attribute(node, key);
    if (!value) {
        parse_error("<" + std::string(element) + "> lacks attribute '" + key + "'");
    }
    return *value;
}

// Element children in document order; attributes and comments are skipped.
// Any non-whitespace text between child elements is rejected.
std::vector<std::pair<std::string, const pt::ptree*>> children(const pt::ptree& node,
                                                              std::string_view element) {
    std::vector<std::pair<std::string, const pt::ptree*>> out;
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (key == "<xmltext>") {
            if (child.data().find_first_not_of(" \t\r\n") != std::string::npos) {
                parse_error("unexpected text inside <" + std::string(element) + ">");
            }
            continue;
        }
        out.emplace_back(key, &child);
    }
    if (!out.empty() && node.data().find_first_not_of(" \t\r\n") != std::string::npos) {
        parse_error("unexpected text inside <" + std::string(element) + ">");
    }
    return out;
}

void expect_leaf(const pt::ptree& node, std::string_view element) {
    if (!children(node, element).empty()) {
        parse_error("<" + std::string(element) + "> must not contain elements");
    }
}

struct ImportedFragment {
    FragmentId id;
    std::string name;
    FragmentKind kind = FragmentKind::Task;
    Provenance provenance = Provenance::Catalog;
    std::optional<FragmentId> phase;
    std::optional<FragmentId> parent;
    std::string definition;
    std::vector<FragmentId> techniques;
    std::optional<std::string> waiver;
    bool in_library = false;
};

ImportedFragment read_fragment(const pt::ptree& node, bool library) {
    if (library) {
        allow_attributes(node, "fragment", {"id", "name", "kind", "provenance", "phase", "parent"});
    } else {
        allow_attributes(node, "fragment", {"id", "name", "kind", "provenance", "parent"});
    }
    ImportedFragment out;
    out.in_library = library;
    out.id = FragmentId(required_attribute(node, "fragment", "id"));
    out.name = required_attribute(node, "fragment", "name");
    const auto kind_text = required_attribute(node, "fragment", "kind");
    const auto kind = parse_fragment_kind(kind_text);
    if (!kind) parse_error("invalid fragment kind '" + kind_text + "'");
    out.kind = *kind;
    const auto provenance_text = required_attribute(node, "fragment", "provenance");
    const auto provenance = parse_provenance(provenance_text);
    if (!provenance) parse_error("invalid provenance '" + provenance_text + "'");
    out.provenance = *provenance;
    if (auto phase = attribute(node, "phase")) out.phase = FragmentId(*phase);
    if (auto parent = attribute(node, "parent")) out.parent = FragmentId(*parent);
    if (out.id.empty()) parse_error("fragment id is empty");

    // Children in fixed order: definition, technique*, waiver?
    bool seen_definition = false;
    for (const auto& [key, child] : children(node, "fragment")) {
        if (key == "definition") {
            if (seen_definition || !out.techniques.empty() || out.waiver) {
                parse_error("misplaced <definition> in fragment '" + out.id.str() + "'");
            }
            expect_leaf(*child, "definition");
            allow_attributes(*child, "definition", {});
            out.definition = child->data();
            seen_definition = true;
        } else if (key == "technique") {
            if (!seen_definition || out.waiver) {
                parse_error("misplaced <technique> in fragment '" + out.id.str() + "'");
            }
            expect_leaf(*child, "technique");
            allow_attributes(*child, "technique", {"id"});
            out.techniques.emplace_back(required_attribute(*child, "technique", "id"));
        } else if (key == "waiver") {
            if (!seen_definition || out.waiver) {
                parse_error("misplaced <waiver> in fragment '" + out.id.str() + "'");
            }
            expect_leaf(*child, "waiver");
            allow_attributes(*child, "waiver", {});
            out.waiver = child->data();
        } else {
            parse_error("unknown element <" + key + "> in fragment '" + out.id.str() + "'");
        }
    }
    if (!seen_definition) {
        parse_error("fragment '" + out.id.str() + "' lacks <definition>");
    }
    return out;
}

}  // namespace

std::string export_xml(const MethodModel& method, const Metamodel& metamodel) {
    auto issues = check_conformance(method, metamodel);
    if (count_issues(issues, Severity::Error) > 0) {
        throw IntegrityError(std::move(issues));
    }

    // Waived catalog fragments are listed beside the members of their phase.
    std::map<FragmentId, std::vector<FragmentElement>> by_phase;
    std::vector<FragmentElement> library;
    for (const auto& inclusion : method.members) {
        const auto* fragment = resolve(metamodel, method, inclusion.fragment);
        by_phase[*fragment->phase].push_back(FragmentElement{
            fragment, inclusion.definition_override.value_or(fragment->definition), std::nullopt});
    }
    for (const auto& waiver : method.waivers) {
        const auto* fragment = resolve(metamodel, method, waiver.fragment);
        FragmentElement element{fragment, fragment->definition, waiver.justification};
        const bool placed = fragment->phase && std::find(method.phases.begin(), method.phases.end(),
                                                         *fragment->phase) != method.phases.end();
        if (placed) {
            by_phase[*fragment->phase].push_back(element);
        } else {
            library.push_back(element);
        }
    }
    for (const auto& fragment : method.user_fragments) {
        if (method.member(fragment.id) == nullptr) {
            library.push_back(FragmentElement{&fragment, fragment.definition, std::nullopt});
        }
    }
    auto by_id = [](const FragmentElement& a, const FragmentElement& b) {
        return a.fragment->id < b.fragment->id;
    };

    XmlWriter xml;
    xml.open("method", {{"id", method.id},
                        {"name", method.name},
                        {"metamodel-version", method.metamodel_version},
                        {"migration-types", type_list(method.migration_types)}});
    if (!method.description.empty()) {
        xml.text("description", method.description);
    }
    for (const auto& phase_id : method.phases) {
        const auto* phase = metamodel.find(phase_id);
        xml.open("phase", {{"id", phase_id.str()}, {"name", phase->name}});
        auto& elements = by_phase[phase_id];
        std::sort(elements.begin(), elements.end(), by_id);
        for (const auto& element : elements) {
            write_fragment(xml, element, method, false);
        }
        xml.close("phase");
    }
    if (!library.empty()) {
        std::sort(library.begin(), library.end(), by_id);
        xml.open("library");
        for (const auto& element : library) {
            write_fragment(xml, element, method, true);
        }
        xml.close("library");
    }
    if (method.sequences.empty()) {
        xml.empty("sequences", {});
    } else {
        xml.open("sequences");
        for (const auto& edge : method.sequences) {
            xml.empty("edge", {{"from", edge.predecessor.str()}, {"to", edge.successor.str()}});
        }
        xml.close("sequences");
    }
    xml.close("method");
    return xml.str();
}

MethodModel import_xml(std::string_view document, const Metamodel& metamodel, bool force) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(document)};
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        parse_error(std::string("malformed XML: ") + e.message() + " (line " +
                    std::to_string(e.line()) + ")");
    }
    const auto top = children(tree, "document");
    if (top.size() != 1 || top.front().first != "method") {
        parse_error("document root must be a single <method> element");
    }
    const auto& root = *top.front().second;
    allow_attributes(root, "method", {"id", "name", "metamodel-version", "migration-types"});

    MethodModel method;
    method.id = required_attribute(root, "method", "id");
    method.name = required_attribute(root, "method", "name");
    method.metamodel_version = required_attribute(root, "method", "metamodel-version");
    method.migration_types = parse_types(required_attribute(root, "method", "migration-types"));
    if (method.metamodel_version != metamodel.version) {
        if (!force) {
            throw Error(ErrorCode::VersionMismatch,
                        "document targets metamodel version '" + method.metamodel_version +
                            "' but the catalog is version '" + metamodel.version + "'",
                        {method.metamodel_version});
        }
        method.metamodel_version = metamodel.version;
    }

    std::vector<ImportedFragment> fragments;
    enum class Stage { Description, Phases, Library, Sequences, Done } stage = Stage::Description;
    for (const auto& [key, child] : children(root, "method")) {
        if (key == "description" && stage == Stage::Description) {
            expect_leaf(*child, "description");
            allow_attributes(*child, "description", {});
            method.description = child->data();
            stage = Stage::Phases;
        } else if (key == "phase" && stage <= Stage::Phases) {
            stage = Stage::Phases;
            allow_attributes(*child, "phase", {"id", "name"});
            FragmentId phase_id(required_attribute(*child, "phase", "id"));
            required_attribute(*child, "phase", "name");
            method.phases.push_back(phase_id);
            for (const auto& [inner_key, inner] : children(*child, "phase")) {
                if (inner_key != "fragment") {
                    parse_error("unknown element <" + inner_key + "> in phase '" +
                                phase_id.str() + "'");
                }
                auto fragment = read_fragment(*inner, false);
                fragment.phase = phase_id;
                fragments.push_back(std::move(fragment));
            }
        } else if (key == "library" && stage <= Stage::Phases) {
            stage = Stage::Library;
            allow_attributes(*child, "library", {});
            for (const auto& [inner_key, inner] : children(*child, "library")) {
                if (inner_key != "fragment") {
                    parse_error("unknown element <" + inner_key + "> in library");
                }
                auto fragment = read_fragment(*inner, true);
                if (!fragment.waiver && !fragment.techniques.empty()) {
                    parse_error("library fragment '" + fragment.id.str() +
                                "' cannot carry techniques");
                }
                fragments.push_back(std::move(fragment));
            }
        } else if (key == "sequences" && stage <= Stage::Library) {
            stage = Stage::Sequences;
            allow_attributes(*child, "sequences", {});
            for (const auto& [inner_key, inner] : children(*child, "sequences")) {
                if (inner_key != "edge") {
                    parse_error("unknown element <" + inner_key + "> in sequences");
                }
                expect_leaf(*inner, "edge");
                allow_attributes(*inner, "edge", {"from", "to"});
                method.sequences.push_back(
                    SequenceEdge{FragmentId(required_attribute(*inner, "edge", "from")),
                                 FragmentId(required_attribute(*inner, "edge", "to"))});
            }
        } else {
            parse_error("unexpected element <" + key + "> in method");
        }
    }
    if (stage != Stage::Sequences) {
        parse_error("<method> lacks <sequences>");
    }

    std::set<FragmentId> seen;
    for (const auto& f : fragments) {
        if (!seen.insert(f.id).second) {
            parse_error("fragment '" + f.id.str() + "' appears twice");
        }
        const auto* catalog = metamodel.find(f.id);
        if (f.waiver) {
            method.waivers.push_back(Waiver{f.id, *f.waiver});
            if (catalog == nullptr) {
                parse_error("waived fragment '" + f.id.str() + "' is not in the catalog");
            }
            continue;
        }
        if (catalog != nullptr) {
            // Catalog ids bind to the catalog; differing text is a local override.
            FragmentInclusion inclusion{f.id, std::nullopt, std::nullopt};
            if (f.definition != catalog->definition) inclusion.definition_override = f.definition;
            method.members.push_back(std::move(inclusion));
        } else {
            MethodFragment user;
            user.id = f.id;
            user.name = f.name;
            user.kind = f.kind;
            user.definition = f.definition;
            user.phase = f.phase;
            user.parent = f.parent;
            user.provenance = Provenance::UserDefined;
            method.user_fragments.push_back(user);
            if (!f.in_library) {
                method.members.push_back(FragmentInclusion{f.id, std::nullopt, std::nullopt});
            }
        }
        for (const auto& technique : f.techniques) {
            method.technique_bindings.push_back(TechniqueBinding{f.id, technique});
        }
    }
    for (auto& inclusion : method.members) {
        if (metamodel.find(inclusion.fragment) != nullptr) {
            inclusion.note = annotation_for(metamodel, inclusion.fragment, method.migration_types);
        }
    }
    normalize(method, metamodel);
    return method;
}

}  // namespace mwb

namespace mwb {

namespace {

const std::vector<std::string> kMethodHeader = {"format-version", "document"};

[[noreturn]] void record_error(const records::Record& record, const std::string& message) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(record.line) + ": " + message);
}

std::vector<std::string> id_strings(const std::vector<FragmentId>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

records::Record binding_record(std::string type, const TechniqueBinding& binding) {
    records::Record record(std::move(type));
    record.add("task", binding.task.str()).add("technique", binding.technique.str());
    return record;
}

TechniqueBinding binding_from_record(const records::Record& record) {
    return TechniqueBinding{FragmentId(record.require("task")),
                            FragmentId(record.require("technique"))};
}

}  // namespace

const std::vector<records::Schema> kMethodSchemas = {
    {"method", {"id", "name", "metamodel-version", "migration-types", "phases"}, {"description"}, {}},
    {"user-fragment",
     {"id", "name", "kind", "provenance", "definition"},
     {"phase", "parent", "provenance-note"},
     {}},
    {"member", {"fragment"}, {"definition-override", "note"}, {}},
    {"relationship", {"type", "source", "target", "knowledge-source"}, {}, {}},
    {"sequence", {"from", "to"}, {}, {}},
    {"binding", {"task", "technique"}, {}, {}},
    {"waiver", {"fragment", "justification"}, {}, {}},
    {"instance", {"id", "method"}, {"enactment-notes"}, {}},
    {"choice", {"task", "technique"}, {}, {}},
};

std::vector<records::Record> method_records(const MethodModel& method, bool include_bindings) {
    std::vector<records::Record> out;
    records::Record head("method");
    std::vector<std::string> types;
    for (auto t : method.migration_types) types.emplace_back(to_string(t));
    head.add("id", method.id)
        .add("name", method.name)
        .add("metamodel-version", method.metamodel_version)
        .add("migration-types", records::join_list(types))
        .add("phases", records::join_list(id_strings(method.phases)));
    if (!method.description.empty()) head.add("description", method.description);
    out.push_back(std::move(head));

    for (const auto& fragment : method.user_fragments) {
        out.push_back(fragment_record(fragment, "user-fragment"));
    }
    for (const auto& inclusion : method.members) {
        records::Record record("member");
        record.add("fragment", inclusion.fragment.str());
        record.add_if("definition-override", inclusion.definition_override);
        record.add_if("note", inclusion.note);
        out.push_back(std::move(record));
    }
    for (const auto& rel : method.relationships) {
        out.push_back(relationship_record(rel));
    }
    for (const auto& edge : method.sequences) {
        records::Record record("sequence");
        record.add("from", edge.predecessor.str()).add("to", edge.successor.str());
        out.push_back(std::move(record));
    }
    if (include_bindings) {
        for (const auto& binding : method.technique_bindings) {
            out.push_back(binding_record("binding", binding));
        }
    }
    for (const auto& waiver : method.waivers) {
        records::Record record("waiver");
        record.add("fragment", waiver.fragment.str()).add("justification", waiver.justification);
        out.push_back(std::move(record));
    }
    return out;
}

MethodModel method_from_records(std::span<const records::Record> recs) {
    if (recs.empty() || recs.front().type != "method") {
        throw Error(ErrorCode::ParseError, "a method starts with a [method] record");
    }
    const auto& head = recs.front();
    MethodModel method;
    method.id = head.require("id");
    method.name = head.require("name");
    method.description = head.get("description").value_or("");
    method.metamodel_version = head.require("metamodel-version");
    for (const auto& item : records::split_list(head.require("migration-types"))) {
        auto type = parse_migration_type(item);
        if (!type) record_error(head, "invalid migration type '" + item + "'");
        method.migration_types.push_back(*type);
    }
    for (auto& item : records::split_list(head.require("phases"))) {
        method.phases.emplace_back(std::move(item));
    }
    if (method.id.empty()) record_error(head, "method id is empty");

    for (const auto& record : recs.subspan(1)) {
        if (record.type == "user-fragment") {
            method.user_fragments.push_back(fragment_from_record(record));
        } else if (record.type == "member") {
            method.members.push_back(FragmentInclusion{FragmentId(record.require("fragment")),
                                                       record.get("definition-override"),
                                                       record.get("note")});
        } else if (record.type == "relationship") {
            method.relationships.push_back(relationship_from_record(record));
        } else if (record.type == "sequence") {
            method.sequences.push_back(SequenceEdge{FragmentId(record.require("from")),
                                                    FragmentId(record.require("to"))});
        } else if (record.type == "binding") {
            method.technique_bindings.push_back(binding_from_record(record));
        } else if (record.type == "waiver") {
            method.waivers.push_back(
                Waiver{FragmentId(record.require("fragment")), record.require("justification")});
        } else {
            record_error(record, "unexpected [" + record.type + "] inside a method");
        }
    }
    return method;
}

std::vector<records::Record> instance_records(const MethodInstance& instance,
                                              bool include_bindings) {
    std::vector<records::Record> out;
    records::Record head("instance");
    head.add("id", instance.id).add("method", instance.method);
    if (!instance.enactment_notes.empty()) head.add("enactment-notes", instance.enactment_notes);
    out.push_back(std::move(head));
    if (include_bindings) {
        for (const auto& binding : instance.chosen_techniques) {
            out.push_back(binding_record("choice", binding));
        }
    }
    return out;
}

MethodInstance instance_from_records(std::span<const records::Record> recs) {
    if (recs.empty() || recs.front().type != "instance") {
        throw Error(ErrorCode::ParseError, "an instance starts with an [instance] record");
    }
    MethodInstance instance;
    instance.id = recs.front().require("id");
    instance.method = recs.front().require("method");
    instance.enactment_notes = recs.front().get("enactment-notes").value_or("");
    for (const auto& record : recs.subspan(1)) {
        if (record.type != "choice") {
            record_error(record, "unexpected [" + record.type + "] inside an instance");
        }
        instance.chosen_techniques.push_back(binding_from_record(record));
    }
    return instance;
}

std::vector<std::span<const records::Record>> group_records(
    std::span<const records::Record> recs, std::string_view head) {
    std::vector<std::span<const records::Record>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= recs.size(); ++i) {
        if (i == recs.size() || (i > start && recs[i].type == head)) {
            if (i > start) {
                if (recs[start].type != head) {
                    record_error(recs[start], "expected [" + std::string(head) + "]");
                }
                out.push_back(recs.subspan(start, i - start));
            }
            start = i;
        }
    }
    return out;
}

std::string export_method_records(const MethodModel& method) {
    records::Document document;
    document.header = {{"format-version", std::string(records::kFormatVersion)},
                       {"document", "method"}};
    document.records = method_records(method);
    return records::write(document);
}

MethodModel import_method_records(std::string_view text) {
    const auto document = records::parse(text);
    records::check(document, kMethodSchemas, kMethodHeader);
    if (document.header_value("format-version") != std::string(records::kFormatVersion) ||
        document.header_value("document") != "method") {
        throw Error(ErrorCode::ParseError,
                    "expected a method document (format-version: 1, document: method)");
    }
    const auto groups = group_records(document.records, "method");
    if (groups.size() != 1) {
        throw Error(ErrorCode::ParseError, "a method document holds exactly one [method]");
    }
    return method_from_records(groups.front());
}

}  // namespace mwb
