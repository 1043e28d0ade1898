// x3dbridge command line: convert, validate, inspect and roundtrip X3D
// scenes and OGRE artifacts (XML meshes, material scripts, compositor
// scripts). Diagnostics go to stderr as "severity code path:line message";
// the exit status is 0 only when nothing error-severity was reported (and
// no warnings either under --strict).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "x3db/translate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum class InputKind { X3d, MeshXml, Material, Compositor, Unknown };

struct Session {
    bool any_error = false;
    bool any_warning = false;

    void report(const fs::path& path, const x3db::DiagnosticList& diags) {
        for (const x3db::Diagnostic& d : diags) {
            std::cerr << d.format(path.string()) << "\n";
            if (d.severity == x3db::Severity::Error)
                any_error = true;
            else if (d.severity == x3db::Severity::Warning)
                any_warning = true;
        }
    }

    void fail(const fs::path& path, const std::string& code, const std::string& message) {
        x3db::DiagnosticList diags;
        diags.error(0, 0, code, message);
        report(path, diags);
    }

    int exit_code(bool strict) const {
        return any_error || (strict && any_warning) ? 1 : 0;
    }
};

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

bool write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        return false;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return out.good();
}

bool ends_with(std::string_view text, std::string_view suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string sniff_root_element(std::string_view bytes) {
    size_t i = 0;
    while (i < bytes.size()) {
        size_t open = bytes.find('<', i);
        if (open == std::string_view::npos)
            return {};
        if (bytes.compare(open, 4, "<!--") == 0) {
            size_t close = bytes.find("-->", open);
            if (close == std::string_view::npos)
                return {};
            i = close + 3;
            continue;
        }
        if (open + 1 < bytes.size() && (bytes[open + 1] == '?' || bytes[open + 1] == '!')) {
            size_t close = bytes.find('>', open);
            if (close == std::string_view::npos)
                return {};
            i = close + 1;
            continue;
        }
        size_t start = open + 1;
        size_t end = start;
        while (end < bytes.size() && bytes[end] != ' ' && bytes[end] != '\t' &&
               bytes[end] != '\n' && bytes[end] != '\r' && bytes[end] != '>' &&
               bytes[end] != '/')
            ++end;
        return std::string(bytes.substr(start, end - start));
    }
    return {};
}

InputKind classify(const fs::path& path, std::string_view bytes) {
    std::string name = path.filename().string();
    if (ends_with(name, ".x3d"))
        return InputKind::X3d;
    if (ends_with(name, ".material"))
        return InputKind::Material;
    if (ends_with(name, ".compositor"))
        return InputKind::Compositor;
    if (ends_with(name, ".mesh.xml"))
        return InputKind::MeshXml;
    if (ends_with(name, ".xml")) {
        std::string root = sniff_root_element(bytes);
        if (root == "mesh")
            return InputKind::MeshXml;
        if (root == "X3D" || root == "Scene")
            return InputKind::X3d;
    }
    return InputKind::Unknown;
}

std::string base_name(const fs::path& path) {
    std::string name = path.filename().string();
    for (std::string_view suffix : {".mesh.xml", ".x3d", ".material", ".compositor", ".xml"}) {
        if (ends_with(name, suffix))
            return name.substr(0, name.size() - suffix.size());
    }
    return name;
}

struct RegistryOptions {
    std::string directory;
    std::string manifest;
    bool recursive = false;
};

x3db::ResourceRegistry build_registry(const RegistryOptions& options, Session& session) {
    x3db::ResourceRegistry registry;
    if (!options.directory.empty()) {
        x3db::Result<x3db::ResourceRegistry> loaded =
            x3db::load_registry_from_directory(options.directory, options.recursive);
        session.report(options.directory, loaded.diags);
        if (loaded.ok())
            registry.merge(*loaded);
    }
    if (!options.manifest.empty()) {
        x3db::Result<x3db::ResourceRegistry> loaded =
            x3db::load_registry_from_manifest(options.manifest);
        session.report(options.manifest, loaded.diags);
        if (loaded.ok())
            registry.merge(*loaded);
    }
    return registry;
}

ordered_json report_json(const std::string& base, const std::vector<std::string>& artifacts,
                         const x3db::TranslationReport& report) {
    ordered_json j;
    j["name"] = base;
    j["artifacts"] = artifacts;
    ordered_json names = ordered_json::array();
    for (const auto& [from, to] : report.name_map)
        names.push_back(ordered_json{{"from", from}, {"to", to}});
    j["name_map"] = names;
    ordered_json external = ordered_json::array();
    for (const auto& [kind, name] : report.external_refs)
        external.push_back(ordered_json{{"kind", kind}, {"name", name}});
    j["external_refs"] = external;
    return j;
}

void emit_artifact(const fs::path& out_path, std::string_view bytes,
                   std::vector<std::string>& artifacts, Session& session) {
    if (write_file(out_path, bytes))
        artifacts.push_back(out_path.filename().string());
    else
        session.fail(out_path, "io-error", "cannot write output file");
}

int run_convert(const std::vector<std::string>& inputs, bool to_x3d, const std::string& out_dir,
                const RegistryOptions& registry_options, const x3db::MaterialOptions& material,
                bool strict) {
    Session session;
    x3db::ResourceRegistry registry = build_registry(registry_options, session);
    fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);

    if (!to_x3d) {
        for (const std::string& input : inputs) {
            fs::path path(input);
            std::optional<std::string> bytes = read_file(path);
            if (!bytes) {
                session.fail(path, "io-error", "cannot read input file");
                continue;
            }
            if (classify(path, *bytes) != InputKind::X3d) {
                session.fail(path, "unsupported-input",
                             "conversion to OGRE takes .x3d documents");
                continue;
            }
            std::string base = base_name(path);
            x3db::SceneDocument doc = x3db::parse_x3d(*bytes);
            session.report(path, doc.diagnostics);
            if (doc.diagnostics.has_errors())
                continue;
            doc.diagnostics = x3db::DiagnosticList{};
            x3db::TranslationReport report =
                x3db::translate_scene(doc, base, registry, material);
            session.report(path, report.diags);
            std::vector<std::string> artifacts;
            if (report.mesh)
                emit_artifact(out / (base + ".mesh.xml"), x3db::serialize_mesh_xml(*report.mesh),
                              artifacts, session);
            if (!report.materials.empty())
                emit_artifact(out / (base + ".material"),
                              x3db::serialize_material_script(report.materials), artifacts,
                              session);
            if (!report.compositors.empty())
                emit_artifact(out / (base + ".compositor"),
                              x3db::serialize_compositor_script(report.compositors), artifacts,
                              session);
            std::string json = report_json(base, artifacts, report).dump(2);
            json += "\n";
            if (!write_file(out / (base + ".report.json"), json))
                session.fail(out / (base + ".report.json"), "io-error",
                             "cannot write output file");
        }
        return session.exit_code(strict);
    }

    std::optional<x3db::OgreMesh> mesh;
    std::vector<x3db::MaterialEntry> materials;
    std::vector<x3db::CompositorScript> compositors;
    std::string base;
    for (const std::string& input : inputs) {
        fs::path path(input);
        std::optional<std::string> bytes = read_file(path);
        if (!bytes) {
            session.fail(path, "io-error", "cannot read input file");
            continue;
        }
        if (base.empty())
            base = base_name(path);
        switch (classify(path, *bytes)) {
        case InputKind::MeshXml: {
            if (mesh) {
                session.fail(path, "unsupported-input",
                             "a conversion combines at most one mesh");
                break;
            }
            x3db::Result<x3db::OgreMesh> parsed = x3db::parse_mesh_xml(*bytes);
            session.report(path, parsed.diags);
            if (parsed.ok()) {
                mesh = std::move(*parsed);
                base = base_name(path);
            }
            break;
        }
        case InputKind::Material: {
            x3db::Result<std::vector<x3db::MaterialEntry>> parsed =
                x3db::parse_material_script(*bytes);
            session.report(path, parsed.diags);
            if (parsed.ok())
                for (x3db::MaterialEntry& entry : *parsed)
                    materials.push_back(std::move(entry));
            break;
        }
        case InputKind::Compositor: {
            x3db::Result<std::vector<x3db::CompositorScript>> parsed =
                x3db::parse_compositor_script(*bytes);
            session.report(path, parsed.diags);
            if (parsed.ok())
                for (x3db::CompositorScript& script : *parsed)
                    compositors.push_back(std::move(script));
            break;
        }
        default:
            session.fail(path, "unsupported-input",
                         "conversion to X3D takes .mesh.xml, .material and .compositor files");
            break;
        }
    }
    if (session.any_error)
        return session.exit_code(strict);
    x3db::Result<x3db::SceneDocument> scene = x3db::ogre_to_x3d_scene(
        base, mesh ? &*mesh : nullptr, materials, compositors, registry, material);
    session.report(base, scene.diags);
    if (scene.ok()) {
        fs::path out_path = out / (base + ".x3d");
        if (!write_file(out_path, x3db::serialize_x3d(*scene)))
            session.fail(out_path, "io-error", "cannot write output file");
    }
    return session.exit_code(strict);
}

void validate_compositor_graph(const fs::path& path, const x3db::CompositorGraph& graph,
                               bool suggest, Session& session) {
    x3db::Result<std::vector<std::string>> schedule = x3db::validate_and_schedule(graph);
    session.report(path, schedule.diags);
    if (!schedule.ok() && suggest) {
        if (std::optional<std::vector<std::string>> order = x3db::suggest_order(graph)) {
            std::cout << path.string() << ": suggested order for '" << graph.name << "':";
            for (const std::string& label : *order)
                std::cout << " " << label;
            std::cout << "\n";
        }
    }
}

int run_validate(const std::vector<std::string>& inputs, bool suggest, bool strict) {
    Session session;
    for (const std::string& input : inputs) {
        fs::path path(input);
        std::optional<std::string> bytes = read_file(path);
        if (!bytes) {
            session.fail(path, "io-error", "cannot read input file");
            continue;
        }
        switch (classify(path, *bytes)) {
        case InputKind::X3d: {
            x3db::SceneDocument doc = x3db::parse_x3d(*bytes);
            session.report(path, doc.diagnostics);
            std::vector<const x3db::X3dNode*> stack{&doc.root};
            while (!stack.empty()) {
                const x3db::X3dNode* node = stack.back();
                stack.pop_back();
                if (node->kind == x3db::NodeKind::Compositor && !node->is_use()) {
                    x3db::Result<x3db::CompositorGraph> graph = x3db::build_compositor(*node);
                    session.report(path, graph.diags);
                    if (graph.ok())
                        validate_compositor_graph(path, *graph, suggest, session);
                }
                for (const x3db::X3dNode& child : node->children)
                    stack.push_back(&child);
            }
            break;
        }
        case InputKind::MeshXml: {
            session.report(path, x3db::parse_mesh_xml(*bytes).diags);
            break;
        }
        case InputKind::Material: {
            session.report(path, x3db::parse_material_script(*bytes).diags);
            break;
        }
        case InputKind::Compositor: {
            x3db::Result<std::vector<x3db::CompositorScript>> parsed =
                x3db::parse_compositor_script(*bytes);
            session.report(path, parsed.diags);
            if (parsed.ok()) {
                for (const x3db::CompositorScript& script : *parsed) {
                    x3db::Result<x3db::CompositorGraph> graph =
                        x3db::from_ogre_compositor(script);
                    session.report(path, graph.diags);
                    if (graph.ok())
                        validate_compositor_graph(path, *graph, suggest, session);
                }
            }
            break;
        }
        default:
            session.fail(path, "unsupported-input", "unrecognized input format");
            break;
        }
    }
    return session.exit_code(strict);
}

void count_nodes(const x3db::X3dNode& node, size_t& nodes, size_t& shapes, size_t& compositors,
                 std::vector<std::string>& defs) {
    for (const x3db::X3dNode& child : node.children) {
        ++nodes;
        if (child.kind == x3db::NodeKind::Shape)
            ++shapes;
        if (child.kind == x3db::NodeKind::Compositor)
            ++compositors;
        if (!child.def_name.empty())
            defs.push_back(child.def_name + " (" + std::string(child.element_name) + ")");
        count_nodes(child, nodes, shapes, compositors, defs);
    }
}

int run_inspect(const std::vector<std::string>& inputs, bool strict) {
    Session session;
    for (const std::string& input : inputs) {
        fs::path path(input);
        std::optional<std::string> bytes = read_file(path);
        if (!bytes) {
            session.fail(path, "io-error", "cannot read input file");
            continue;
        }
        switch (classify(path, *bytes)) {
        case InputKind::X3d: {
            x3db::SceneDocument doc = x3db::parse_x3d(*bytes);
            session.report(path, doc.diagnostics);
            size_t nodes = 0, shapes = 0, compositors = 0;
            std::vector<std::string> defs;
            count_nodes(doc.root, nodes, shapes, compositors, defs);
            std::cout << path.string() << ": X3D scene, " << nodes << " nodes, " << shapes
                      << " shapes, " << compositors << " compositors, " << doc.routes.size()
                      << " routes\n";
            for (const std::string& def : defs)
                std::cout << "  DEF " << def << "\n";
            break;
        }
        case InputKind::MeshXml: {
            x3db::Result<x3db::OgreMesh> parsed = x3db::parse_mesh_xml(*bytes);
            session.report(path, parsed.diags);
            if (!parsed.ok())
                break;
            const x3db::OgreMesh& mesh = *parsed;
            std::cout << path.string() << ": OGRE mesh, " << mesh.submeshes.size()
                      << " submeshes, shared vertices: "
                      << (mesh.shared_geometry
                              ? std::to_string(mesh.shared_geometry->vertex_count)
                              : std::string("none"))
                      << "\n";
            for (size_t i = 0; i < mesh.submeshes.size(); ++i) {
                const x3db::Submesh& sm = mesh.submeshes[i];
                std::cout << "  submesh " << i << ": material " << sm.material << ", "
                          << sm.faces.size() << " faces, "
                          << (sm.use_shared_vertices
                                  ? std::string("shared vertices")
                                  : std::to_string(sm.geometry ? sm.geometry->vertex_count : 0) +
                                        " vertices")
                          << "\n";
            }
            break;
        }
        case InputKind::Material: {
            x3db::Result<std::vector<x3db::MaterialEntry>> parsed =
                x3db::parse_material_script(*bytes);
            session.report(path, parsed.diags);
            if (!parsed.ok())
                break;
            std::cout << path.string() << ": material script, " << parsed->size()
                      << " entries\n";
            for (const x3db::MaterialEntry& entry : *parsed) {
                if (const x3db::OgreMaterial* m = std::get_if<x3db::OgreMaterial>(&entry))
                    std::cout << "  material " << m->name << " (" << m->techniques.size()
                              << " techniques)\n";
                else {
                    const x3db::HlmsMaterial& h = std::get<x3db::HlmsMaterial>(entry);
                    std::cout << "  hlms " << h.name << " " << h.shader_type << " ("
                              << h.properties.size() << " properties)\n";
                }
            }
            break;
        }
        case InputKind::Compositor: {
            x3db::Result<std::vector<x3db::CompositorScript>> parsed =
                x3db::parse_compositor_script(*bytes);
            session.report(path, parsed.diags);
            if (!parsed.ok())
                break;
            std::cout << path.string() << ": compositor script, " << parsed->size()
                      << " compositors\n";
            for (const x3db::CompositorScript& script : *parsed) {
                size_t textures = 0, targets = 0;
                if (!script.techniques.empty()) {
                    textures = script.techniques.front().textures.size();
                    targets = script.techniques.front().targets.size();
                }
                std::cout << "  compositor " << script.name << ": " << textures
                          << " textures, " << targets << " targets";
                x3db::Result<x3db::CompositorGraph> graph = x3db::from_ogre_compositor(script);
                if (graph.ok()) {
                    x3db::Result<std::vector<std::string>> schedule =
                        x3db::validate_and_schedule(*graph);
                    if (schedule.ok()) {
                        std::cout << ", schedule:";
                        for (const std::string& label : *schedule)
                            std::cout << " " << label;
                    }
                }
                std::cout << "\n";
            }
            break;
        }
        default:
            session.fail(path, "unsupported-input", "unrecognized input format");
            break;
        }
    }
    return session.exit_code(strict);
}

bool materials_equal(const std::vector<x3db::MaterialEntry>& a,
                     const std::vector<x3db::MaterialEntry>& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!x3db::material_entry_equal(a[i], b[i]))
            return false;
    return true;
}

int run_roundtrip(const std::vector<std::string>& inputs,
                  const RegistryOptions& registry_options, const x3db::MaterialOptions& material,
                  bool strict) {
    Session session;
    x3db::ResourceRegistry registry = build_registry(registry_options, session);
    for (const std::string& input : inputs) {
        fs::path path(input);
        std::optional<std::string> bytes = read_file(path);
        if (!bytes) {
            session.fail(path, "io-error", "cannot read input file");
            continue;
        }
        switch (classify(path, *bytes)) {
        case InputKind::X3d: {
            x3db::SceneDocument doc = x3db::parse_x3d(*bytes);
            session.report(path, doc.diagnostics);
            if (doc.diagnostics.has_errors())
                break;
            doc.diagnostics = x3db::DiagnosticList{};
            std::string base = base_name(path);
            x3db::TranslationReport first =
                x3db::translate_scene(doc, base, registry, material);
            session.report(path, first.diags);
            if (first.diags.has_errors())
                break;
            x3db::Result<x3db::SceneDocument> back = x3db::ogre_to_x3d_scene(
                base, first.mesh ? &*first.mesh : nullptr, first.materials, first.compositors,
                registry, material);
            session.report(path, back.diags);
            if (!back.ok())
                break;
            x3db::TranslationReport second =
                x3db::translate_scene(*back, base, registry, material);
            session.report(path, second.diags);
            bool ok = true;
            std::string what;
            if (first.mesh.has_value() != second.mesh.has_value() ||
                (first.mesh && !x3db::mesh_equal(*first.mesh, *second.mesh))) {
                ok = false;
                what = "mesh";
            } else if (!materials_equal(first.materials, second.materials)) {
                ok = false;
                what = "materials";
            } else if (x3db::serialize_compositor_script(first.compositors) !=
                       x3db::serialize_compositor_script(second.compositors)) {
                ok = false;
                what = "compositors";
            }
            if (ok)
                std::cout << path.string() << ": roundtrip OK\n";
            else
                session.fail(path, "roundtrip-mismatch",
                             "second translation differs in " + what);
            break;
        }
        case InputKind::MeshXml: {
            x3db::Result<x3db::OgreMesh> first = x3db::parse_mesh_xml(*bytes);
            session.report(path, first.diags);
            if (!first.ok())
                break;
            std::string text = x3db::serialize_mesh_xml(*first);
            x3db::Result<x3db::OgreMesh> second = x3db::parse_mesh_xml(text);
            session.report(path, second.diags);
            if (second.ok() && x3db::mesh_equal(*first, *second) &&
                x3db::serialize_mesh_xml(*second) == text)
                std::cout << path.string() << ": roundtrip OK\n";
            else
                session.fail(path, "roundtrip-mismatch",
                             "mesh does not survive serialize/parse");
            break;
        }
        case InputKind::Material: {
            x3db::Result<std::vector<x3db::MaterialEntry>> first =
                x3db::parse_material_script(*bytes);
            session.report(path, first.diags);
            if (!first.ok())
                break;
            std::string text = x3db::serialize_material_script(*first);
            x3db::Result<std::vector<x3db::MaterialEntry>> second =
                x3db::parse_material_script(text);
            session.report(path, second.diags);
            if (second.ok() && materials_equal(*first, *second) &&
                x3db::serialize_material_script(*second) == text)
                std::cout << path.string() << ": roundtrip OK\n";
            else
                session.fail(path, "roundtrip-mismatch",
                             "material script does not survive serialize/parse");
            break;
        }
        case InputKind::Compositor: {
            x3db::Result<std::vector<x3db::CompositorScript>> first =
                x3db::parse_compositor_script(*bytes);
            session.report(path, first.diags);
            if (!first.ok())
                break;
            std::string text = x3db::serialize_compositor_script(*first);
            x3db::Result<std::vector<x3db::CompositorScript>> second =
                x3db::parse_compositor_script(text);
            session.report(path, second.diags);
            if (second.ok() && x3db::serialize_compositor_script(*second) == text)
                std::cout << path.string() << ": roundtrip OK\n";
            else
                session.fail(path, "roundtrip-mismatch",
                             "compositor script does not survive serialize/parse");
            break;
        }
        default:
            session.fail(path, "unsupported-input", "unrecognized input format");
            break;
        }
    }
    return session.exit_code(strict);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bidirectional converter between X3D scenes and OGRE artifacts"};
    app.require_subcommand(1);

    std::vector<std::string> inputs;
    bool to_ogre = false;
    bool to_x3d = false;
    std::string out_dir = ".";
    RegistryOptions registry;
    x3db::MaterialOptions material;
    bool strict = false;
    bool suggest = false;

    CLI::App* convert = app.add_subcommand("convert", "Translate between the two ecosystems");
    convert->add_option("inputs", inputs, "Input files")->required();
    convert->add_flag("--to-ogre", to_ogre, "X3D documents to OGRE artifacts");
    convert->add_flag("--to-x3d", to_x3d, "OGRE artifacts to one X3D document");
    convert->add_option("--out", out_dir, "Output directory");
    convert->add_option("--registry", registry.directory,
                        "Directory scanned for external resource names");
    convert->add_option("--manifest", registry.manifest,
                        "File listing external resource names");
    convert->add_flag("--recursive", registry.recursive, "Scan the registry recursively");
    convert->add_flag("--strict", strict, "Treat warnings as failures");
    convert->add_option("--shininess-scale", material.shininess_scale,
                        "Multiplier from X3D shininess to OGRE exponent");
    convert->add_flag("--spec-ambient", material.spec_ambient,
                      "Modulate ambient by the diffuse color instead of replicating the grey");

    CLI::App* validate = app.add_subcommand("validate", "Parse and check inputs");
    validate->add_option("inputs", inputs, "Input files")->required();
    validate->add_flag("--suggest-order", suggest,
                       "Print a valid pass order for rejected compositors");
    validate->add_flag("--strict", strict, "Treat warnings as failures");

    CLI::App* inspect = app.add_subcommand("inspect", "Summarize inputs");
    inspect->add_option("inputs", inputs, "Input files")->required();
    inspect->add_flag("--strict", strict, "Treat warnings as failures");

    CLI::App* roundtrip =
        app.add_subcommand("roundtrip", "Check that inputs survive a conversion cycle");
    roundtrip->add_option("inputs", inputs, "Input files")->required();
    roundtrip->add_option("--registry", registry.directory,
                          "Directory scanned for external resource names");
    roundtrip->add_option("--manifest", registry.manifest,
                          "File listing external resource names");
    roundtrip->add_flag("--recursive", registry.recursive, "Scan the registry recursively");
    roundtrip->add_flag("--strict", strict, "Treat warnings as failures");
    roundtrip->add_option("--shininess-scale", material.shininess_scale,
                          "Multiplier from X3D shininess to OGRE exponent");
    roundtrip->add_flag("--spec-ambient", material.spec_ambient,
                        "Modulate ambient by the diffuse color instead of replicating the grey");

    CLI11_PARSE(app, argc, argv);

    if (convert->parsed()) {
        if (to_ogre == to_x3d) {
            std::cerr << "error unsupported-input :0 convert needs exactly one of --to-ogre "
                         "and --to-x3d\n";
            return 1;
        }
        return run_convert(inputs, to_x3d, out_dir, registry, material, strict);
    }
    if (validate->parsed())
        return run_validate(inputs, suggest, strict);
    if (inspect->parsed())
        return run_inspect(inputs, strict);
    return run_roundtrip(inputs, registry, material, strict);
}
