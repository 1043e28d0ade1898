#include "x3db/registry.hpp"

#include <fstream>
#include <sstream>

#include "x3db/script.hpp"

namespace x3db {

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0;
}

void register_file(const std::filesystem::path& path, ResourceRegistry& registry,
                   DiagnosticList& diags) {
    std::string filename = path.filename().string();
    if (ends_with(filename, ".mesh.xml")) {
        registry.mesh_names.insert(filename.substr(0, filename.size() - 4));
        return;
    }
    if (ends_with(filename, ".material")) {
        std::optional<std::string> text = read_file(path);
        if (!text) {
            diags.warning(0, 0, "unresolved-use", "cannot read registry file " + path.string());
            return;
        }
        Result<std::vector<MaterialEntry>> entries = parse_material_script(*text);
        if (!entries.ok()) {
            diags.warning(0, 0, "script-syntax",
                          "registry file " + path.string() + " does not parse; skipped");
            return;
        }
        for (const MaterialEntry& entry : *entries.value) {
            if (const OgreMaterial* material = std::get_if<OgreMaterial>(&entry)) {
                registry.material_names.insert(material->name);
            } else {
                const HlmsMaterial& hlms = std::get<HlmsMaterial>(entry);
                registry.material_names.insert(hlms.name);
                registry.shader_names.insert(hlms.shader_type);
            }
        }
        return;
    }
    if (ends_with(filename, ".compositor")) {
        std::optional<std::string> text = read_file(path);
        if (!text) {
            diags.warning(0, 0, "unresolved-use", "cannot read registry file " + path.string());
            return;
        }
        Result<std::vector<CompositorScript>> scripts = parse_compositor_script(*text);
        if (!scripts.ok()) {
            diags.warning(0, 0, "script-syntax",
                          "registry file " + path.string() + " does not parse; skipped");
            return;
        }
        for (const CompositorScript& script : *scripts.value)
            registry.compositor_names.insert(script.name);
        return;
    }
}

} // namespace

void ResourceRegistry::merge(const ResourceRegistry& other) {
    mesh_names.insert(other.mesh_names.begin(), other.mesh_names.end());
    material_names.insert(other.material_names.begin(), other.material_names.end());
    compositor_names.insert(other.compositor_names.begin(), other.compositor_names.end());
    shader_names.insert(other.shader_names.begin(), other.shader_names.end());
}

Result<ResourceRegistry> load_registry_from_directory(const std::filesystem::path& dir,
                                                      bool recursive) {
    Result<ResourceRegistry> result;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        result.diags.error(0, 0, "unresolved-use",
                           "registry path is not a directory: " + dir.string());
        return result;
    }
    ResourceRegistry registry;
    if (recursive) {
        for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
             !ec && it != std::filesystem::recursive_directory_iterator(); it.increment(ec))
            if (it->is_regular_file())
                register_file(it->path(), registry, result.diags);
    } else {
        for (auto it = std::filesystem::directory_iterator(dir, ec);
             !ec && it != std::filesystem::directory_iterator(); it.increment(ec))
            if (it->is_regular_file())
                register_file(it->path(), registry, result.diags);
    }
    result.value = std::move(registry);
    return result;
}

Result<ResourceRegistry> load_registry_from_manifest(const std::filesystem::path& file) {
    Result<ResourceRegistry> result;
    std::optional<std::string> text = read_file(file);
    if (!text) {
        result.diags.error(0, 0, "unresolved-use", "cannot read manifest " + file.string());
        return result;
    }
    ResourceRegistry registry;
    std::istringstream lines(*text);
    std::string line;
    while (std::getline(lines, line)) {
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
            continue;
        size_t end = line.find_last_not_of(" \t\r");
        std::string name = line.substr(begin, end - begin + 1);
        if (name.empty() || name[0] == '#')
            continue;
        auto prefixed = [&name](std::string_view prefix, std::set<std::string>& names) {
            if (name.rfind(prefix, 0) != 0)
                return false;
            std::string rest = name.substr(prefix.size());
            size_t b = rest.find_first_not_of(" \t");
            if (b != std::string::npos)
                names.insert(rest.substr(b));
            return true;
        };
        if (prefixed("mesh:", registry.mesh_names) ||
            prefixed("material:", registry.material_names) ||
            prefixed("compositor:", registry.compositor_names) ||
            prefixed("shader:", registry.shader_names))
            continue;
        if (ends_with(name, ".mesh"))
            registry.mesh_names.insert(name);
        else
            registry.material_names.insert(name);
    }
    result.value = std::move(registry);
    return result;
}

} // namespace x3db
