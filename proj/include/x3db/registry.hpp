#pragma once

// External OGRE resource pool: names of meshes, materials, compositors and
// shaders provided outside the current document. USE fallback consults it
// only after the in-document DEF lookup fails.

#include <filesystem>
#include <set>
#include <string>

#include "x3db/diagnostics.hpp"

namespace x3db {

struct ResourceRegistry {
    std::set<std::string> mesh_names;
    std::set<std::string> material_names;
    std::set<std::string> compositor_names;
    std::set<std::string> shader_names;

    bool empty() const {
        return mesh_names.empty() && material_names.empty() && compositor_names.empty() &&
               shader_names.empty();
    }

    void merge(const ResourceRegistry& other);
};

/// Scans for *.mesh.xml (registered minus the .xml suffix), *.material
/// (parsed for material/hlms names) and *.compositor files. Non-recursive
/// unless asked.
Result<ResourceRegistry> load_registry_from_directory(const std::filesystem::path& dir,
                                                      bool recursive = false);

/// One name per line, `#` comments. Optional `mesh:`, `material:`,
/// `compositor:` or `shader:` prefix; unprefixed names ending in ".mesh"
/// count as meshes, anything else as materials.
Result<ResourceRegistry> load_registry_from_manifest(const std::filesystem::path& file);

} // namespace x3db
