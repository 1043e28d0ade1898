#pragma once

// Semantic mapping between the X3D document model and the OGRE formats:
// classic materials to technique/pass scripts, PhysicalMaterial and
// CustomAppearance to hlms blocks, Shape/IndexedTriangleSet sets to XML
// meshes with shared-vertex preservation, plus the USE redirection of
// unresolved references into an external resource registry.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "x3db/animation.hpp"
#include "x3db/compositor.hpp"
#include "x3db/diagnostics.hpp"
#include "x3db/mesh.hpp"
#include "x3db/registry.hpp"
#include "x3db/script.hpp"
#include "x3db/transform.hpp"
#include "x3db/x3d.hpp"

namespace x3db {

struct MaterialOptions {
    // shininess_ogre = trunc(shininess_x3d * shininess_scale)
    double shininess_scale = 128.0;
    // ambient = ambientIntensity * diffuseColor instead of the replicated
    // grey (i, i, i)
    bool spec_ambient = false;
};

struct ClassicMaterial {
    double ambient_intensity = 0.2;
    Eigen::Vector3d diffuse{0.8, 0.8, 0.8};
    Eigen::Vector3d specular{0.0, 0.0, 0.0};
    Eigen::Vector3d emissive{0.0, 0.0, 0.0};
    double shininess = 0.2;
    double transparency = 0.0;
};

struct AppearanceIR {
    ClassicMaterial material;
    std::vector<std::string> textures; // ImageTexture urls in child order
};

OgreMaterial x3d_to_ogre_material(const AppearanceIR& appearance, const std::string& name,
                                  const MaterialOptions& options = {});

/// Uses the first technique/pass; extra ones warn `technique-collapsed`.
/// ambientIntensity comes back as the mean of the ambient components.
Result<AppearanceIR> ogre_to_x3d_appearance(const OgreMaterial& material,
                                            const MaterialOptions& options = {});

struct ShapeGeometry {
    std::vector<Eigen::Vector3d> points;
    std::vector<Eigen::Vector3d> normals;         // empty or one per point
    std::vector<std::array<double, 2>> texcoords; // empty or one per point
    std::vector<uint32_t> indices;                // flat triangle list
};

struct ShapeIR {
    std::string name; // Shape DEF, may be empty
    std::optional<AppearanceIR> appearance;
    std::string material_name;      // DEF or external name; empty generates one
    bool material_external = false; // defined elsewhere, the mesh only references it
    ShapeGeometry geometry;
    int share_group = -1; // shapes with the same id share one vertex buffer
};

struct MeshTranslation {
    OgreMesh mesh;
    std::vector<MaterialEntry> materials;
};

/// One submesh per shape in order. Shapes of the first share group become
/// the shared vertex buffer; further groups are duplicated with a
/// `sharing-collapsed` warning. Anonymous materials are named
/// `<mesh_name>/mat<index>`, dodging the reserved (DEF) names.
Result<MeshTranslation> x3d_to_ogre_mesh(const std::vector<ShapeIR>& shapes,
                                         const std::string& mesh_name,
                                         const std::set<std::string>& reserved_names = {},
                                         const MaterialOptions& options = {});

/// One shape per submesh; shared geometry becomes a common share group whose
/// buffer the first shape defines. Material names not in known_materials are
/// marked external; when the registry lacks them too, warns
/// `unresolved-material` but still emits the reference.
Result<std::vector<ShapeIR>> ogre_mesh_to_x3d(const OgreMesh& mesh,
                                              const ResourceRegistry& registry,
                                              const std::set<std::string>& known_materials = {});

/// PhysicalMaterial attributes forward to a PBS hlms block by name:
/// albedoFactor to diffuse, roughnessFactor to roughness, metallicFactor to
/// metallic, everything else verbatim. Values stay raw tokens.
HlmsMaterial physical_material_to_hlms(const X3dNode& material, const std::string& name);

/// CustomAppearance type must name a ComposedShader DEF or a registry
/// shader; field children become properties, texture children map their
/// containerField to the url.
Result<HlmsMaterial> custom_appearance_to_hlms(const X3dNode& appearance, const std::string& name,
                                               const SceneDocument& doc,
                                               const ResourceRegistry& registry);

enum class ResourceSlot { Shape, Appearance, Geometry };

struct Resolution {
    bool internal = false;
    const X3dNode* node = nullptr; // set when internal
    std::string kind;              // "mesh" or "material" when external
    std::string name;
};

/// Strictly internal-first: a DEF wins over any registry entry.
Result<Resolution> resolve_resource(const std::string& use_name, const SceneDocument& doc,
                                    const ResourceRegistry& registry, ResourceSlot slot);

struct SceneNodeReport {
    std::string def_name; // may be empty
    TrsNodePair pair;
};

struct TranslationReport {
    std::string base_name;
    std::optional<OgreMesh> mesh;
    std::vector<MaterialEntry> materials;
    std::vector<CompositorScript> compositors;
    std::vector<std::pair<std::string, std::string>> name_map;      // DEF, OGRE name
    std::vector<std::pair<std::string, std::string>> external_refs; // kind, name
    std::vector<SceneNodeReport> scene_nodes;
    AnimationMap animation;
    DiagnosticList diags;
};

/// Full x3d-to-ogre pipeline over one document: resolves USE references,
/// rewrites routes, maps animation, decomposes transforms, translates
/// shapes, materials and compositors.
TranslationReport translate_scene(const SceneDocument& doc, const std::string& base_name,
                                  const ResourceRegistry& registry = {},
                                  const MaterialOptions& options = {});

/// Inverse driver: builds an X3D scene from parsed OGRE artifacts. Classic
/// materials become DEF'd Appearances, hlms blocks CustomAppearances with a
/// ComposedShader stub per shader type, the mesh a Shape (or Group of
/// Shapes) referencing them by USE, compositor scripts Compositor nodes plus
/// a Viewpoint listing the chain.
Result<SceneDocument> ogre_to_x3d_scene(const std::string& base_name, const OgreMesh* mesh,
                                        const std::vector<MaterialEntry>& materials,
                                        const std::vector<CompositorScript>& compositors,
                                        const ResourceRegistry& registry = {},
                                        const MaterialOptions& options = {});

} // namespace x3db
