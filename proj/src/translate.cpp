#include "x3db/translate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "diagnostics_impl.hpp"
#include "x3db/routes.hpp"

namespace x3db {

namespace {

using detail::format_double;

bool vec_equal(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return a.x() == b.x() && a.y() == b.y() && a.z() == b.z();
}

std::string format_vec(const Eigen::Vector3d& v) {
    return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

} // namespace

OgreMaterial x3d_to_ogre_material(const AppearanceIR& appearance, const std::string& name,
                                  const MaterialOptions& options) {
    const ClassicMaterial& m = appearance.material;
    OgrePass pass;
    if (options.spec_ambient)
        pass.ambient = (m.ambient_intensity * m.diffuse).eval();
    else
        pass.ambient = Eigen::Vector3d::Constant(m.ambient_intensity);
    pass.diffuse = m.diffuse;
    pass.specular = m.specular;
    pass.shininess = std::trunc(m.shininess * options.shininess_scale);
    if (!vec_equal(m.emissive, Eigen::Vector3d::Zero()))
        pass.emissive = m.emissive;
    if (m.transparency > 0.0) {
        pass.diffuse_alpha = 1.0 - m.transparency;
        pass.scene_blend = "alpha_blend";
    }
    pass.texture_units = appearance.textures;

    OgreMaterial material;
    material.name = name;
    material.techniques.emplace_back();
    material.techniques.back().passes.push_back(std::move(pass));
    return material;
}

Result<AppearanceIR> ogre_to_x3d_appearance(const OgreMaterial& material,
                                            const MaterialOptions& options) {
    Result<AppearanceIR> result;
    if (material.techniques.empty() || material.techniques.front().passes.empty()) {
        result.diags.error(0, 0, "empty-material",
                           "material '" + material.name + "' has no technique with a pass");
        return result;
    }
    if (material.techniques.size() > 1 || material.techniques.front().passes.size() > 1)
        result.diags.warning(0, 0, "technique-collapsed",
                             "material '" + material.name +
                                 "' has extra techniques or passes; only the first pass maps");

    const OgrePass& pass = material.techniques.front().passes.front();
    AppearanceIR ir;
    if (pass.ambient)
        ir.material.ambient_intensity = pass.ambient->mean();
    if (pass.diffuse)
        ir.material.diffuse = *pass.diffuse;
    if (pass.specular) {
        ir.material.specular = *pass.specular;
        ir.material.shininess = pass.shininess / options.shininess_scale;
    }
    if (pass.emissive)
        ir.material.emissive = *pass.emissive;
    else
        ir.material.emissive = Eigen::Vector3d::Zero();
    if (pass.diffuse_alpha)
        ir.material.transparency = 1.0 - *pass.diffuse_alpha;
    ir.textures = pass.texture_units;
    result.value = std::move(ir);
    return result;
}

namespace {

std::string entry_name(const MaterialEntry& entry) {
    if (const OgreMaterial* material = std::get_if<OgreMaterial>(&entry))
        return material->name;
    return std::get<HlmsMaterial>(entry).name;
}

void add_material_once(std::vector<MaterialEntry>& list, MaterialEntry entry) {
    std::string name = entry_name(entry);
    for (const MaterialEntry& existing : list)
        if (entry_name(existing) == name)
            return;
    list.push_back(std::move(entry));
}

std::string generated_material_name(const std::string& mesh_name, size_t index,
                                    const std::set<std::string>& reserved,
                                    const std::set<std::string>& used) {
    std::string base = mesh_name + "/mat" + std::to_string(index);
    std::string name = base;
    for (int k = 2; reserved.count(name) || used.count(name); ++k)
        name = base + "_" + std::to_string(k);
    return name;
}

bool geometry_arrays_equal(const ShapeGeometry& a, const ShapeGeometry& b) {
    if (a.points.size() != b.points.size() || a.normals.size() != b.normals.size() ||
        a.texcoords != b.texcoords)
        return false;
    for (size_t i = 0; i < a.points.size(); ++i)
        if (!vec_equal(a.points[i], b.points[i]))
            return false;
    for (size_t i = 0; i < a.normals.size(); ++i)
        if (!vec_equal(a.normals[i], b.normals[i]))
            return false;
    return true;
}

VertexData interleave_geometry(const ShapeGeometry& g) {
    VertexData data;
    data.vertex_count = g.points.size();
    VertexBuffer buffer;
    buffer.has_positions = true;
    buffer.has_normals = !g.normals.empty();
    buffer.texcoord_sets = g.texcoords.empty() ? 0 : 1;
    buffer.vertices.reserve(g.points.size());
    for (size_t i = 0; i < g.points.size(); ++i) {
        MeshVertex vertex;
        vertex.position = g.points[i];
        if (buffer.has_normals)
            vertex.normal = g.normals[i];
        if (buffer.texcoord_sets)
            vertex.texcoords.push_back(g.texcoords[i]);
        buffer.vertices.push_back(std::move(vertex));
    }
    data.buffers.push_back(std::move(buffer));
    return data;
}

bool check_shape_geometry(const ShapeGeometry& g, size_t index, DiagnosticList& diags) {
    if (g.indices.size() % 3 != 0) {
        diags.error(0, 0, "count-mismatch",
                    "shape " + std::to_string(index) + " has " + std::to_string(g.indices.size()) +
                        " indices, not a multiple of 3");
        return false;
    }
    if (!g.normals.empty() && g.normals.size() != g.points.size()) {
        diags.error(0, 0, "attribute-count-mismatch",
                    "shape " + std::to_string(index) + " has " + std::to_string(g.normals.size()) +
                        " normals for " + std::to_string(g.points.size()) + " points");
        return false;
    }
    if (!g.texcoords.empty() && g.texcoords.size() != g.points.size()) {
        diags.error(0, 0, "attribute-count-mismatch",
                    "shape " + std::to_string(index) + " has " +
                        std::to_string(g.texcoords.size()) + " texture coordinates for " +
                        std::to_string(g.points.size()) + " points");
        return false;
    }
    for (uint32_t idx : g.indices) {
        if (idx >= g.points.size()) {
            diags.error(0, 0, "index-out-of-range",
                        "shape " + std::to_string(index) + " index " + std::to_string(idx) +
                            " exceeds its " + std::to_string(g.points.size()) + " points");
            return false;
        }
    }
    return true;
}

} // namespace

Result<MeshTranslation> x3d_to_ogre_mesh(const std::vector<ShapeIR>& shapes,
                                         const std::string& mesh_name,
                                         const std::set<std::string>& reserved_names,
                                         const MaterialOptions& options) {
    Result<MeshTranslation> result;
    MeshTranslation out;

    for (size_t i = 0; i < shapes.size(); ++i)
        if (!check_shape_geometry(shapes[i].geometry, i, result.diags))
            return result;

    // pick the share group that becomes the one shared vertex buffer: the
    // first (by leading shape) whose members carry identical vertex arrays
    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < shapes.size(); ++i)
        if (shapes[i].share_group >= 0)
            groups[shapes[i].share_group].push_back(i);

    std::vector<std::pair<size_t, int>> candidates; // leading shape, group id
    for (const auto& [id, members] : groups)
        if (members.size() >= 2)
            candidates.emplace_back(members.front(), id);
    std::sort(candidates.begin(), candidates.end());

    int shared_id = -1;
    for (const auto& [first, id] : candidates) {
        const std::vector<size_t>& members = groups.at(id);
        bool uniform = std::all_of(members.begin(), members.end(), [&](size_t m) {
            return geometry_arrays_equal(shapes[m].geometry, shapes[members.front()].geometry);
        });
        if (!uniform) {
            result.diags.warning(0, 0, "sharing-collapsed",
                                 "shapes sharing one Coordinate differ in other vertex "
                                 "attributes; their buffers are duplicated");
            continue;
        }
        if (shared_id == -1) {
            shared_id = id;
        } else {
            result.diags.warning(0, 0, "sharing-collapsed",
                                 "the mesh format holds a single shared buffer; an additional "
                                 "share group starting at shape " + std::to_string(first) +
                                     " is duplicated per submesh");
        }
    }

    if (shared_id >= 0)
        out.mesh.shared_geometry =
            interleave_geometry(shapes[groups.at(shared_id).front()].geometry);

    std::set<std::string> used_names(reserved_names.begin(), reserved_names.end());
    std::set<std::string> emitted;
    for (size_t i = 0; i < shapes.size(); ++i) {
        const ShapeIR& shape = shapes[i];
        Submesh submesh;
        submesh.use_shared_vertices = shape.share_group >= 0 && shape.share_group == shared_id;
        if (!submesh.use_shared_vertices)
            submesh.geometry = interleave_geometry(shape.geometry);
        for (size_t k = 0; k + 2 < shape.geometry.indices.size(); k += 3)
            submesh.faces.push_back({shape.geometry.indices[k], shape.geometry.indices[k + 1],
                                     shape.geometry.indices[k + 2]});

        std::string material_name = shape.material_name;
        if (material_name.empty()) {
            material_name = generated_material_name(mesh_name, i, reserved_names, used_names);
            used_names.insert(material_name);
        }
        submesh.material = material_name;
        if (!shape.material_external && !emitted.count(material_name)) {
            AppearanceIR appearance = shape.appearance.value_or(AppearanceIR{});
            add_material_once(out.materials,
                              x3d_to_ogre_material(appearance, material_name, options));
            emitted.insert(material_name);
        }
        out.mesh.submeshes.push_back(std::move(submesh));
    }

    result.value = std::move(out);
    return result;
}

Result<std::vector<ShapeIR>> ogre_mesh_to_x3d(const OgreMesh& mesh,
                                              const ResourceRegistry& registry,
                                              const std::set<std::string>& known_materials) {
    Result<std::vector<ShapeIR>> result;
    std::vector<ShapeIR> shapes;
    if (mesh.submeshes.empty())
        result.diags.warning(0, 0, "empty-mesh", "mesh has no submeshes");

    auto extract = [&](const VertexData& data, ShapeGeometry& g) {
        for (const VertexBuffer& buffer : data.buffers) {
            if (buffer.has_positions && g.points.empty())
                for (const MeshVertex& v : buffer.vertices)
                    g.points.push_back(v.position);
            if (buffer.has_normals && g.normals.empty())
                for (const MeshVertex& v : buffer.vertices)
                    g.normals.push_back(v.normal);
            if (buffer.texcoord_sets > 0 && g.texcoords.empty()) {
                if (buffer.texcoord_sets > 1)
                    result.diags.warning(0, 0, "texcoord-dropped",
                                         "only the first texture coordinate set maps to "
                                         "TextureCoordinate");
                for (const MeshVertex& v : buffer.vertices)
                    g.texcoords.push_back(v.texcoords.front());
            }
        }
    };

    for (size_t i = 0; i < mesh.submeshes.size(); ++i) {
        const Submesh& submesh = mesh.submeshes[i];
        ShapeIR shape;
        const VertexData* data = nullptr;
        if (submesh.use_shared_vertices) {
            data = &*mesh.shared_geometry;
            shape.share_group = 0;
        } else if (submesh.geometry) {
            data = &*submesh.geometry;
        }
        if (data)
            extract(*data, shape.geometry);
        for (const auto& face : submesh.faces) {
            shape.geometry.indices.push_back(face[0]);
            shape.geometry.indices.push_back(face[1]);
            shape.geometry.indices.push_back(face[2]);
        }
        shape.material_name = submesh.material;
        if (!submesh.material.empty() && !known_materials.count(submesh.material)) {
            shape.material_external = true;
            if (!registry.material_names.count(submesh.material))
                result.diags.warning(0, 0, "unresolved-material",
                                     "submesh " + std::to_string(i) + " references material '" +
                                         submesh.material +
                                         "' that is neither translated nor in the registry");
        }
        shapes.push_back(std::move(shape));
    }
    result.value = std::move(shapes);
    return result;
}

HlmsMaterial physical_material_to_hlms(const X3dNode& material, const std::string& name) {
    HlmsMaterial out;
    out.name = name;
    out.shader_type = "PBS";
    for (const auto& [key, value] : material.attributes) {
        if (key == "containerField")
            continue;
        std::string mapped = key;
        if (key == "albedoFactor")
            mapped = "diffuse";
        else if (key == "roughnessFactor")
            mapped = "roughness";
        else if (key == "metallicFactor")
            mapped = "metallic";
        ScriptProperty prop;
        prop.key = std::move(mapped);
        for (std::string_view token : detail::split_fields(value))
            prop.values.emplace_back(token);
        out.properties.push_back(std::move(prop));
    }
    return out;
}

Result<HlmsMaterial> custom_appearance_to_hlms(const X3dNode& appearance, const std::string& name,
                                               const SceneDocument& doc,
                                               const ResourceRegistry& registry) {
    Result<HlmsMaterial> result;
    const std::string* type = appearance.attribute("type");
    if (!type || type->empty()) {
        result.diags.error(appearance.line, appearance.column, "unknown-shader",
                           "CustomAppearance has no shader type");
        return result;
    }
    const X3dNode* def = doc.find_def(*type);
    bool internal = def && def->kind == NodeKind::ComposedShader;
    if (!internal && !registry.shader_names.count(*type)) {
        result.diags.error(appearance.line, appearance.column, "unknown-shader",
                           "shader '" + *type +
                               "' names neither a ComposedShader DEF nor a registry shader");
        return result;
    }

    HlmsMaterial material;
    material.name = name;
    material.shader_type = *type;
    for (const X3dNode& child : appearance.children) {
        if (child.kind == NodeKind::Field) {
            const std::string* field_name = child.attribute("name");
            const std::string* value = child.attribute("value");
            if (!field_name || field_name->empty()) {
                result.diags.warning(child.line, child.column, "bad-field",
                                     "field without a name ignored");
                continue;
            }
            ScriptProperty prop;
            prop.key = *field_name;
            if (value)
                for (std::string_view token : detail::split_fields(*value))
                    prop.values.emplace_back(token);
            material.properties.push_back(std::move(prop));
        } else if (child.kind == NodeKind::ImageTexture ||
                   child.kind == NodeKind::RenderedTexture) {
            const std::string* slot = child.attribute("containerField");
            ScriptProperty prop;
            prop.key = slot && !slot->empty() ? *slot : "texture";
            if (child.kind == NodeKind::RenderedTexture) {
                prop.values.push_back(child.is_use() ? child.use_name : child.def_name);
            } else if (const std::string* url = child.attribute("url")) {
                prop.values = parse_mfstring(*url);
            }
            material.properties.push_back(std::move(prop));
        } else {
            result.diags.warning(child.line, child.column, "unknown-node",
                                 "node inside CustomAppearance ignored");
        }
    }
    result.value = std::move(material);
    return result;
}

Result<Resolution> resolve_resource(const std::string& use_name, const SceneDocument& doc,
                                    const ResourceRegistry& registry, ResourceSlot slot) {
    Result<Resolution> result;
    Resolution resolution;
    resolution.name = use_name;
    if (const X3dNode* def = doc.find_def(use_name)) {
        resolution.internal = true;
        resolution.node = def;
        result.value = std::move(resolution);
        return result;
    }
    const bool wants_material = slot == ResourceSlot::Appearance;
    const std::set<std::string>& names =
        wants_material ? registry.material_names : registry.mesh_names;
    if (names.count(use_name)) {
        resolution.kind = wants_material ? "material" : "mesh";
        result.value = std::move(resolution);
        return result;
    }
    result.diags.error(0, 0, "unresolved-use",
                       "USE '" + use_name + "' resolves neither to a DEF nor to a registry " +
                           (wants_material ? "material" : "mesh"));
    return result;
}

// scene driver

namespace {

struct SceneWalker {
    const SceneDocument& doc;
    const ResourceRegistry& registry;
    const MaterialOptions& options;
    TranslationReport& report;

    std::vector<ShapeIR> shapes;
    std::vector<std::string> shape_coord_names; // Coordinate DEF per shape, may be empty
    size_t shape_counter = 0;

    double scalar_field(const X3dNode& node, std::string_view name, double fallback) {
        if (!node.attribute(name))
            return fallback;
        std::optional<double> v = attr_float(node, name);
        if (!v) {
            report.diags.warning(node.line, node.column, "bad-field",
                                 "attribute '" + std::string(name) + "' is not a number");
            return fallback;
        }
        return *v;
    }

    Eigen::Vector3d color_field(const X3dNode& node, std::string_view name,
                                const Eigen::Vector3d& fallback) {
        if (!node.attribute(name))
            return fallback;
        std::vector<double> v = attr_floats(node, name);
        if (v.size() != 3) {
            report.diags.warning(node.line, node.column, "bad-field",
                                 "attribute '" + std::string(name) + "' needs 3 components");
            return fallback;
        }
        return Eigen::Vector3d(v[0], v[1], v[2]);
    }

    AppearanceIR appearance_ir(const X3dNode& appearance) {
        AppearanceIR ir;
        const X3dNode* material = appearance.first_child(NodeKind::Material);
        if (material && material->is_use())
            material = doc.find_def(material->use_name);
        if (material) {
            ir.material.ambient_intensity = scalar_field(*material, "ambientIntensity", 0.2);
            ir.material.diffuse =
                color_field(*material, "diffuseColor", Eigen::Vector3d(0.8, 0.8, 0.8));
            ir.material.specular =
                color_field(*material, "specularColor", Eigen::Vector3d::Zero());
            ir.material.emissive =
                color_field(*material, "emissiveColor", Eigen::Vector3d::Zero());
            ir.material.shininess = scalar_field(*material, "shininess", 0.2);
            ir.material.transparency = scalar_field(*material, "transparency", 0.0);
        }
        for (const X3dNode& child : appearance.children) {
            if (child.kind != NodeKind::ImageTexture)
                continue;
            if (const std::string* url = child.attribute("url")) {
                std::vector<std::string> urls = parse_mfstring(*url);
                if (!urls.empty())
                    ir.textures.push_back(urls.front());
            }
        }
        return ir;
    }

    std::vector<Eigen::Vector3d> vec3_list(const X3dNode& node, std::string_view attr_name,
                                           bool& ok) {
        std::vector<Eigen::Vector3d> out;
        ok = true;
        const std::string* raw = node.attribute(attr_name);
        if (!raw)
            return out;
        bool all_valid = true;
        std::vector<double> values = parse_floats(*raw, &all_valid);
        if (!all_valid) {
            report.diags.error(node.line, node.column, "bad-field",
                               "attribute '" + std::string(attr_name) +
                                   "' holds non-numeric values");
            ok = false;
            return out;
        }
        if (values.size() % 3 != 0) {
            report.diags.error(node.line, node.column, "count-mismatch",
                               "attribute '" + std::string(attr_name) + "' holds " +
                                   std::to_string(values.size()) +
                                   " floats, not a multiple of 3");
            ok = false;
            return out;
        }
        for (size_t i = 0; i + 2 < values.size(); i += 3)
            out.emplace_back(values[i], values[i + 1], values[i + 2]);
        return out;
    }

    bool geometry_from_triangle_set(const X3dNode& its, ShapeGeometry& g,
                                    std::string& coord_name) {
        if (const std::string* raw = its.attribute("coordIndex")) {
            for (std::string_view token : detail::split_fields(*raw)) {
                std::optional<long long> v = detail::parse_int(token);
                if (!v || *v < 0) {
                    report.diags.error(its.line, its.column, "invalid-index",
                                       *v && *v == -1
                                           ? "coordIndex sentinel -1 is not permitted in "
                                             "IndexedTriangleSet"
                                           : "coordIndex holds a value that is not a "
                                             "nonnegative integer: " + std::string(token));
                    return false;
                }
                g.indices.push_back(static_cast<uint32_t>(*v));
            }
        }
        const X3dNode* coordinate = nullptr;
        const X3dNode* normal = nullptr;
        const X3dNode* texcoord = nullptr;
        for (const X3dNode& child : its.children) {
            if (child.kind == NodeKind::Coordinate && !coordinate)
                coordinate = &child;
            else if (child.kind == NodeKind::Normal && !normal)
                normal = &child;
            else if (child.kind == NodeKind::TextureCoordinate && !texcoord)
                texcoord = &child;
        }
        if (coordinate) {
            const X3dNode* source = coordinate;
            if (coordinate->is_use()) {
                source = doc.find_def(coordinate->use_name);
                if (!source || source->kind != NodeKind::Coordinate) {
                    report.diags.error(coordinate->line, coordinate->column, "unresolved-use",
                                       "Coordinate USE '" + coordinate->use_name +
                                           "' has no matching DEF");
                    return false;
                }
                coord_name = coordinate->use_name;
            } else if (!coordinate->def_name.empty()) {
                coord_name = coordinate->def_name;
            }
            bool ok = true;
            g.points = vec3_list(*source, "point", ok);
            if (!ok)
                return false;
        }
        if (normal) {
            const X3dNode* source = normal;
            if (normal->is_use()) {
                source = doc.find_def(normal->use_name);
                if (!source || source->kind != NodeKind::Normal) {
                    report.diags.error(normal->line, normal->column, "unresolved-use",
                                       "Normal USE '" + normal->use_name +
                                           "' has no matching DEF");
                    return false;
                }
            }
            bool ok = true;
            g.normals = vec3_list(*source, "vector", ok);
            if (!ok)
                return false;
        }
        if (texcoord) {
            const std::string* raw = texcoord->attribute("point");
            if (raw) {
                bool all_valid = true;
                std::vector<double> values = parse_floats(*raw, &all_valid);
                if (!all_valid || values.size() % 2 != 0) {
                    report.diags.error(texcoord->line, texcoord->column, "count-mismatch",
                                       "TextureCoordinate point needs pairs of floats");
                    return false;
                }
                for (size_t i = 0; i + 1 < values.size(); i += 2)
                    g.texcoords.push_back({values[i], values[i + 1]});
            }
        }
        return true;
    }

    std::string hlms_name_for(const X3dNode& node) {
        if (!node.def_name.empty())
            return node.def_name;
        return generated_material_name(report.base_name, shape_counter, {}, {});
    }

    void handle_shape(const X3dNode& shape) {
        ++shape_counter;
        if (shape.is_use()) {
            Result<Resolution> res =
                resolve_resource(shape.use_name, doc, registry, ResourceSlot::Shape);
            report.diags.merge(res.diags);
            if (!res.ok())
                return;
            if (res->internal) {
                if (res->node->kind == NodeKind::Shape)
                    handle_full_shape(*res->node);
                else
                    report.diags.error(shape.line, shape.column, "unresolved-use",
                                       "Shape USE '" + shape.use_name +
                                           "' points at a different node kind");
            } else {
                report.external_refs.emplace_back("mesh", shape.use_name);
            }
            return;
        }
        handle_full_shape(shape);
    }

    void handle_full_shape(const X3dNode& shape) {
        const X3dNode* its = nullptr;
        const X3dNode* appearance = nullptr;
        const X3dNode* custom = nullptr;
        const X3dNode* redirect = nullptr;
        for (const X3dNode& child : shape.children) {
            if (child.kind == NodeKind::Appearance && !appearance)
                appearance = &child;
            else if (child.kind == NodeKind::CustomAppearance && !custom)
                custom = &child;
            else if (child.kind == NodeKind::IndexedTriangleSet && !its)
                its = &child;
            else if (child.kind == NodeKind::Unknown && child.element_name == "Geometry" &&
                     child.is_use() && !redirect)
                redirect = &child;
        }

        if (redirect) {
            Result<Resolution> res =
                resolve_resource(redirect->use_name, doc, registry, ResourceSlot::Geometry);
            report.diags.merge(res.diags);
            if (!res.ok())
                return;
            if (res->internal) {
                if (res->node->kind == NodeKind::IndexedTriangleSet)
                    its = res->node;
            } else {
                report.external_refs.emplace_back("mesh", redirect->use_name);
                // the sibling appearance overrides every submesh material of
                // the external mesh
                std::string override_name = collect_shape_material(shape, appearance, custom,
                                                                   nullptr);
                if (!override_name.empty())
                    report.name_map.emplace_back(redirect->use_name, override_name);
                return;
            }
        }

        if (!its) {
            report.diags.warning(shape.line, shape.column, "empty-mesh",
                                 "Shape without geometry is skipped");
            collect_shape_material(shape, appearance, custom, nullptr);
            return;
        }

        ShapeIR ir;
        ir.name = shape.def_name;
        std::string coord_name;
        if (!geometry_from_triangle_set(*its, ir.geometry, coord_name))
            return;
        collect_shape_material(shape, appearance, custom, &ir);
        shapes.push_back(std::move(ir));
        shape_coord_names.push_back(std::move(coord_name));
    }

    // Fills the shape's material fields (when ir is given) and registers
    // hlms materials produced by CustomAppearance/PhysicalMaterial. Returns
    // the material name, empty when none.
    std::string collect_shape_material(const X3dNode& shape, const X3dNode* appearance,
                                       const X3dNode* custom, ShapeIR* ir) {
        (void)shape;
        if (custom) {
            std::string name = hlms_name_for(*custom);
            Result<HlmsMaterial> hlms = custom_appearance_to_hlms(*custom, name, doc, registry);
            report.diags.merge(hlms.diags);
            if (!hlms.ok())
                return {};
            add_material_once(report.materials, std::move(*hlms.value));
            if (!custom->def_name.empty())
                report.name_map.emplace_back(custom->def_name, name);
            if (ir) {
                ir->material_name = name;
                ir->material_external = true; // emitted here, not by the mesh translator
            }
            return name;
        }
        if (!appearance)
            return {};
        if (appearance->is_use()) {
            Result<Resolution> res = resolve_resource(appearance->use_name, doc, registry,
                                                      ResourceSlot::Appearance);
            report.diags.merge(res.diags);
            if (!res.ok())
                return {};
            if (res->internal) {
                return fill_from_appearance_node(*res->node, appearance->use_name, ir);
            }
            if (ir) {
                ir->material_name = appearance->use_name;
                ir->material_external = true;
            }
            report.external_refs.emplace_back("material", appearance->use_name);
            return appearance->use_name;
        }
        return fill_from_appearance_node(*appearance, appearance->def_name, ir);
    }

    std::string fill_from_appearance_node(const X3dNode& appearance, const std::string& name,
                                          ShapeIR* ir) {
        if (const X3dNode* pm = appearance.first_child(NodeKind::PhysicalMaterial)) {
            std::string hlms_name = name.empty() ? hlms_name_for(appearance) : name;
            add_material_once(report.materials, physical_material_to_hlms(*pm, hlms_name));
            if (!name.empty())
                report.name_map.emplace_back(name, hlms_name);
            if (ir) {
                ir->material_name = hlms_name;
                ir->material_external = true;
            }
            return hlms_name;
        }
        AppearanceIR parsed = appearance_ir(appearance);
        if (ir) {
            ir->appearance = parsed;
            ir->material_name = name;
        } else if (!name.empty()) {
            // standalone named appearance still yields a material
            add_material_once(report.materials,
                              x3d_to_ogre_material(parsed, name, options));
            report.name_map.emplace_back(name, name);
        }
        return name;
    }

    void handle_compositor(const X3dNode& node) {
        Result<CompositorGraph> graph = build_compositor(node);
        report.diags.merge(graph.diags);
        if (!graph.ok())
            return;
        Result<std::vector<std::string>> schedule = validate_and_schedule(*graph.value);
        report.diags.merge(schedule.diags);
        if (!schedule.ok())
            return;
        Result<CompositorScript> script = to_ogre_compositor(*graph.value);
        report.diags.merge(script.diags);
        if (!script.ok())
            return;
        report.compositors.push_back(std::move(*script.value));
        if (!node.def_name.empty())
            report.name_map.emplace_back(node.def_name, node.def_name);
    }

    void handle_viewpoint(const X3dNode& node) {
        Result<CompositorChain> chain = resolve_chain(node, doc, registry);
        report.diags.merge(chain.diags);
        if (!chain.ok())
            return;
        for (const ChainEntry& entry : chain->entries)
            if (!entry.internal)
                report.external_refs.emplace_back("compositor", entry.name);
    }

    void handle_transform(const X3dNode& node) {
        TransformParams params = transform_params_from_node(node, &report.diags);
        Result<TrsNodePair> pair = decompose_transform(params);
        report.diags.merge(pair.diags);
        if (pair.ok())
            report.scene_nodes.push_back({node.def_name, *pair.value});
    }

    void walk(const X3dNode& node) {
        for (const X3dNode& child : node.children) {
            switch (child.kind) {
            case NodeKind::Shape:
                handle_shape(child);
                break;
            case NodeKind::Appearance:
                if (!child.is_use())
                    fill_from_appearance_node(child, child.def_name, nullptr);
                break;
            case NodeKind::CustomAppearance:
                if (!child.is_use()) {
                    std::string name = hlms_name_for(child);
                    Result<HlmsMaterial> hlms =
                        custom_appearance_to_hlms(child, name, doc, registry);
                    report.diags.merge(hlms.diags);
                    if (hlms.ok()) {
                        add_material_once(report.materials, std::move(*hlms.value));
                        if (!child.def_name.empty())
                            report.name_map.emplace_back(child.def_name, name);
                    }
                }
                break;
            case NodeKind::Compositor:
                handle_compositor(child);
                break;
            case NodeKind::Viewpoint:
                handle_viewpoint(child);
                break;
            case NodeKind::Transform:
                handle_transform(child);
                walk(child);
                break;
            default:
                walk(child);
                break;
            }
        }
    }

    void assign_share_groups() {
        std::map<std::string, std::vector<size_t>> by_name;
        for (size_t i = 0; i < shape_coord_names.size(); ++i)
            if (!shape_coord_names[i].empty())
                by_name[shape_coord_names[i]].push_back(i);
        int next_group = 0;
        for (size_t i = 0; i < shapes.size(); ++i) {
            const std::string& name = shape_coord_names[i];
            if (name.empty() || by_name.at(name).size() < 2)
                continue;
            if (shapes[by_name.at(name).front()].share_group < 0) {
                for (size_t member : by_name.at(name))
                    shapes[member].share_group = next_group;
                ++next_group;
            }
        }
    }
};

} // namespace

TranslationReport translate_scene(const SceneDocument& input, const std::string& base_name,
                                  const ResourceRegistry& registry,
                                  const MaterialOptions& options) {
    TranslationReport report;
    report.base_name = base_name;

    size_t prior_diags = input.diagnostics.size();
    SceneDocument doc = rewrite_routes(resolve_uses(input));
    for (size_t i = prior_diags; i < doc.diagnostics.size(); ++i)
        report.diags.add(doc.diagnostics[i]);

    report.animation = map_animation(doc);
    report.diags.merge(report.animation.diags);

    SceneWalker walker{doc, registry, options, report, {}, {}, 0};
    walker.walk(doc.root);
    walker.assign_share_groups();

    if (!walker.shapes.empty()) {
        std::set<std::string> reserved;
        for (const auto& [name, path] : doc.defs)
            reserved.insert(name);
        Result<MeshTranslation> mesh =
            x3d_to_ogre_mesh(walker.shapes, base_name, reserved, options);
        report.diags.merge(mesh.diags);
        if (mesh.ok()) {
            report.mesh = std::move(mesh->mesh);
            for (MaterialEntry& entry : mesh->materials)
                add_material_once(report.materials, std::move(entry));
            for (size_t i = 0; i < walker.shapes.size(); ++i)
                if (!walker.shapes[i].name.empty())
                    report.name_map.emplace_back(walker.shapes[i].name,
                                                 base_name + ".mesh");
        }
    }
    return report;
}

// inverse driver

namespace {

struct SceneBuilder {
    std::set<std::string> defs;

    std::string claim(const std::string& wanted) {
        std::string name = wanted;
        for (int k = 2; defs.count(name); ++k)
            name = wanted + "_" + std::to_string(k);
        defs.insert(name);
        return name;
    }

    static std::string join_tokens(const std::vector<std::string>& tokens) {
        std::string out;
        for (const std::string& token : tokens) {
            if (!out.empty())
                out += " ";
            out += token;
        }
        return out;
    }

    static std::string mfstring(const std::vector<std::string>& items) {
        std::string out;
        for (const std::string& item : items) {
            if (!out.empty())
                out += " ";
            out += "\"";
            for (char c : item) {
                if (c == '"' || c == '\\')
                    out += '\\';
                out += c;
            }
            out += "\"";
        }
        return out;
    }

    X3dNode make(NodeKind kind) {
        X3dNode node;
        node.kind = kind;
        node.element_name = std::string(node_kind_name(kind));
        return node;
    }

    void add_shader_stub(X3dNode& scene, const std::string& name) {
        if (defs.count(name))
            return;
        X3dNode shader = make(NodeKind::ComposedShader);
        shader.def_name = claim(name);
        scene.children.push_back(std::move(shader));
    }

    void add_classic_material(X3dNode& scene, const OgreMaterial& material,
                              const MaterialOptions& options, DiagnosticList& diags) {
        Result<AppearanceIR> ir = ogre_to_x3d_appearance(material, options);
        diags.merge(ir.diags);
        if (!ir.ok())
            return;
        X3dNode appearance = make(NodeKind::Appearance);
        appearance.def_name = claim(material.name);
        X3dNode mat = make(NodeKind::Material);
        mat.set_attribute("ambientIntensity", format_double(ir->material.ambient_intensity));
        mat.set_attribute("diffuseColor", format_vec(ir->material.diffuse));
        mat.set_attribute("specularColor", format_vec(ir->material.specular));
        mat.set_attribute("shininess", format_double(ir->material.shininess));
        if (!vec_equal(ir->material.emissive, Eigen::Vector3d::Zero()))
            mat.set_attribute("emissiveColor", format_vec(ir->material.emissive));
        if (ir->material.transparency != 0.0)
            mat.set_attribute("transparency", format_double(ir->material.transparency));
        appearance.children.push_back(std::move(mat));
        for (const std::string& texture : ir->textures) {
            X3dNode image = make(NodeKind::ImageTexture);
            image.set_attribute("url", mfstring({texture}));
            appearance.children.push_back(std::move(image));
        }
        scene.children.push_back(std::move(appearance));
    }

    void add_hlms_material(X3dNode& scene, const HlmsMaterial& material) {
        add_shader_stub(scene, material.shader_type);
        X3dNode custom = make(NodeKind::CustomAppearance);
        custom.def_name = claim(material.name);
        custom.set_attribute("type", material.shader_type);
        for (const ScriptProperty& prop : material.properties) {
            X3dNode field = make(NodeKind::Field);
            field.set_attribute("name", prop.key);
            field.set_attribute("value", join_tokens(prop.values));
            custom.children.push_back(std::move(field));
        }
        scene.children.push_back(std::move(custom));
    }

    static std::string vec3_attr(const std::vector<Eigen::Vector3d>& list) {
        std::string out;
        for (const Eigen::Vector3d& v : list) {
            if (!out.empty())
                out += " ";
            out += format_vec(v);
        }
        return out;
    }

    X3dNode build_shape(const ShapeIR& shape, const std::set<std::string>& hlms_names,
                        const std::string& shared_coord_def, bool defines_shared) {
        X3dNode node = make(NodeKind::Shape);
        if (!shape.material_name.empty()) {
            X3dNode appearance = make(hlms_names.count(shape.material_name)
                                          ? NodeKind::CustomAppearance
                                          : NodeKind::Appearance);
            appearance.use_name = shape.material_name;
            node.children.push_back(std::move(appearance));
        }
        X3dNode its = make(NodeKind::IndexedTriangleSet);
        std::string index_attr;
        for (uint32_t index : shape.geometry.indices) {
            if (!index_attr.empty())
                index_attr += " ";
            index_attr += std::to_string(index);
        }
        its.set_attribute("coordIndex", index_attr);
        X3dNode coordinate = make(NodeKind::Coordinate);
        if (shape.share_group >= 0 && !defines_shared) {
            coordinate.use_name = shared_coord_def;
        } else {
            if (shape.share_group >= 0)
                coordinate.def_name = shared_coord_def;
            coordinate.set_attribute("point", vec3_attr(shape.geometry.points));
        }
        its.children.push_back(std::move(coordinate));
        if (!shape.geometry.normals.empty()) {
            X3dNode normal = make(NodeKind::Normal);
            normal.set_attribute("vector", vec3_attr(shape.geometry.normals));
            its.children.push_back(std::move(normal));
        }
        if (!shape.geometry.texcoords.empty()) {
            X3dNode texcoord = make(NodeKind::TextureCoordinate);
            std::string points;
            for (const auto& tc : shape.geometry.texcoords) {
                if (!points.empty())
                    points += " ";
                points += format_double(tc[0]) + " " + format_double(tc[1]);
            }
            texcoord.set_attribute("point", points);
            its.children.push_back(std::move(texcoord));
        }
        node.children.push_back(std::move(its));
        return node;
    }

    void add_compositor(X3dNode& scene, const CompositorScript& script, DiagnosticList& diags) {
        Result<CompositorGraph> graph = from_ogre_compositor(script);
        diags.merge(graph.diags);
        if (!graph.ok())
            return;

        for (const CompositorPassIR& pass : graph->passes)
            if (!pass.material.empty())
                add_shader_stub(scene, pass.material);
        if (!graph->output.material.empty())
            add_shader_stub(scene, graph->output.material);

        std::map<std::string, std::string> texture_names;
        X3dNode compositor = make(NodeKind::Compositor);
        compositor.def_name = claim(graph->name);
        for (const CompositorTexture& texture : graph->textures) {
            X3dNode rt = make(NodeKind::RenderedTexture);
            std::string def = claim(texture.name);
            texture_names[texture.name] = def;
            rt.def_name = def;
            if (texture.width_spec != "target_width" || texture.height_spec != "target_height")
                rt.set_attribute("dimensions", texture.width_spec + " " + texture.height_spec);
            if (texture.format != "PF_A8R8G8B8")
                rt.set_attribute("format", texture.format);
            compositor.children.push_back(std::move(rt));
        }

        auto pass_node = [&](const CompositorPassIR& pass, bool is_output) {
            X3dNode node = make(is_output ? NodeKind::CompositorOutput
                                          : NodeKind::CompositorPass);
            if (!is_output)
                node.set_attribute("target", texture_names.count(pass.target)
                                                 ? texture_names.at(pass.target)
                                                 : pass.target);
            node.set_attribute("input", pass.input_mode == CompositorInput::Previous
                                            ? "previous"
                                            : "none");
            node.set_attribute("render", pass.render == PassRender::Quad ? "QUAD" : "SCENE");
            if (pass.render == PassRender::Quad) {
                X3dNode appearance = make(NodeKind::Appearance);
                X3dNode shader = make(NodeKind::ComposedShader);
                shader.use_name = pass.material;
                appearance.children.push_back(std::move(shader));
                for (const std::string& read : pass.reads) {
                    X3dNode rt = make(NodeKind::RenderedTexture);
                    rt.use_name = texture_names.count(read) ? texture_names.at(read) : read;
                    appearance.children.push_back(std::move(rt));
                }
                node.children.push_back(std::move(appearance));
            }
            return node;
        };
        for (const CompositorPassIR& pass : graph->passes)
            compositor.children.push_back(pass_node(pass, false));
        compositor.children.push_back(pass_node(graph->output, true));
        scene.children.push_back(std::move(compositor));
    }
};

} // namespace

Result<SceneDocument> ogre_to_x3d_scene(const std::string& base_name, const OgreMesh* mesh,
                                        const std::vector<MaterialEntry>& materials,
                                        const std::vector<CompositorScript>& compositors,
                                        const ResourceRegistry& registry,
                                        const MaterialOptions& options) {
    Result<SceneDocument> result;
    SceneBuilder builder;
    X3dNode scene;
    scene.kind = NodeKind::Scene;
    scene.element_name = "Scene";

    std::set<std::string> known_materials;
    std::set<std::string> hlms_names;
    for (const MaterialEntry& entry : materials) {
        known_materials.insert(entry_name(entry));
        if (std::holds_alternative<HlmsMaterial>(entry))
            hlms_names.insert(entry_name(entry));
    }

    for (const MaterialEntry& entry : materials) {
        if (const OgreMaterial* material = std::get_if<OgreMaterial>(&entry))
            builder.add_classic_material(scene, *material, options, result.diags);
        else
            builder.add_hlms_material(scene, std::get<HlmsMaterial>(entry));
    }

    if (mesh) {
        Result<std::vector<ShapeIR>> shapes = ogre_mesh_to_x3d(*mesh, registry, known_materials);
        result.diags.merge(shapes.diags);
        if (!shapes.ok())
            return result;
        std::string shared_def;
        bool any_shared = std::any_of(shapes->begin(), shapes->end(),
                                      [](const ShapeIR& s) { return s.share_group >= 0; });
        if (any_shared)
            shared_def = builder.claim(base_name + "Coord");
        bool shared_defined = false;
        std::vector<X3dNode> shape_nodes;
        for (const ShapeIR& shape : *shapes.value) {
            bool defines = shape.share_group >= 0 && !shared_defined;
            shape_nodes.push_back(builder.build_shape(shape, hlms_names, shared_def, defines));
            if (defines)
                shared_defined = true;
        }
        if (shape_nodes.size() > 1) {
            X3dNode group = builder.make(NodeKind::Group);
            group.children = std::move(shape_nodes);
            scene.children.push_back(std::move(group));
        } else {
            for (X3dNode& node : shape_nodes)
                scene.children.push_back(std::move(node));
        }
    }

    std::vector<std::string> chain;
    for (const CompositorScript& script : compositors) {
        size_t before = scene.children.size();
        builder.add_compositor(scene, script, result.diags);
        if (scene.children.size() > before)
            chain.push_back(scene.children.back().def_name);
    }
    if (!chain.empty()) {
        X3dNode viewpoint = builder.make(NodeKind::Viewpoint);
        viewpoint.set_attribute("compositors", SceneBuilder::mfstring(chain));
        scene.children.push_back(std::move(viewpoint));
    }

    SceneDocument assembled;
    assembled.root = std::move(scene);
    SceneDocument parsed = parse_x3d(serialize_x3d(assembled));
    result.diags.merge(parsed.diagnostics);
    if (parsed.diagnostics.has_errors())
        return result;
    parsed.diagnostics = DiagnosticList{};
    result.value = std::move(parsed);
    return result;
}

} // namespace x3db
