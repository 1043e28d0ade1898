#include "x3db/mesh.hpp"

#include "diagnostics_impl.hpp"
#include "x3db/xml.hpp"

namespace x3db {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;

struct MeshParser {
    DiagnosticList& diags;

    std::optional<double> float_attr(const XmlElement& el, std::string_view name) {
        const std::string* raw = el.attribute(name);
        if (!raw) {
            diags.error(el.line, el.column, "attribute-count-mismatch",
                        "<" + el.name + "> is missing attribute '" + std::string(name) + "'");
            return std::nullopt;
        }
        std::optional<double> v = parse_double(*raw);
        if (!v)
            diags.error(el.line, el.column, "bad-field",
                        "attribute '" + std::string(name) + "' is not a number: " + *raw);
        return v;
    }

    std::optional<size_t> count_attr(const XmlElement& el, std::string_view name) {
        const std::string* raw = el.attribute(name);
        if (!raw) {
            diags.error(el.line, el.column, "attribute-count-mismatch",
                        "<" + el.name + "> is missing attribute '" + std::string(name) + "'");
            return std::nullopt;
        }
        std::optional<long long> v = parse_int(*raw);
        if (!v || *v < 0) {
            diags.error(el.line, el.column, "bad-field",
                        "attribute '" + std::string(name) + "' is not a nonnegative integer: " +
                            *raw);
            return std::nullopt;
        }
        return static_cast<size_t>(*v);
    }

    bool bool_attr(const XmlElement& el, std::string_view name, bool fallback) {
        const std::string* raw = el.attribute(name);
        if (!raw)
            return fallback;
        if (*raw == "true")
            return true;
        if (*raw == "false")
            return false;
        diags.error(el.line, el.column, "bad-field",
                    "attribute '" + std::string(name) + "' must be true or false: " + *raw);
        return fallback;
    }

    std::optional<Eigen::Vector3d> vec3_child(const XmlElement& el) {
        auto x = float_attr(el, "x");
        auto y = float_attr(el, "y");
        auto z = float_attr(el, "z");
        if (!x || !y || !z)
            return std::nullopt;
        return Eigen::Vector3d(*x, *y, *z);
    }

    std::optional<MeshVertex> parse_vertex(const XmlElement& el, const VertexBuffer& decl) {
        MeshVertex vertex;
        size_t positions = 0, normals = 0, texcoords = 0;
        for (const XmlElement& child : el.children) {
            if (child.name == "position") {
                ++positions;
                if (auto v = vec3_child(child))
                    vertex.position = *v;
            } else if (child.name == "normal") {
                ++normals;
                if (auto v = vec3_child(child))
                    vertex.normal = *v;
            } else if (child.name == "texcoord") {
                ++texcoords;
                auto u = float_attr(child, "u");
                auto v = float_attr(child, "v");
                if (u && v)
                    vertex.texcoords.push_back({*u, *v});
            } else {
                diags.warning(child.line, child.column, "unknown-node",
                              "unsupported vertex attribute <" + child.name + "> ignored");
            }
        }
        size_t want_pos = decl.has_positions ? 1 : 0;
        size_t want_nrm = decl.has_normals ? 1 : 0;
        if (positions != want_pos || normals != want_nrm || texcoords != decl.texcoord_sets) {
            diags.error(el.line, el.column, "attribute-count-mismatch",
                        "vertex record does not match the buffer declaration (expected " +
                            std::to_string(want_pos) + " position, " + std::to_string(want_nrm) +
                            " normal, " + std::to_string(decl.texcoord_sets) + " texcoord)");
            return std::nullopt;
        }
        return vertex;
    }

    std::optional<VertexBuffer> parse_buffer(const XmlElement& el, size_t vertex_count) {
        VertexBuffer buffer;
        buffer.has_positions = bool_attr(el, "positions", false);
        buffer.has_normals = bool_attr(el, "normals", false);
        if (el.attribute("texture_coords")) {
            auto n = count_attr(el, "texture_coords");
            if (!n)
                return std::nullopt;
            buffer.texcoord_sets = *n;
        }
        for (const XmlElement& child : el.children) {
            if (child.name != "vertex") {
                diags.warning(child.line, child.column, "unknown-node",
                              "unsupported element <" + child.name + "> in vertexbuffer ignored");
                continue;
            }
            auto vertex = parse_vertex(child, buffer);
            if (!vertex)
                return std::nullopt;
            buffer.vertices.push_back(std::move(*vertex));
        }
        if (buffer.vertices.size() != vertex_count) {
            diags.error(el.line, el.column, "count-mismatch",
                        "vertexbuffer holds " + std::to_string(buffer.vertices.size()) +
                            " vertices but the declared vertexcount is " +
                            std::to_string(vertex_count));
            return std::nullopt;
        }
        return buffer;
    }

    std::optional<VertexData> parse_geometry(const XmlElement& el) {
        auto count = count_attr(el, "vertexcount");
        if (!count)
            return std::nullopt;
        VertexData data;
        data.vertex_count = *count;
        for (const XmlElement& child : el.children) {
            if (child.name != "vertexbuffer") {
                diags.warning(child.line, child.column, "unknown-node",
                              "unsupported element <" + child.name + "> in geometry ignored");
                continue;
            }
            auto buffer = parse_buffer(child, data.vertex_count);
            if (!buffer)
                return std::nullopt;
            data.buffers.push_back(std::move(*buffer));
        }
        return data;
    }

    bool parse_faces(const XmlElement& el, Submesh& submesh) {
        auto count = count_attr(el, "count");
        if (!count)
            return false;
        for (const XmlElement& child : el.children) {
            if (child.name != "face") {
                diags.warning(child.line, child.column, "unknown-node",
                              "unsupported element <" + child.name + "> in faces ignored");
                continue;
            }
            std::array<uint32_t, 3> face{};
            static constexpr std::string_view names[3] = {"v1", "v2", "v3"};
            bool ok = true;
            for (int i = 0; i < 3; ++i) {
                const std::string* raw = child.attribute(names[i]);
                std::optional<long long> v = raw ? parse_int(*raw) : std::nullopt;
                if (!raw || !v || *v < 0) {
                    diags.error(child.line, child.column, "invalid-index",
                                "face attribute '" + std::string(names[i]) +
                                    "' must be a nonnegative integer");
                    ok = false;
                    continue;
                }
                face[static_cast<size_t>(i)] = static_cast<uint32_t>(*v);
            }
            if (!ok)
                return false;
            submesh.faces.push_back(face);
        }
        if (submesh.faces.size() != *count) {
            diags.error(el.line, el.column, "count-mismatch",
                        "faces element declares count " + std::to_string(*count) + " but holds " +
                            std::to_string(submesh.faces.size()) + " faces");
            return false;
        }
        return true;
    }

    std::optional<Submesh> parse_submesh(const XmlElement& el, bool has_shared) {
        Submesh submesh;
        if (const std::string* material = el.attribute("material"))
            submesh.material = *material;
        submesh.use_shared_vertices = bool_attr(el, "usesharedvertices", false);
        if (const std::string* op = el.attribute("operationtype")) {
            if (*op != "triangle_list") {
                diags.error(el.line, el.column, "unsupported-operation-type",
                            "operationtype '" + *op + "' is outside the triangle_list subset");
                return std::nullopt;
            }
            submesh.operation_type = *op;
        }
        for (const XmlElement& child : el.children) {
            if (child.name == "faces") {
                if (!parse_faces(child, submesh))
                    return std::nullopt;
            } else if (child.name == "geometry") {
                auto geometry = parse_geometry(child);
                if (!geometry)
                    return std::nullopt;
                submesh.geometry = std::move(*geometry);
            } else if (child.name == "boneassignments") {
                submesh.bone_assignments_raw = child.raw;
            } else {
                diags.warning(child.line, child.column, "unknown-node",
                              "unsupported element <" + child.name + "> in submesh ignored");
            }
        }
        if (submesh.use_shared_vertices) {
            if (!has_shared) {
                diags.error(el.line, el.column, "shared-geometry-missing",
                            "submesh uses shared vertices but the mesh has no sharedgeometry");
                return std::nullopt;
            }
            if (submesh.geometry) {
                diags.error(el.line, el.column, "shared-geometry-missing",
                            "submesh uses shared vertices and must not carry its own geometry");
                return std::nullopt;
            }
        }
        return submesh;
    }
};

size_t governing_vertex_count(const OgreMesh& mesh, const Submesh& submesh) {
    if (submesh.use_shared_vertices)
        return mesh.shared_geometry ? mesh.shared_geometry->vertex_count : 0;
    return submesh.geometry ? submesh.geometry->vertex_count : 0;
}

void serialize_geometry(XmlElement& parent, std::string element_name, const VertexData& data,
                        const std::string& bone_raw) {
    XmlElement& geom = parent.add_child(std::move(element_name));
    geom.set_attribute("vertexcount", std::to_string(data.vertex_count));
    for (const VertexBuffer& buffer : data.buffers) {
        XmlElement& vb = geom.add_child("vertexbuffer");
        if (buffer.has_positions)
            vb.set_attribute("positions", "true");
        if (buffer.has_normals)
            vb.set_attribute("normals", "true");
        if (buffer.texcoord_sets > 0)
            vb.set_attribute("texture_coords", std::to_string(buffer.texcoord_sets));
        for (const MeshVertex& vertex : buffer.vertices) {
            XmlElement& v = vb.add_child("vertex");
            if (buffer.has_positions) {
                XmlElement& p = v.add_child("position");
                p.set_attribute("x", format_double(vertex.position.x()));
                p.set_attribute("y", format_double(vertex.position.y()));
                p.set_attribute("z", format_double(vertex.position.z()));
            }
            if (buffer.has_normals) {
                XmlElement& n = v.add_child("normal");
                n.set_attribute("x", format_double(vertex.normal.x()));
                n.set_attribute("y", format_double(vertex.normal.y()));
                n.set_attribute("z", format_double(vertex.normal.z()));
            }
            for (const auto& tc : vertex.texcoords) {
                XmlElement& t = v.add_child("texcoord");
                t.set_attribute("u", format_double(tc[0]));
                t.set_attribute("v", format_double(tc[1]));
            }
        }
    }
    if (!bone_raw.empty()) {
        XmlElement& bones = parent.add_child("boneassignments");
        bones.raw = bone_raw;
        bones.emit_raw = true;
    }
}

} // namespace

Result<OgreMesh> parse_mesh_xml(std::string_view bytes) {
    Result<OgreMesh> result;
    Result<XmlElement> xml = xml_parse(bytes);
    result.diags.merge(xml.diags);
    if (!xml.ok())
        return result;
    const XmlElement& root = *xml.value;
    if (root.name != "mesh") {
        result.diags.error(root.line, root.column, "unknown-node",
                           "expected <mesh> document root, found <" + root.name + ">");
        return result;
    }

    OgreMesh mesh;
    MeshParser parser{result.diags};
    const XmlElement* submeshes_el = nullptr;
    for (const XmlElement& child : root.children) {
        if (child.name == "sharedgeometry") {
            if (mesh.shared_geometry) {
                result.diags.error(child.line, child.column, "count-mismatch",
                                   "mesh has more than one sharedgeometry element");
                return result;
            }
            auto geometry = parser.parse_geometry(child);
            if (!geometry)
                return result;
            mesh.shared_geometry = std::move(*geometry);
        } else if (child.name == "submeshes") {
            if (submeshes_el) {
                result.diags.error(child.line, child.column, "count-mismatch",
                                   "mesh has more than one submeshes element");
                return result;
            }
            submeshes_el = &child;
        } else if (child.name == "boneassignments") {
            mesh.bone_assignments_raw = child.raw;
        } else {
            result.diags.warning(child.line, child.column, "unknown-node",
                                 "unsupported element <" + child.name + "> in mesh ignored");
        }
    }
    if (submeshes_el) {
        for (const XmlElement& child : submeshes_el->children) {
            if (child.name != "submesh") {
                result.diags.warning(child.line, child.column, "unknown-node",
                                     "unsupported element <" + child.name +
                                         "> in submeshes ignored");
                continue;
            }
            auto submesh = parser.parse_submesh(child, mesh.shared_geometry.has_value());
            if (!submesh)
                return result;
            mesh.submeshes.push_back(std::move(*submesh));
        }
    }

    for (size_t s = 0; s < mesh.submeshes.size(); ++s) {
        const Submesh& submesh = mesh.submeshes[s];
        size_t limit = governing_vertex_count(mesh, submesh);
        for (const auto& face : submesh.faces) {
            for (uint32_t index : face) {
                if (index >= limit) {
                    result.diags.error(0, 0, "index-out-of-range",
                                       "submesh " + std::to_string(s) + " face index " +
                                           std::to_string(index) +
                                           " exceeds the governing vertex count " +
                                           std::to_string(limit));
                    return result;
                }
            }
        }
    }

    result.value = std::move(mesh);
    return result;
}

std::string serialize_mesh_xml(const OgreMesh& mesh) {
    XmlElement root;
    root.name = "mesh";
    if (mesh.shared_geometry)
        serialize_geometry(root, "sharedgeometry", *mesh.shared_geometry,
                           mesh.bone_assignments_raw);
    XmlElement& submeshes = root.add_child("submeshes");
    for (const Submesh& submesh : mesh.submeshes) {
        XmlElement& sm = submeshes.add_child("submesh");
        sm.set_attribute("material", submesh.material);
        sm.set_attribute("usesharedvertices", submesh.use_shared_vertices ? "true" : "false");
        sm.set_attribute("operationtype", submesh.operation_type);
        XmlElement& faces = sm.add_child("faces");
        faces.set_attribute("count", std::to_string(submesh.faces.size()));
        for (const auto& face : submesh.faces) {
            XmlElement& f = faces.add_child("face");
            f.set_attribute("v1", std::to_string(face[0]));
            f.set_attribute("v2", std::to_string(face[1]));
            f.set_attribute("v3", std::to_string(face[2]));
        }
        if (submesh.geometry)
            serialize_geometry(sm, "geometry", *submesh.geometry, submesh.bone_assignments_raw);
        else if (!submesh.bone_assignments_raw.empty()) {
            XmlElement& bones = sm.add_child("boneassignments");
            bones.raw = submesh.bone_assignments_raw;
            bones.emit_raw = true;
        }
    }
    return xml_serialize(root);
}

bool mesh_equal(const OgreMesh& a, const OgreMesh& b) {
    auto vec_equal = [](const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
        return x.x() == y.x() && x.y() == y.y() && x.z() == y.z();
    };
    auto buffers_equal = [&](const VertexBuffer& x, const VertexBuffer& y) {
        if (x.has_positions != y.has_positions || x.has_normals != y.has_normals ||
            x.texcoord_sets != y.texcoord_sets || x.vertices.size() != y.vertices.size())
            return false;
        for (size_t i = 0; i < x.vertices.size(); ++i) {
            const MeshVertex& u = x.vertices[i];
            const MeshVertex& v = y.vertices[i];
            if (x.has_positions && !vec_equal(u.position, v.position))
                return false;
            if (x.has_normals && !vec_equal(u.normal, v.normal))
                return false;
            if (u.texcoords != v.texcoords)
                return false;
        }
        return true;
    };
    auto data_equal = [&](const VertexData& x, const VertexData& y) {
        if (x.vertex_count != y.vertex_count || x.buffers.size() != y.buffers.size())
            return false;
        for (size_t i = 0; i < x.buffers.size(); ++i)
            if (!buffers_equal(x.buffers[i], y.buffers[i]))
                return false;
        return true;
    };

    if (a.shared_geometry.has_value() != b.shared_geometry.has_value())
        return false;
    if (a.shared_geometry && !data_equal(*a.shared_geometry, *b.shared_geometry))
        return false;
    if (a.bone_assignments_raw != b.bone_assignments_raw)
        return false;
    if (a.submeshes.size() != b.submeshes.size())
        return false;
    for (size_t i = 0; i < a.submeshes.size(); ++i) {
        const Submesh& x = a.submeshes[i];
        const Submesh& y = b.submeshes[i];
        if (x.material != y.material || x.use_shared_vertices != y.use_shared_vertices ||
            x.operation_type != y.operation_type || x.faces != y.faces ||
            x.bone_assignments_raw != y.bone_assignments_raw)
            return false;
        if (x.geometry.has_value() != y.geometry.has_value())
            return false;
        if (x.geometry && !data_equal(*x.geometry, *y.geometry))
            return false;
    }
    return true;
}

} // namespace x3db
