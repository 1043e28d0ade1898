// Acceptance checks for the shipped guarantees, one pass/fail line each.
// Runs standalone (no test framework) so the output reads as a checklist.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../src/diagnostics_impl.hpp"
#include "x3db/routes.hpp"
#include "x3db/translate.hpp"

using namespace x3db;
using namespace std::string_literals;

namespace {

std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

// Token-level equality: numbers compare as parsed doubles, so "1.0" and "1"
// agree; everything else compares verbatim. Line breaks are insignificant.
bool script_tokens_match(const std::string& got, const std::string& expected) {
    Result<std::vector<ScriptToken>> a = tokenize_script(got);
    Result<std::vector<ScriptToken>> b = tokenize_script(expected);
    if (!a.ok() || !b.ok())
        return false;
    auto strip = [](const std::vector<ScriptToken>& tokens) {
        std::vector<ScriptToken> out;
        for (const ScriptToken& t : tokens)
            if (t.kind != ScriptTokenKind::Newline)
                out.push_back(t);
        return out;
    };
    std::vector<ScriptToken> lhs = strip(*a);
    std::vector<ScriptToken> rhs = strip(*b);
    if (lhs.size() != rhs.size())
        return false;
    for (size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i].kind != rhs[i].kind)
            return false;
        std::optional<double> x = detail::parse_double(lhs[i].text);
        std::optional<double> y = detail::parse_double(rhs[i].text);
        if (x && y) {
            if (*x != *y)
                return false;
        } else if (lhs[i].text != rhs[i].text) {
            return false;
        }
    }
    return true;
}

bool classic_appearance_reproduced() {
    SceneDocument doc = parse_x3d(
        "<Scene><Appearance DEF=\"Example\">"
        "<Material ambientIntensity=\"0.508497\" "
        "diffuseColor=\"0.337255 0.4 0.788235\" specularColor=\"1 1 1\"/>"
        "</Appearance></Scene>");
    if (doc.diagnostics.has_errors())
        return false;
    TranslationReport report = translate_scene(doc, "sample");
    if (report.diags.has_errors() || report.materials.size() != 1)
        return false;
    const char* expected =
        "material Example {\n"
        "  technique {\n"
        "    pass {\n"
        "      ambient 0.508497 0.508497 0.508497\n"
        "      diffuse 0.337255 0.4 0.788235\n"
        "      specular 1.0 1.0 1.0 25\n"
        "} } }\n";
    return script_tokens_match(serialize_material_script(report.materials), expected);
}

bool submesh_structure_reproduced() {
    const size_t points = 531;
    const size_t triangles = 815;
    std::ostringstream x3d;
    x3d << "<Scene><Shape><Appearance USE=\"Example\"/>"
        << "<IndexedTriangleSet coordIndex=\"";
    for (size_t t = 0; t < triangles; ++t) {
        size_t a = (t * 3) % points, b = (t * 5 + 1) % points, c = (t * 7 + 2) % points;
        x3d << (t ? " " : "") << a << " " << b << " " << c;
    }
    x3d << "\"><Coordinate point=\"";
    for (size_t i = 0; i < points; ++i)
        x3d << (i ? " " : "") << detail::format_double(0.25 * double(i)) << " "
            << detail::format_double(double(i % 7)) << " "
            << detail::format_double(-0.5 * double(i % 11));
    x3d << "\"/><Normal vector=\"";
    for (size_t i = 0; i < points; ++i)
        x3d << (i ? " " : "") << "0 0 1";
    x3d << "\"/></IndexedTriangleSet></Shape></Scene>";

    SceneDocument doc = parse_x3d(x3d.str());
    if (doc.diagnostics.has_errors())
        return false;
    ResourceRegistry registry;
    registry.material_names.insert("Example");
    TranslationReport report = translate_scene(doc, "sample", registry);
    if (report.diags.has_errors() || !report.mesh || report.mesh->submeshes.size() != 1)
        return false;
    std::string xml = serialize_mesh_xml(*report.mesh);
    auto has = [&xml](std::string_view needle) {
        return xml.find(needle) != std::string::npos;
    };
    return has("faces count=\"815\"") && has("vertexcount=\"531\"") &&
           has("material=\"Example\"") && has("usesharedvertices=\"false\"") &&
           has("operationtype=\"triangle_list\"") && has("positions=\"true\" normals=\"true\"");
}

bool route_rewrite_matches() {
    SceneDocument input = parse_x3d(
        "<Scene>"
        "<TimeSensor DEF=\"time\"/>"
        "<PositionInterpolator DEF=\"move\"/>"
        "<ROUTE fromNode=\"time\" fromField=\"fraction_changed\" "
        "toNode=\"move\" toField=\"set_fraction\"/>"
        "</Scene>");
    SceneDocument expected = parse_x3d(
        "<Scene>"
        "<TimeSensor DEF=\"time\"/>"
        "<PositionInterpolator DEF=\"move\"><TimeSensor USE=\"time\"/></PositionInterpolator>"
        "</Scene>");
    if (input.diagnostics.has_errors() || expected.diagnostics.has_errors())
        return false;
    SceneDocument once = rewrite_routes(input);
    if (!structurally_equal(once, expected) || !once.routes.empty())
        return false;
    SceneDocument twice = rewrite_routes(once);
    return structurally_equal(twice, expected);
}

std::vector<Eigen::Matrix3d> signed_axis_rotations() {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<Eigen::Matrix3d> out;
    for (const auto& p : perms)
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) {
                    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
                    m(p[0], 0) = sx;
                    m(p[1], 1) = sy;
                    m(p[2], 2) = sz;
                    if (m.determinant() > 0.5)
                        out.push_back(m);
                }
    return out;
}

AxisAngle axis_angle_of(const Eigen::Matrix3d& m) {
    Eigen::AngleAxisd aa(m);
    return {aa.axis(), aa.angle()};
}

bool transform_decomposition_property() {
    auto started = std::chrono::steady_clock::now();
    std::mt19937_64 rng = make_rng(881231);
    std::uniform_real_distribution<double> span(-10.0, 10.0);
    std::uniform_real_distribution<double> mag(0.1, 5.0);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto random_axis = [&] {
        Eigen::Vector3d v;
        do
            v = {unit(rng), unit(rng), unit(rng)};
        while (v.norm() < 1e-3);
        return v.normalized().eval();
    };
    std::vector<Eigen::Matrix3d> rotations = signed_axis_rotations();
    if (rotations.size() != 24)
        return false;

    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        TransformParams p;
        p.translation = {span(rng), span(rng), span(rng)};
        p.center = {span(rng), span(rng), span(rng)};
        p.rotation = {random_axis(), angle(rng)};
        p.scale = {mag(rng), mag(rng), mag(rng)};
        p.scale_orientation = axis_angle_of(rotations[size_t(i) % rotations.size()]);
        Result<TrsNodePair> pair = decompose_transform(p);
        if (!pair.ok())
            return false;
        Eigen::Matrix4d recomposed = pair->outer.matrix() * pair->inner.matrix();
        worst = std::max(worst, (recomposed - compose_matrix(p)).cwiseAbs().maxCoeff());
    }
    if (worst >= 1e-9)
        return false;

    std::uniform_real_distribution<double> off_axis(0.1, 1.4);
    std::uniform_real_distribution<double> stretch(0.0, 1.0);
    int rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        TransformParams p;
        p.scale = {1.0, 2.0 + stretch(rng), 4.0 + stretch(rng)};
        p.scale_orientation = {random_axis(), off_axis(rng)};
        Result<TrsNodePair> pair = decompose_transform(p);
        if (!pair.ok() && pair.diags.contains("shear-not-representable"))
            ++rejected;
    }
    if (rejected != 1000)
        return false;

    auto elapsed = std::chrono::steady_clock::now() - started;
    return std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 5000;
}

const char* kNightVision =
    "compositor \"Night Vision\" {\n"
    "  technique {\n"
    "    // Temporary texture(s)\n"
    "    texture rt0 target_width target_height PF_A8R8G8B8\n"
    "    target rt0 {\n"
    "      // Render output from previous compositor\n"
    "      // or original scene\n"
    "      input previous\n"
    "    }\n"
    "    target_output {\n"
    "      input none\n"
    "      // Draw a fullscreen quad..\n"
    "      pass render_quad {\n"
    "        // ..using the night vision shader\n"
    "        material Ogre/Compositor/NightVision\n"
    "        input 0 rt0\n"
    "} } } }\n";

const char* kGaussBlurScene =
    "<Scene>"
    "<Compositor DEF=\"GaussBlur\">"
    "<RenderedTexture DEF=\"rt0\"/>"
    "<RenderedTexture DEF=\"rt1\"/>"
    "<CompositorPass target=\"rt0\" input=\"none\" render=\"SCENE\"/>"
    "<CompositorPass target=\"rt1\" input=\"none\" render=\"QUAD\">"
    "<Appearance>"
    "<ComposedShader USE=\"BlurVertical\"/>"
    "<RenderedTexture USE=\"rt0\"/>"
    "</Appearance>"
    "</CompositorPass>"
    "<CompositorOutput input=\"none\" render=\"QUAD\">"
    "<Appearance>"
    "<ComposedShader USE=\"BlurHorizontal\"/>"
    "<RenderedTexture USE=\"rt1\"/>"
    "</Appearance>"
    "</CompositorOutput>"
    "</Compositor>"
    "<Viewpoint compositors=\"GaussBlur\"/>"
    "</Scene>";

const char* kGaussBlurSwapped =
    "<Scene>"
    "<Compositor DEF=\"GaussBlur\">"
    "<RenderedTexture DEF=\"rt0\"/>"
    "<RenderedTexture DEF=\"rt1\"/>"
    "<CompositorPass target=\"rt1\" input=\"none\" render=\"QUAD\">"
    "<Appearance>"
    "<ComposedShader USE=\"BlurVertical\"/>"
    "<RenderedTexture USE=\"rt0\"/>"
    "</Appearance>"
    "</CompositorPass>"
    "<CompositorPass target=\"rt0\" input=\"none\" render=\"SCENE\"/>"
    "<CompositorOutput input=\"none\" render=\"QUAD\">"
    "<Appearance>"
    "<ComposedShader USE=\"BlurHorizontal\"/>"
    "<RenderedTexture USE=\"rt1\"/>"
    "</Appearance>"
    "</CompositorOutput>"
    "</Compositor>"
    "</Scene>";

const X3dNode* find_compositor(const SceneDocument& doc) {
    for (const X3dNode& child : doc.root.children)
        if (child.kind == NodeKind::Compositor)
            return &child;
    return nullptr;
}

bool compositor_round_trip() {
    Result<std::vector<CompositorScript>> parsed = parse_compositor_script(kNightVision);
    if (!parsed.ok() || parsed->size() != 1)
        return false;
    std::string canonical = serialize_compositor_script(*parsed);
    Result<CompositorGraph> graph = from_ogre_compositor((*parsed)[0]);
    if (!graph.ok())
        return false;
    Result<CompositorScript> emitted = to_ogre_compositor(*graph);
    if (!emitted.ok())
        return false;
    if (serialize_compositor_script({*emitted}) != canonical)
        return false;
    Result<std::vector<CompositorScript>> reparsed = parse_compositor_script(canonical);
    if (!reparsed.ok() || serialize_compositor_script(*reparsed) != canonical)
        return false;

    SceneDocument scene = parse_x3d(kGaussBlurScene);
    const X3dNode* node = find_compositor(scene);
    if (!node)
        return false;
    Result<CompositorGraph> gauss = build_compositor(*node);
    if (!gauss.ok())
        return false;
    Result<std::vector<std::string>> schedule = validate_and_schedule(*gauss);
    if (!schedule.ok() ||
        *schedule != std::vector<std::string>{"rt0", "rt1", "output"})
        return false;

    SceneDocument swapped = parse_x3d(kGaussBlurSwapped);
    const X3dNode* bad = find_compositor(swapped);
    if (!bad)
        return false;
    Result<CompositorGraph> bad_graph = build_compositor(*bad);
    if (!bad_graph.ok())
        return false;
    Result<std::vector<std::string>> rejected = validate_and_schedule(*bad_graph);
    return !rejected.ok() && rejected.diags.contains("rt-read-before-write");
}

bool definitions_shadow_registry() {
    ResourceRegistry registry;
    registry.material_names.insert("Example");

    SceneDocument with_def = parse_x3d("<Scene><Appearance DEF=\"Example\"/></Scene>");
    Result<Resolution> internal =
        resolve_resource("Example", with_def, registry, ResourceSlot::Appearance);
    if (!internal.ok() || !internal->internal || internal->node == nullptr)
        return false;

    SceneDocument without_def = parse_x3d("<Scene/>");
    Result<Resolution> external =
        resolve_resource("Example", without_def, registry, ResourceSlot::Appearance);
    return external.ok() && !external->internal && external->kind == "material";
}

struct GeneratedMaterial {
    std::string name;
    double ambient_intensity;
    Eigen::Vector3d diffuse;
    Eigen::Vector3d specular;
    Eigen::Vector3d emissive;
    double shininess;
    double transparency;
};

using Triangle = std::array<double, 9>;

void collect_shapes(const X3dNode& node, std::vector<const X3dNode*>& shapes) {
    for (const X3dNode& child : node.children) {
        if (child.kind == NodeKind::Shape && !child.is_use())
            shapes.push_back(&child);
        collect_shapes(child, shapes);
    }
}

bool extract_triangles(const SceneDocument& doc, std::vector<Triangle>& out) {
    std::vector<const X3dNode*> shapes;
    collect_shapes(doc.root, shapes);
    for (const X3dNode* shape : shapes) {
        const X3dNode* set = shape->first_child(NodeKind::IndexedTriangleSet);
        if (!set)
            return false;
        const X3dNode* coord = set->first_child(NodeKind::Coordinate);
        if (!coord)
            return false;
        if (coord->is_use()) {
            coord = doc.find_def(coord->use_name);
            if (!coord)
                return false;
        }
        std::vector<double> points = attr_floats(*coord, "point");
        const std::string* raw = set->attribute("coordIndex");
        if (!raw || points.size() % 3 != 0)
            return false;
        std::vector<long long> indices;
        for (std::string_view field : detail::split_fields(*raw)) {
            std::optional<long long> v = detail::parse_int(field);
            if (!v)
                return false;
            indices.push_back(*v);
        }
        if (indices.size() % 3 != 0)
            return false;
        for (size_t t = 0; t + 2 < indices.size(); t += 3) {
            Triangle tri;
            for (int k = 0; k < 3; ++k) {
                size_t p = size_t(indices[t + k]);
                if (p * 3 + 2 >= points.size())
                    return false;
                tri[k * 3 + 0] = points[p * 3 + 0];
                tri[k * 3 + 1] = points[p * 3 + 1];
                tri[k * 3 + 2] = points[p * 3 + 2];
            }
            out.push_back(tri);
        }
    }
    return true;
}

bool material_round_trip_suite() {
    std::mt19937_64 rng = make_rng(20240819);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> grid(0, 128);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);

    for (int scene_index = 0; scene_index < 200; ++scene_index) {
        std::uniform_int_distribution<int> shape_count(1, 3);
        int shapes = shape_count(rng);
        std::vector<GeneratedMaterial> materials;
        std::vector<Triangle> triangles;
        std::ostringstream x3d;
        x3d << "<Scene>";
        for (int s = 0; s < shapes; ++s) {
            GeneratedMaterial m;
            m.name = "M" + std::to_string(s);
            m.ambient_intensity = unit(rng);
            m.diffuse = {unit(rng), unit(rng), unit(rng)};
            m.specular = {unit(rng), unit(rng), unit(rng)};
            m.emissive = coin(rng) ? Eigen::Vector3d{unit(rng), unit(rng), unit(rng)}
                                   : Eigen::Vector3d::Zero();
            m.shininess = double(grid(rng)) / 128.0;
            m.transparency = coin(rng) ? 0.9 * unit(rng) : 0.0;
            materials.push_back(m);

            std::uniform_int_distribution<int> point_count(3, 24);
            int points = point_count(rng);
            std::vector<double> coords;
            for (int i = 0; i < points * 3; ++i)
                coords.push_back(coord(rng));
            std::uniform_int_distribution<int> tri_count(1, 40);
            std::uniform_int_distribution<int> pick(0, points - 1);
            int tris = tri_count(rng);
            std::vector<int> indices;
            for (int t = 0; t < tris; ++t) {
                int a = pick(rng), b = pick(rng), c = pick(rng);
                indices.insert(indices.end(), {a, b, c});
                Triangle tri;
                for (int k = 0; k < 3; ++k) {
                    int p = (k == 0 ? a : k == 1 ? b : c);
                    tri[k * 3 + 0] = coords[size_t(p) * 3 + 0];
                    tri[k * 3 + 1] = coords[size_t(p) * 3 + 1];
                    tri[k * 3 + 2] = coords[size_t(p) * 3 + 2];
                }
                triangles.push_back(tri);
            }

            x3d << "<Shape><Appearance DEF=\"" << m.name << "\"><Material"
                << " ambientIntensity=\"" << detail::format_double(m.ambient_intensity) << "\""
                << " diffuseColor=\"" << detail::format_double(m.diffuse.x()) << " "
                << detail::format_double(m.diffuse.y()) << " "
                << detail::format_double(m.diffuse.z()) << "\""
                << " specularColor=\"" << detail::format_double(m.specular.x()) << " "
                << detail::format_double(m.specular.y()) << " "
                << detail::format_double(m.specular.z()) << "\""
                << " emissiveColor=\"" << detail::format_double(m.emissive.x()) << " "
                << detail::format_double(m.emissive.y()) << " "
                << detail::format_double(m.emissive.z()) << "\""
                << " shininess=\"" << detail::format_double(m.shininess) << "\""
                << " transparency=\"" << detail::format_double(m.transparency) << "\"/>"
                << "</Appearance><IndexedTriangleSet coordIndex=\"";
            for (size_t i = 0; i < indices.size(); ++i)
                x3d << (i ? " " : "") << indices[i];
            x3d << "\"><Coordinate point=\"";
            for (size_t i = 0; i < coords.size(); ++i)
                x3d << (i ? " " : "") << detail::format_double(coords[i]);
            x3d << "\"/></IndexedTriangleSet></Shape>";
        }
        x3d << "</Scene>";

        SceneDocument doc = parse_x3d(x3d.str());
        if (doc.diagnostics.has_errors())
            return false;
        TranslationReport forward = translate_scene(doc, "case");
        if (forward.diags.has_errors() || !forward.mesh)
            return false;
        Result<SceneDocument> back = ogre_to_x3d_scene("case", &*forward.mesh,
                                                       forward.materials, forward.compositors);
        if (!back.ok())
            return false;

        for (const GeneratedMaterial& m : materials) {
            const X3dNode* appearance = back->find_def(m.name);
            if (!appearance || appearance->kind != NodeKind::Appearance)
                return false;
            const X3dNode* node = appearance->first_child(NodeKind::Material);
            if (!node)
                return false;
            ClassicMaterial got;
            if (std::optional<double> v = attr_float(*node, "ambientIntensity"))
                got.ambient_intensity = *v;
            if (std::optional<double> v = attr_float(*node, "shininess"))
                got.shininess = *v;
            if (std::optional<double> v = attr_float(*node, "transparency"))
                got.transparency = *v;
            auto vec = [&](const char* name, Eigen::Vector3d fallback) {
                std::vector<double> v = attr_floats(*node, name);
                return v.size() == 3 ? Eigen::Vector3d(v[0], v[1], v[2]) : fallback;
            };
            got.diffuse = vec("diffuseColor", {0.8, 0.8, 0.8});
            got.specular = vec("specularColor", {0, 0, 0});
            got.emissive = vec("emissiveColor", {0, 0, 0});
            const double tolerance = 1.0 / 256.0;
            auto close = [&](double a, double b) { return std::abs(a - b) <= tolerance; };
            if (!close(got.ambient_intensity, m.ambient_intensity) ||
                !close(got.shininess, m.shininess) ||
                !close(got.transparency, m.transparency))
                return false;
            for (int k = 0; k < 3; ++k)
                if (!close(got.diffuse[k], m.diffuse[k]) ||
                    !close(got.specular[k], m.specular[k]) ||
                    !close(got.emissive[k], m.emissive[k]))
                    return false;
        }

        std::vector<Triangle> recovered;
        if (!extract_triangles(*back, recovered))
            return false;
        std::sort(triangles.begin(), triangles.end());
        std::sort(recovered.begin(), recovered.end());
        if (triangles != recovered)
            return false;
    }
    return true;
}

VertexData random_vertex_data(std::mt19937_64& rng, size_t count) {
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> sets(0, 2);
    VertexData data;
    data.vertex_count = count;
    VertexBuffer buffer;
    buffer.has_positions = true;
    buffer.has_normals = coin(rng) == 1;
    buffer.texcoord_sets = size_t(sets(rng));
    for (size_t i = 0; i < count; ++i) {
        MeshVertex vertex;
        vertex.position = {coord(rng), coord(rng), coord(rng)};
        if (buffer.has_normals)
            vertex.normal = {coord(rng), coord(rng), coord(rng)};
        for (size_t s = 0; s < buffer.texcoord_sets; ++s)
            vertex.texcoords.push_back({coord(rng), coord(rng)});
        buffer.vertices.push_back(std::move(vertex));
    }
    data.buffers.push_back(std::move(buffer));
    return data;
}

OgreMesh random_mesh(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> third(0, 2);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<size_t> vertices(3, 12);
    std::uniform_int_distribution<int> submesh_count(1, 3);
    std::uniform_int_distribution<int> face_count(1, 20);
    OgreMesh mesh;
    bool with_shared = third(rng) == 0;
    if (with_shared)
        mesh.shared_geometry = random_vertex_data(rng, vertices(rng));
    int submeshes = submesh_count(rng);
    for (int s = 0; s < submeshes; ++s) {
        Submesh sm;
        sm.material = "m" + std::to_string(s);
        sm.use_shared_vertices = with_shared && coin(rng) == 1;
        size_t governing;
        if (sm.use_shared_vertices) {
            governing = mesh.shared_geometry->vertex_count;
        } else {
            sm.geometry = random_vertex_data(rng, vertices(rng));
            governing = sm.geometry->vertex_count;
        }
        std::uniform_int_distribution<uint32_t> pick(0, uint32_t(governing - 1));
        int faces = face_count(rng);
        for (int f = 0; f < faces; ++f)
            sm.faces.push_back({pick(rng), pick(rng), pick(rng)});
        mesh.submeshes.push_back(std::move(sm));
    }
    return mesh;
}

bool mesh_fixpoint_suite() {
    std::mt19937_64 rng = make_rng(424242);
    for (int i = 0; i < 200; ++i) {
        OgreMesh mesh = random_mesh(rng);
        std::string text = serialize_mesh_xml(mesh);
        Result<OgreMesh> parsed = parse_mesh_xml(text);
        if (!parsed.ok() || !mesh_equal(mesh, *parsed))
            return false;
        if (serialize_mesh_xml(*parsed) != text)
            return false;
    }
    return true;
}

bool round_trip_suites() { return material_round_trip_suite() && mesh_fixpoint_suite(); }

bool fuzz_robustness() {
    const char* scene_seed =
        "<X3D version=\"3.2\"><Scene>"
        "<Transform DEF=\"T\" translation=\"1 2 3\" rotation=\"0 1 0 0.5\">"
        "<Shape DEF=\"Box\"><Appearance DEF=\"Example\">"
        "<Material ambientIntensity=\"0.5\" diffuseColor=\"0.3 0.4 0.7\"/>"
        "</Appearance><IndexedTriangleSet coordIndex=\"0 1 2\">"
        "<Coordinate point=\"0 0 0 1 0 0 0 1 0\"/></IndexedTriangleSet></Shape>"
        "</Transform>"
        "<TimeSensor DEF=\"clock\"/>"
        "<PositionInterpolator DEF=\"move\" key=\"0 1\" keyValue=\"0 0 0 1 1 1\"/>"
        "<ROUTE fromNode=\"clock\" fromField=\"fraction_changed\" toNode=\"move\" "
        "toField=\"set_fraction\"/>"
        "</Scene></X3D>";
    const char* material_seed =
        "material Example {\n  technique {\n    pass {\n"
        "      ambient 0.5 0.5 0.5\n      diffuse 0.3 0.4 0.7\n"
        "      specular 1 1 1 25\n    }\n  }\n}\n"
        "hlms Other PBS {\n  roughness 0.4\n}\n";

    std::mt19937_64 rng = make_rng(1337);
    std::string mesh_seed;
    {
        std::mt19937_64 mesh_rng = make_rng(7);
        mesh_seed = serialize_mesh_xml(random_mesh(mesh_rng));
    }
    struct Seed {
        std::string text;
        int kind; // 0 x3d, 1 mesh, 2 material, 3 compositor
    };
    std::vector<Seed> corpus{{scene_seed, 0},
                             {kGaussBlurScene, 0},
                             {mesh_seed, 1},
                             {material_seed, 2},
                             {kNightVision, 3}};
    const std::string alphabet = "<>\"'{}&;/= \n\t\0abc123."s;

    for (int i = 0; i < 10000; ++i) {
        std::uniform_int_distribution<size_t> pick_seed(0, corpus.size() - 1);
        Seed seed = corpus[pick_seed(rng)];
        std::string text = seed.text;
        std::uniform_int_distribution<int> mutation_count(1, 8);
        int mutations = mutation_count(rng);
        for (int m = 0; m < mutations && !text.empty(); ++m) {
            std::uniform_int_distribution<size_t> pos_of(0, text.size() - 1);
            std::uniform_int_distribution<size_t> char_of(0, alphabet.size() - 1);
            std::uniform_int_distribution<int> op_of(0, 3);
            size_t pos = pos_of(rng);
            switch (op_of(rng)) {
            case 0:
                text[pos] = alphabet[char_of(rng)];
                break;
            case 1: {
                size_t len = std::min<size_t>(text.size() - pos, 1 + pos % 16);
                text.erase(pos, len);
                break;
            }
            case 2: {
                size_t len = std::min<size_t>(text.size() - pos, 1 + pos % 16);
                text.insert(pos, text.substr(pos, len));
                break;
            }
            default:
                text.insert(pos, 1, alphabet[char_of(rng)]);
                break;
            }
        }
        try {
            switch (seed.kind) {
            case 0: {
                SceneDocument doc = parse_x3d(text);
                if (!doc.diagnostics.has_errors()) {
                    TranslationReport report = translate_scene(doc, "fuzz");
                    (void)report;
                }
                break;
            }
            case 1:
                (void)parse_mesh_xml(text);
                break;
            case 2:
                (void)parse_material_script(text);
                break;
            default: {
                Result<std::vector<CompositorScript>> scripts = parse_compositor_script(text);
                if (scripts.ok())
                    for (const CompositorScript& script : *scripts) {
                        Result<CompositorGraph> graph = from_ogre_compositor(script);
                        if (graph.ok()) {
                            (void)validate_and_schedule(*graph);
                            (void)to_ogre_compositor(*graph);
                        }
                    }
                break;
            }
            }
        } catch (...) {
            return false;
        }
    }
    return true;
}

int failures = 0;

void check(bool ok, const char* name) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok)
        ++failures;
}

} // namespace

int main() {
    check(classic_appearance_reproduced(),
          "classic appearance translates to the reference pass colors");
    check(submesh_structure_reproduced(),
          "indexed triangle set becomes one interleaved submesh (815 faces, 531 vertices)");
    check(route_rewrite_matches(), "route rewriting nests the source node and is idempotent");
    check(transform_decomposition_property(),
          "transform decomposition recomposes within 1e-9 and rejects shear");
    check(compositor_round_trip(),
          "compositor scripts round-trip and misordered passes are rejected");
    check(definitions_shadow_registry(), "document definitions shadow the external registry");
    check(round_trip_suites(), "random scenes and meshes survive their round trips");
    check(fuzz_robustness(), "mutated inputs produce diagnostics, never crashes");
    return failures == 0 ? 0 : 1;
}
