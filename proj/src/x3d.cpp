#include "x3db/x3d.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "diagnostics_impl.hpp"
#include "x3db/xml.hpp"

namespace x3db {

namespace {

struct KindName {
    NodeKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 25> kKindNames{{
    {NodeKind::Scene, "Scene"},
    {NodeKind::Group, "Group"},
    {NodeKind::Transform, "Transform"},
    {NodeKind::Shape, "Shape"},
    {NodeKind::Appearance, "Appearance"},
    {NodeKind::Material, "Material"},
    {NodeKind::PhysicalMaterial, "PhysicalMaterial"},
    {NodeKind::IndexedTriangleSet, "IndexedTriangleSet"},
    {NodeKind::Coordinate, "Coordinate"},
    {NodeKind::Normal, "Normal"},
    {NodeKind::TextureCoordinate, "TextureCoordinate"},
    {NodeKind::ImageTexture, "ImageTexture"},
    {NodeKind::Viewpoint, "Viewpoint"},
    {NodeKind::TimeSensor, "TimeSensor"},
    {NodeKind::ScalarInterpolator, "ScalarInterpolator"},
    {NodeKind::PositionInterpolator, "PositionInterpolator"},
    {NodeKind::OrientationInterpolator, "OrientationInterpolator"},
    {NodeKind::CoordinateInterpolator, "CoordinateInterpolator"},
    {NodeKind::ComposedShader, "ComposedShader"},
    {NodeKind::RenderedTexture, "RenderedTexture"},
    {NodeKind::Compositor, "Compositor"},
    {NodeKind::CompositorPass, "CompositorPass"},
    {NodeKind::CompositorOutput, "CompositorOutput"},
    {NodeKind::CustomAppearance, "CustomAppearance"},
    {NodeKind::Field, "field"},
}};

} // namespace

NodeKind node_kind_from_name(std::string_view element_name) {
    for (const auto& [kind, name] : kKindNames)
        if (name == element_name)
            return kind;
    return NodeKind::Unknown;
}

std::string_view node_kind_name(NodeKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "Unknown";
}

bool is_interpolator(NodeKind kind) {
    return kind == NodeKind::ScalarInterpolator || kind == NodeKind::PositionInterpolator ||
           kind == NodeKind::OrientationInterpolator || kind == NodeKind::CoordinateInterpolator;
}

const std::string* X3dNode::attribute(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name)
            return &v;
    return nullptr;
}

void X3dNode::set_attribute(std::string name, std::string value) {
    for (auto& [k, v] : attributes) {
        if (k == name) {
            v = std::move(value);
            return;
        }
    }
    attributes.emplace_back(std::move(name), std::move(value));
}

const X3dNode* X3dNode::first_child(NodeKind child_kind) const {
    for (const auto& c : children)
        if (c.kind == child_kind)
            return &c;
    return nullptr;
}

const X3dNode* SceneDocument::find_def(std::string_view name) const {
    const NodePath* path = find_def_path(name);
    return path ? node_at(*path) : nullptr;
}

const NodePath* SceneDocument::find_def_path(std::string_view name) const {
    for (const auto& [def, path] : defs)
        if (def == name)
            return &path;
    return nullptr;
}

const X3dNode* SceneDocument::node_at(const NodePath& path) const {
    const X3dNode* n = &root;
    for (int idx : path) {
        if (idx < 0 || static_cast<size_t>(idx) >= n->children.size())
            return nullptr;
        n = &n->children[static_cast<size_t>(idx)];
    }
    return n;
}

X3dNode* SceneDocument::node_at(const NodePath& path) {
    return const_cast<X3dNode*>(static_cast<const SceneDocument*>(this)->node_at(path));
}

namespace {

class DocBuilder {
public:
    explicit DocBuilder(SceneDocument& doc) : doc_(doc) {}

    void build_route(const XmlElement& el) {
        RouteStmt r;
        r.line = el.line;
        r.column = el.column;
        auto grab = [&](const char* key, std::string& out) {
            if (const std::string* v = el.attribute(key))
                out = *v;
        };
        grab("fromNode", r.from_node);
        grab("fromField", r.from_field);
        grab("toNode", r.to_node);
        grab("toField", r.to_field);
        if (r.from_node.empty() || r.from_field.empty() || r.to_node.empty() ||
            r.to_field.empty()) {
            doc_.diagnostics.error(el.line, el.column, "route-malformed",
                                   "ROUTE requires fromNode, fromField, toNode and toField");
            return;
        }
        doc_.routes.push_back(std::move(r));
    }

    X3dNode build(const XmlElement& el, NodePath& path, bool is_root) {
        X3dNode node;
        node.element_name = el.name;
        node.kind = node_kind_from_name(el.name);
        node.text = el.text;
        node.line = el.line;
        node.column = el.column;
        if (node.kind == NodeKind::Scene && !is_root) {
            doc_.diagnostics.error(el.line, el.column, "duplicate-scene",
                                   "only one Scene node per file is allowed");
            node.kind = NodeKind::Unknown;
        }
        if (node.kind == NodeKind::Unknown) {
            doc_.diagnostics.warning(el.line, el.column, "unknown-node",
                                     "unsupported element '" + el.name + "' kept verbatim");
            node.raw = el.raw;
        }
        bool has_other_attrs = false;
        for (const auto& [k, v] : el.attributes) {
            if (k == "DEF") {
                node.def_name = v;
            } else if (k == "USE") {
                node.use_name = v;
            } else {
                // containerField is placement metadata, permitted on USE nodes
                if (k != "containerField")
                    has_other_attrs = true;
                node.attributes.emplace_back(k, v);
            }
        }
        if (!node.use_name.empty() && (has_other_attrs || !el.children.empty())) {
            doc_.diagnostics.error(el.line, el.column, "use-with-content",
                                   "USE node '" + node.use_name +
                                       "' must not carry fields or children");
        }
        if (!node.def_name.empty()) {
            if (std::any_of(doc_.defs.begin(), doc_.defs.end(),
                            [&](const auto& d) { return d.first == node.def_name; })) {
                doc_.diagnostics.error(el.line, el.column, "duplicate-def",
                                       "DEF name '" + node.def_name + "' already defined");
            } else {
                doc_.defs.emplace_back(node.def_name, path);
            }
        }
        int child_index = 0;
        for (const XmlElement& child : el.children) {
            if (child.name == "ROUTE") {
                build_route(child);
                continue;
            }
            path.push_back(child_index);
            node.children.push_back(build(child, path, false));
            path.pop_back();
            ++child_index;
        }
        return node;
    }

private:
    SceneDocument& doc_;
};

void serialize_node(const SceneDocument& doc, const X3dNode& node, XmlElement& out) {
    if (node.kind == NodeKind::Unknown && !node.raw.empty()) {
        out.name = node.element_name;
        out.raw = node.raw;
        out.emit_raw = true;
        return;
    }
    out.name = node.element_name.empty() ? std::string(node_kind_name(node.kind))
                                         : node.element_name;
    if (!node.def_name.empty())
        out.set_attribute("DEF", node.def_name);
    if (!node.use_name.empty())
        out.set_attribute("USE", node.use_name);
    for (const auto& [k, v] : node.attributes)
        out.set_attribute(k, v);
    out.text = node.text;
    for (const X3dNode& child : node.children) {
        XmlElement& c = out.add_child("");
        serialize_node(doc, child, c);
    }
}

bool attrs_equal(const X3dNode& a, const X3dNode& b) {
    if (a.attributes.size() != b.attributes.size())
        return false;
    auto sorted = [](const X3dNode& n) {
        auto attrs = n.attributes;
        std::sort(attrs.begin(), attrs.end());
        return attrs;
    };
    return sorted(a) == sorted(b);
}

} // namespace

SceneDocument parse_x3d(std::string_view xml_text) {
    SceneDocument doc;
    doc.root.kind = NodeKind::Scene;
    doc.root.element_name = "Scene";
    Result<XmlElement> xml = xml_parse(xml_text);
    doc.diagnostics.merge(xml.diags);
    if (!xml.value)
        return doc;

    const XmlElement* scene = nullptr;
    if (xml->name == "Scene") {
        scene = &*xml;
    } else if (xml->name == "X3D") {
        for (const XmlElement& child : xml->children) {
            if (child.name != "Scene")
                continue; // head/meta wrapper content is not part of the scene graph
            if (scene) {
                doc.diagnostics.error(child.line, child.column, "duplicate-scene",
                                      "only one Scene node per file is allowed");
                return doc;
            }
            scene = &child;
        }
        if (!scene) {
            doc.diagnostics.error(xml->line, xml->column, "missing-scene",
                                  "X3D document has no Scene node");
            return doc;
        }
    } else {
        doc.diagnostics.error(xml->line, xml->column, "missing-scene",
                              "root element must be Scene or X3D, got '" + xml->name + "'");
        return doc;
    }

    DocBuilder builder(doc);
    NodePath path;
    doc.root = builder.build(*scene, path, true);
    return doc;
}

std::string serialize_x3d(const SceneDocument& doc) {
    XmlElement root;
    serialize_node(doc, doc.root, root);
    for (const RouteStmt& r : doc.routes) {
        XmlElement& route = root.add_child("ROUTE");
        route.set_attribute("fromNode", r.from_node);
        route.set_attribute("fromField", r.from_field);
        route.set_attribute("toNode", r.to_node);
        route.set_attribute("toField", r.to_field);
    }
    return xml_serialize(root);
}

namespace {

void resolve_uses_walk(SceneDocument& doc, X3dNode& node, const NodePath& path,
                       std::unordered_set<std::string>& defined) {
    if (!node.def_name.empty())
        defined.insert(node.def_name);
    if (node.is_use()) {
        if (defined.count(node.use_name)) {
            node.use_resolution = UseResolution::Internal;
            if (const NodePath* target = doc.find_def_path(node.use_name))
                node.use_target = *target;
        } else {
            // no diagnostic: redirection to an OGRE resource is decided later
            node.use_resolution = UseResolution::External;
            node.use_target.clear();
        }
    }
    for (size_t i = 0; i < node.children.size(); ++i) {
        NodePath child_path = path;
        child_path.push_back(static_cast<int>(i));
        resolve_uses_walk(doc, node.children[i], child_path, defined);
    }
}

} // namespace

SceneDocument resolve_uses(SceneDocument doc) {
    std::unordered_set<std::string> defined;
    NodePath path;
    resolve_uses_walk(doc, doc.root, path, defined);
    return doc;
}

bool structurally_equal(const X3dNode& a, const X3dNode& b) {
    if (a.kind != b.kind || a.def_name != b.def_name || a.use_name != b.use_name ||
        a.text != b.text)
        return false;
    if (a.kind == NodeKind::Unknown && a.element_name != b.element_name)
        return false;
    if (!attrs_equal(a, b))
        return false;
    if (a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(a.children[i], b.children[i]))
            return false;
    return true;
}

bool structurally_equal(const SceneDocument& a, const SceneDocument& b) {
    return a.routes == b.routes && structurally_equal(a.root, b.root);
}

std::vector<double> parse_floats(std::string_view value, bool* all_valid) {
    std::vector<double> out;
    bool valid = true;
    for (std::string_view field : detail::split_fields(value)) {
        if (auto v = detail::parse_double(field))
            out.push_back(*v);
        else
            valid = false;
    }
    if (all_valid)
        *all_valid = valid;
    return out;
}

std::optional<double> attr_float(const X3dNode& node, std::string_view name) {
    const std::string* v = node.attribute(name);
    if (!v)
        return std::nullopt;
    return detail::parse_double(*v);
}

std::optional<bool> attr_bool(const X3dNode& node, std::string_view name) {
    const std::string* v = node.attribute(name);
    if (!v)
        return std::nullopt;
    if (*v == "true" || *v == "TRUE")
        return true;
    if (*v == "false" || *v == "FALSE")
        return false;
    return std::nullopt;
}

std::vector<double> attr_floats(const X3dNode& node, std::string_view name) {
    const std::string* v = node.attribute(name);
    return v ? parse_floats(*v) : std::vector<double>{};
}

std::vector<std::string> parse_mfstring(std::string_view value) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < value.size()) {
        while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i])))
            ++i;
        if (i >= value.size())
            break;
        if (value[i] == '"') {
            ++i;
            std::string item;
            while (i < value.size() && value[i] != '"') {
                if (value[i] == '\\' && i + 1 < value.size())
                    ++i;
                item += value[i++];
            }
            if (i < value.size())
                ++i; // closing quote
            out.push_back(std::move(item));
        } else {
            size_t start = i;
            while (i < value.size() && !std::isspace(static_cast<unsigned char>(value[i])))
                ++i;
            out.emplace_back(value.substr(start, i - start));
        }
    }
    return out;
}

} // namespace x3db
