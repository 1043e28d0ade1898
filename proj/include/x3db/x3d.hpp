#pragma once

// Typed X3D document model for the supported interchange subset: parse,
// serialize, DEF/USE bookkeeping and field-value helpers. Unsupported
// elements survive round trips verbatim as Unknown nodes.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "x3db/diagnostics.hpp"

namespace x3db {

enum class NodeKind {
    Scene,
    Group,
    Transform,
    Shape,
    Appearance,
    Material,
    PhysicalMaterial,
    IndexedTriangleSet,
    Coordinate,
    Normal,
    TextureCoordinate,
    ImageTexture,
    Viewpoint,
    TimeSensor,
    ScalarInterpolator,
    PositionInterpolator,
    OrientationInterpolator,
    CoordinateInterpolator,
    ComposedShader,
    RenderedTexture,
    Compositor,
    CompositorPass,
    CompositorOutput,
    CustomAppearance,
    Field,
    Unknown,
};

NodeKind node_kind_from_name(std::string_view element_name);
std::string_view node_kind_name(NodeKind kind);
bool is_interpolator(NodeKind kind);

/// Child indices from the Scene root. ROUTE statements live outside the tree,
/// so indices are stable across route rewriting.
using NodePath = std::vector<int>;

enum class UseResolution { Unresolved, Internal, External };

struct X3dNode {
    NodeKind kind = NodeKind::Unknown;
    std::string element_name; // original tag; kept for Unknown round trips
    std::vector<std::pair<std::string, std::string>> attributes; // without DEF/USE
    std::vector<X3dNode> children;
    std::string text;
    std::string def_name;
    std::string use_name;
    UseResolution use_resolution = UseResolution::Unresolved;
    NodePath use_target; // valid when use_resolution == Internal
    std::string raw;     // original bytes for Unknown passthrough
    size_t line = 0;
    size_t column = 0;

    bool is_use() const { return !use_name.empty(); }
    const std::string* attribute(std::string_view name) const;
    void set_attribute(std::string name, std::string value);
    const X3dNode* first_child(NodeKind kind) const;
};

struct RouteStmt {
    std::string from_node;
    std::string from_field;
    std::string to_node;
    std::string to_field;
    size_t line = 0;
    size_t column = 0;

    bool operator==(const RouteStmt& other) const {
        return from_node == other.from_node && from_field == other.from_field &&
               to_node == other.to_node && to_field == other.to_field;
    }
};

struct SceneDocument {
    X3dNode root; // the single Scene node
    std::vector<std::pair<std::string, NodePath>> defs; // document order
    std::vector<RouteStmt> routes;
    DiagnosticList diagnostics;

    bool ok() const { return !diagnostics.has_errors(); }
    const X3dNode* find_def(std::string_view name) const;
    const NodePath* find_def_path(std::string_view name) const;
    const X3dNode* node_at(const NodePath& path) const;
    X3dNode* node_at(const NodePath& path);
};

SceneDocument parse_x3d(std::string_view xml_text);
std::string serialize_x3d(const SceneDocument& doc);

/// Annotates every USE node as internal (prior DEF in document order) or
/// external (candidate for resource redirection). Never diagnoses externals.
SceneDocument resolve_uses(SceneDocument doc);

/// Structural equality: tree shape, kinds, DEF/USE names, attributes
/// (order-insensitive), text and the route list. Diagnostics, raw bytes and
/// locations are ignored.
bool structurally_equal(const SceneDocument& a, const SceneDocument& b);
bool structurally_equal(const X3dNode& a, const X3dNode& b);

// Field-value helpers. Numeric fields are whitespace/comma separated; counts
// are validated by the consumers, not here.
std::vector<double> parse_floats(std::string_view value, bool* all_valid = nullptr);
std::optional<double> attr_float(const X3dNode& node, std::string_view name);
std::optional<bool> attr_bool(const X3dNode& node, std::string_view name);
std::vector<double> attr_floats(const X3dNode& node, std::string_view name);

/// MFString: whitespace-separated items; double-quoted items may contain
/// spaces and backslash escapes.
std::vector<std::string> parse_mfstring(std::string_view value);

} // namespace x3db
