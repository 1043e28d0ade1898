#include "x3db/routes.hpp"

namespace x3db {

namespace {

bool selector_matches(RoutePattern::KindSelector sel, NodeKind pattern_kind, NodeKind kind) {
    switch (sel) {
    case RoutePattern::KindSelector::Exact: return kind == pattern_kind;
    case RoutePattern::KindSelector::AnyInterpolator: return is_interpolator(kind);
    case RoutePattern::KindSelector::Any: return true;
    }
    return false;
}

} // namespace

bool RoutePattern::matches(NodeKind from, const std::string& from_f, NodeKind to,
                           const std::string& to_f) const {
    if (!selector_matches(from_selector, from_kind, from))
        return false;
    if (from_field != from_f)
        return false;
    if (!selector_matches(to_selector, to_kind, to))
        return false;
    return to_field.empty() || to_field == to_f;
}

const std::vector<RoutePattern>& default_route_patterns() {
    using Sel = RoutePattern::KindSelector;
    static const std::vector<RoutePattern> patterns = {
        {Sel::Exact, NodeKind::TimeSensor, "fraction_changed", Sel::AnyInterpolator,
         NodeKind::Unknown, "set_fraction"},
        {Sel::Exact, NodeKind::PositionInterpolator, "value_changed", Sel::Exact,
         NodeKind::Transform, "set_translation"},
        {Sel::Exact, NodeKind::OrientationInterpolator, "value_changed", Sel::Exact,
         NodeKind::Transform, "set_rotation"},
        {Sel::Exact, NodeKind::CoordinateInterpolator, "value_changed", Sel::Exact,
         NodeKind::Coordinate, "set_point"},
        {Sel::Exact, NodeKind::ScalarInterpolator, "value_changed", Sel::Any,
         NodeKind::Unknown, ""},
    };
    return patterns;
}

SceneDocument rewrite_routes(SceneDocument doc, const std::vector<RoutePattern>& patterns) {
    std::vector<RouteStmt> remaining;
    for (const RouteStmt& route : doc.routes) {
        const NodePath* from_path = doc.find_def_path(route.from_node);
        const NodePath* to_path = doc.find_def_path(route.to_node);
        if (!from_path || !to_path) {
            doc.diagnostics.error(route.line, route.column, "route-undefined",
                                  "ROUTE references undefined DEF name '" +
                                      (from_path ? route.to_node : route.from_node) + "'");
            remaining.push_back(route);
            continue;
        }
        const X3dNode* from_node = doc.node_at(*from_path);
        X3dNode* to_node = doc.node_at(*to_path);

        const RoutePattern* match = nullptr;
        for (const RoutePattern& p : patterns) {
            if (p.matches(from_node->kind, route.from_field, to_node->kind, route.to_field)) {
                match = &p;
                break;
            }
        }
        if (!match) {
            doc.diagnostics.warning(route.line, route.column, "route-unsupported",
                                    "ROUTE " + route.from_node + "." + route.from_field + " -> " +
                                        route.to_node + "." + route.to_field +
                                        " matches no compositional pattern");
            remaining.push_back(route);
            continue;
        }
        std::string container = match->to_field.empty() ? route.to_field : std::string();
        bool already_nested = false;
        for (const X3dNode& child : to_node->children) {
            if (child.kind != from_node->kind || child.use_name != route.from_node)
                continue;
            const std::string* existing = child.attribute("containerField");
            if ((existing ? *existing : std::string()) == container) {
                already_nested = true;
                break;
            }
        }
        if (already_nested)
            continue;
        X3dNode use;
        use.kind = from_node->kind;
        use.element_name = from_node->element_name;
        use.use_name = route.from_node;
        // a wildcard target field would otherwise be lost by the rewrite
        if (!container.empty())
            use.set_attribute("containerField", container);
        to_node->children.push_back(std::move(use));
    }
    doc.routes = std::move(remaining);
    return doc;
}

} // namespace x3db
